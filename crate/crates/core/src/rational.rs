//! Exact rational arithmetic on the torus `R/Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// Builds `num/den` in lowest terms. Panics if `den == 0`.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

pub fn int(value: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(value.into())
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &ExactRational) -> ExactRational {
    x - x.floor()
}

/// A distance to the nearest integer; always in `[0, 1/2]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusDistance(ExactRational);

impl TorusDistance {
    pub fn value(&self) -> &ExactRational {
        &self.0
    }

    pub fn into_inner(self) -> ExactRational {
        self.0
    }
}

impl fmt::Display for TorusDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `‖x‖`: the distance from `x` to the nearest integer, computed exactly.
pub fn torus_norm(x: &ExactRational) -> TorusDistance {
    let f = frac(x);
    let g = ExactRational::one() - &f;
    TorusDistance(if f <= g { f } else { g })
}

/// `min(r, d - r)` for `r = (a * v) mod d`: the numerator of `‖a v / d‖`
/// over the denominator `d`.
#[inline]
pub(crate) fn torus_num(a: u128, v: u128, d: u128) -> u128 {
    let r = (a * v) % d;
    r.min(d - r)
}

/// `#[serde(with = "crate::rational::serde_rational")]` for [`ExactRational`]
/// fields, using the [`RationalDoc`] layout.
pub mod serde_rational {
    use super::{ExactRational, RationalDoc};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(q: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
        RationalDoc::from(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactRational, D::Error> {
        let doc = RationalDoc::deserialize(d)?;
        ExactRational::try_from(&doc).map_err(serde::de::Error::custom)
    }
}

/// Serialized form of an exact rational: decimal strings for numerator and
/// denominator, so arbitrarily large values survive JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalDoc {
    pub num: String,
    pub den: String,
}

impl From<&ExactRational> for RationalDoc {
    fn from(q: &ExactRational) -> Self {
        RationalDoc {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalDoc> for ExactRational {
    type Error = String;

    fn try_from(doc: &RationalDoc) -> Result<Self, Self::Error> {
        let num: BigInt = doc
            .num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator {:?}", doc.num))?;
        let den: BigInt = doc
            .den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator {:?}", doc.den))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(num, den))
    }
}

/// Parses `a`, `a/b` or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<ExactRational, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| format!("bad rational {s:?}"))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| format!("bad rational {s:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((whole, digits)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| format!("bad decimal {s:?}"))?
        };
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let scale = BigInt::from(10u32).pow(digits.len() as u32);
        let tail: BigInt = digits.parse().map_err(|_| format!("bad decimal {s:?}"))?;
        let mag = whole.abs() * &scale + tail;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    s.parse::<BigInt>()
        .map(BigRational::from_integer)
        .map_err(|_| format!("bad rational {s:?}"))
}

/// Decimal rendering with `digits` places after the point, truncated toward
/// zero. Used for human-readable output only.
pub fn to_decimal(q: &ExactRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (q.numer().abs() * &scale).div_floor(q.denom());
    let (whole, part) = scaled.div_rem(&scale);
    let sign = if q.is_negative() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!(
            "{sign}{whole}.{:0>width$}",
            part.to_string(),
            width = digits
        )
    }
}

pub fn to_f64(q: &ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// `⌈a / b⌉` for `b > 0`.
pub fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i128::from(a.rem_euclid(b) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_norm_examples() {
        assert_eq!(torus_norm(&ratio(3, 4)).into_inner(), ratio(1, 4));
        assert_eq!(torus_norm(&ratio(7, 2)).into_inner(), ratio(1, 2));
        assert_eq!(torus_norm(&ratio(13, 5)).into_inner(), ratio(2, 5));
        assert_eq!(torus_norm(&ratio(-1, 3)).into_inner(), ratio(1, 3));
        assert_eq!(torus_norm(&int(5)).into_inner(), int(0));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&ratio(-5, 4), 2), "-1.25");
    }

    #[test]
    fn rational_doc_round_trip() {
        let q = ratio(-22, 7);
        let doc = RationalDoc::from(&q);
        assert_eq!(ExactRational::try_from(&doc).unwrap(), q);
    }
}
