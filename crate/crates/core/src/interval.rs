//! Rigorous real arithmetic: a dyadic center with an outward-rounded error
//! radius.
//!
//! A [`BoundedReal`] at precision `p` is a pair of integers `(mid, rad)`
//! standing for every real in `[(mid - rad) / 2^p, (mid + rad) / 2^p]`.
//! Every operation returns an interval containing the exact result of the
//! same operation applied to any choice of points in its inputs. Precision
//! counts bits after the binary point; the quantities handled here are of
//! moderate magnitude, so this is also roughly the number of significant
//! bits.

use crate::rational::{frac, ratio, ExactRational, RationalDoc};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

pub const DEFAULT_PRECISION: u32 = 128;
pub const PRECISION_CAP: u32 = 4096;

/// Extra bits carried inside series evaluations.
const GUARD_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("comparison undecided at the precision cap of {bits} bits")]
pub struct Undecided {
    pub bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedReal {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// `⌊x / 2^s⌋`.
fn floor_shift(x: &BigInt, s: u32) -> BigInt {
    // `>>` on BigInt rounds toward negative infinity.
    x >> s
}

/// `⌈x / 2^s⌉` for `x >= 0`.
fn ceil_shift(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    (x + pow2(s) - 1u32) >> s
}

fn low_bits_zero(x: &BigInt, s: u32) -> bool {
    s == 0 || x.is_zero() || x.trailing_zeros().map_or(true, |tz| tz >= u64::from(s))
}

impl BoundedReal {
    pub fn zero(prec: u32) -> Self {
        BoundedReal {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_int(value: impl Into<BigInt>, prec: u32) -> Self {
        BoundedReal {
            mid: value.into() << prec,
            rad: BigInt::zero(),
            prec,
        }
    }

    /// Encloses `q`. Exact (radius zero) when `q` is dyadic at this precision.
    pub fn from_rational(q: &ExactRational, prec: u32) -> Self {
        let scaled = q.numer() << prec;
        let (mid, rem) = scaled.div_mod_floor(q.denom());
        let rad = if rem.is_zero() {
            BigInt::zero()
        } else {
            BigInt::one()
        };
        BoundedReal { mid, rad, prec }
    }

    /// The interval `[lo, hi]`, rounded outward to `prec` bits.
    pub fn from_bounds(lo: &ExactRational, hi: &ExactRational, prec: u32) -> Self {
        assert!(lo <= hi, "empty interval");
        let lo_units = (lo.numer() << prec).div_floor(lo.denom());
        let hi_scaled = hi.numer() << prec;
        let (hq, hr) = hi_scaled.div_mod_floor(hi.denom());
        let hi_units = if hr.is_zero() { hq } else { hq + 1u32 };
        let sum = &lo_units + &hi_units;
        let mid = sum.div_floor(&BigInt::from(2u32));
        let rad = &hi_units - &mid;
        BoundedReal { mid, rad, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> ExactRational {
        BigRational::new(&self.mid - &self.rad, pow2(self.prec))
    }

    pub fn upper(&self) -> ExactRational {
        BigRational::new(&self.mid + &self.rad, pow2(self.prec))
    }

    pub fn center(&self) -> ExactRational {
        BigRational::new(self.mid.clone(), pow2(self.prec))
    }

    pub fn radius(&self) -> ExactRational {
        BigRational::new(self.rad.clone(), pow2(self.prec))
    }

    pub fn width(&self) -> ExactRational {
        BigRational::new(&self.rad * 2u32, pow2(self.prec))
    }

    pub fn contains(&self, q: &ExactRational) -> bool {
        self.lower() <= *q && *q <= self.upper()
    }

    /// `Less` if every point is below `q`, `Greater` if every point is above,
    /// `None` when the interval straddles `q`. A degenerate interval equal to
    /// `q` compares `Equal`.
    pub fn cmp_rational(&self, q: &ExactRational) -> Option<Ordering> {
        if self.upper() < *q {
            Some(Ordering::Less)
        } else if self.lower() > *q {
            Some(Ordering::Greater)
        } else if self.is_exact() && self.center() == *q {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.center().to_f64().unwrap_or(f64::NAN)
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius().to_f64().unwrap_or(f64::INFINITY)
    }

    /// Re-expresses at `prec` bits, rounding outward when precision drops.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = prec - self.prec;
                BoundedReal {
                    mid: &self.mid << s,
                    rad: &self.rad << s,
                    prec,
                }
            }
            Ordering::Less => {
                let s = self.prec - prec;
                let exact = low_bits_zero(&self.mid, s);
                let mut rad = ceil_shift(&self.rad, s);
                if !exact {
                    rad += 1u32;
                }
                BoundedReal {
                    mid: floor_shift(&self.mid, s),
                    rad,
                    prec,
                }
            }
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let p = a.prec.max(b.prec);
        (a.with_prec(p), b.with_prec(p))
    }

    pub fn abs_upper(&self) -> ExactRational {
        let hi = self.upper().abs();
        let lo = self.lower().abs();
        if hi >= lo {
            hi
        } else {
            lo
        }
    }

    pub fn mul_rational(&self, q: &ExactRational) -> Self {
        self * &BoundedReal::from_rational(q, self.prec)
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        BoundedReal {
            mid: &self.mid * &k,
            rad: &self.rad * k.abs(),
            prec: self.prec,
        }
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        assert!(!k.is_zero(), "division by zero");
        let ka = k.abs();
        let (mid, rem) = self.mid.div_mod_floor(&ka);
        let (rq, rr) = self.rad.div_rem(&ka);
        let mut rad = if rr.is_zero() { rq } else { rq + 1u32 };
        if !rem.is_zero() {
            rad += 1u32;
        }
        let out = BoundedReal {
            mid,
            rad,
            prec: self.prec,
        };
        if k.is_negative() {
            -out
        } else {
            out
        }
    }

    /// `1/x`; `None` if the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        let lo = &self.mid - &self.rad;
        let hi = &self.mid + &self.rad;
        if lo.is_positive() {
            let num = pow2(2 * self.prec);
            let a = num.div_floor(&hi);
            let (bq, br) = num.div_mod_floor(&lo);
            let b = if br.is_zero() { bq } else { bq + 1u32 };
            let mid = (&a + &b).div_floor(&BigInt::from(2u32));
            let rad = &b - &mid;
            Some(BoundedReal {
                mid,
                rad,
                prec: self.prec,
            })
        } else if hi.is_negative() {
            (-self).recip().map(|r| -r)
        } else {
            None
        }
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        let (a, b) = Self::aligned(self, other);
        b.recip().map(|r| &a * &r)
    }

    /// Sums in a fixed balanced-tree order so the result does not depend on
    /// how a caller chunked the work.
    pub fn tree_sum(items: &[BoundedReal], prec: u32) -> BoundedReal {
        match items.len() {
            0 => BoundedReal::zero(prec),
            1 => items[0].with_prec(prec.max(items[0].prec)),
            len => {
                let (l, r) = items.split_at(len / 2);
                &Self::tree_sum(l, prec) + &Self::tree_sum(r, prec)
            }
        }
    }
}

impl Add for &BoundedReal {
    type Output = BoundedReal;

    fn add(self, rhs: &BoundedReal) -> BoundedReal {
        let (a, b) = BoundedReal::aligned(self, rhs);
        BoundedReal {
            mid: a.mid + b.mid,
            rad: a.rad + b.rad,
            prec: a.prec,
        }
    }
}

impl Sub for &BoundedReal {
    type Output = BoundedReal;

    fn sub(self, rhs: &BoundedReal) -> BoundedReal {
        let (a, b) = BoundedReal::aligned(self, rhs);
        BoundedReal {
            mid: a.mid - b.mid,
            rad: a.rad + b.rad,
            prec: a.prec,
        }
    }
}

impl Neg for BoundedReal {
    type Output = BoundedReal;

    fn neg(self) -> BoundedReal {
        BoundedReal {
            mid: -self.mid,
            rad: self.rad,
            prec: self.prec,
        }
    }
}

impl Neg for &BoundedReal {
    type Output = BoundedReal;

    fn neg(self) -> BoundedReal {
        -self.clone()
    }
}

impl Mul for &BoundedReal {
    type Output = BoundedReal;

    fn mul(self, rhs: &BoundedReal) -> BoundedReal {
        let (a, b) = BoundedReal::aligned(self, rhs);
        let p = a.prec;
        let mid = &a.mid * &b.mid;
        let rad = a.mid.abs() * &b.rad + b.mid.abs() * &a.rad + &a.rad * &b.rad;
        let exact = low_bits_zero(&mid, p);
        let mut rad = ceil_shift(&rad, p);
        if !exact {
            rad += 1u32;
        }
        BoundedReal {
            mid: floor_shift(&mid, p),
            rad,
            prec: p,
        }
    }
}

impl fmt::Display for BoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        let digits = digits.clamp(6, 40);
        let r = self.radius_f64();
        if r == 0.0 && !self.rad.is_zero() {
            write!(
                f,
                "{} ± 2^-{}",
                crate::rational::to_decimal(&self.center(), digits),
                self.prec as u64 - self.rad.bits()
            )
        } else {
            write!(
                f,
                "{} ± {:.3e}",
                crate::rational::to_decimal(&self.center(), digits),
                r
            )
        }
    }
}

/// Serialized enclosure: exact dyadic endpoints plus a readable rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedDoc {
    pub display: String,
    pub lower: RationalDoc,
    pub upper: RationalDoc,
}

impl From<&BoundedReal> for BoundedDoc {
    fn from(x: &BoundedReal) -> Self {
        BoundedDoc {
            display: x.to_string(),
            lower: RationalDoc::from(&x.lower()),
            upper: RationalDoc::from(&x.upper()),
        }
    }
}

/// Starting precision and the cap for "double until decided".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub cap: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start: DEFAULT_PRECISION,
            cap: PRECISION_CAP,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start: u32, cap: u32) -> Self {
        let start = start.max(16);
        PrecisionPolicy {
            start,
            cap: cap.max(start),
        }
    }

    /// Runs `eval` at the starting precision and doubles until it returns a
    /// decision or the cap is reached.
    pub fn decide<T, E>(
        &self,
        mut eval: impl FnMut(u32) -> Result<Option<T>, E>,
    ) -> Result<Result<T, Undecided>, E> {
        let mut bits = self.start;
        loop {
            if let Some(decision) = eval(bits)? {
                return Ok(Ok(decision));
            }
            if bits >= self.cap {
                return Ok(Err(Undecided { bits }));
            }
            bits = (bits * 2).min(self.cap);
        }
    }
}

// ---------------------------------------------------------------------------
// Transcendental constants and functions.

fn pi_cache() -> &'static Mutex<HashMap<u32, BoundedReal>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, BoundedReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `atan(1/x)` at `w` fractional bits, as (mid, rad) in units of `2^-w`.
fn atan_inv(x: u32, w: u32) -> (BigInt, BigInt) {
    let one = pow2(w);
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = one.div_floor(&x);
    let mut sum = power.clone();
    let mut k: u32 = 1;
    loop {
        power = power.div_floor(&x2);
        if power.is_zero() {
            break;
        }
        let term = power.div_floor(&BigInt::from(2 * k + 1));
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    (sum, BigInt::from(2 * k + 4))
}

/// `π` enclosed at `prec` bits (Machin's formula).
pub fn pi(prec: u32) -> BoundedReal {
    if let Some(hit) = pi_cache().lock().expect("pi cache").get(&prec) {
        return hit.clone();
    }
    let w = prec + GUARD_BITS;
    let (m5, r5) = atan_inv(5, w);
    let (m239, r239) = atan_inv(239, w);
    let raw = BoundedReal {
        mid: m5 * 16u32 - m239 * 4u32,
        rad: r5 * 16u32 + r239 * 4u32,
        prec: w,
    };
    let value = raw.with_prec(prec);
    pi_cache()
        .lock()
        .expect("pi cache")
        .insert(prec, value.clone());
    value
}

/// Taylor series at the dyadic point `c / 2^w` with `0 <= c/2^w < 1`.
/// Returns the series value and a bound on truncation plus rounding error,
/// both in units of `2^-w`.
fn series(c: &BigInt, w: u32, sine: bool) -> (BigInt, BigInt) {
    let one = pow2(w);
    let c2 = floor_shift(&(c * c), w);
    let (mut term, mut k) = if sine { (c.clone(), 1u64) } else { (one, 0u64) };
    let mut sum = term.clone();
    let mut steps: u64 = 0;
    loop {
        // term_{j+1} = term_j * c^2 / ((k+1)(k+2))
        let denom = BigInt::from((k + 1) * (k + 2));
        term = floor_shift(&(&term * &c2), w).div_floor(&denom);
        k += 2;
        if term.is_zero() {
            break;
        }
        steps += 1;
        if steps % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
    }
    (sum, BigInt::from(4 * steps + 8))
}

/// `sin(2π x)` or `cos(2π x)` for `x ∈ [0, 1/8]`.
fn trig_small(x: &ExactRational, prec: u32, sine: bool) -> BoundedReal {
    let w = prec + GUARD_BITS;
    let theta = pi(w).mul_rational(&(x * BigInt::from(2)));
    let (sum, err) = series(&theta.mid, w, sine);
    // sin and cos are 1-Lipschitz, so the argument's radius carries over.
    BoundedReal {
        mid: sum,
        rad: err + &theta.rad,
        prec: w,
    }
    .with_prec(prec)
}

/// `sin(2π x)` for rational `x`, using exact argument reduction.
pub fn sin_2pi(x: &ExactRational, prec: u32) -> BoundedReal {
    let half = ratio(1, 2);
    let quarter = ratio(1, 4);
    let eighth = ratio(1, 8);
    let mut y = frac(x);
    let mut negate = false;
    if y >= half {
        y -= &half;
        negate = true;
    }
    if y > quarter {
        y = &half - &y;
    }
    let value = if y.is_zero() {
        BoundedReal::zero(prec)
    } else if y == quarter {
        BoundedReal::from_int(1, prec)
    } else if y > eighth {
        trig_small(&(&quarter - &y), prec, false)
    } else {
        trig_small(&y, prec, true)
    };
    if negate {
        -value
    } else {
        value
    }
}

/// `cos(2π x)` for rational `x`.
pub fn cos_2pi(x: &ExactRational, prec: u32) -> BoundedReal {
    sin_2pi(&(x + ratio(1, 4)), prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn close(x: &BoundedReal, value: f64, tol: f64) -> bool {
        (x.to_f64() - value).abs() <= tol
    }

    #[test]
    fn shift_rounds_down() {
        assert_eq!(BigInt::from(-5) >> 1u32, BigInt::from(-3));
        assert_eq!(floor_shift(&BigInt::from(-4), 1), BigInt::from(-2));
        assert_eq!(ceil_shift(&BigInt::from(5), 1), BigInt::from(3));
    }

    #[test]
    fn pi_digits() {
        let p = pi(256);
        let known = "3.14159265358979323846264338327950288419716939937510";
        let lo = crate::rational::parse_rational(&known[..40]).unwrap();
        let hi = &lo + ratio(1, BigInt::from(10u32).pow(37));
        assert!(p.lower() >= lo && p.upper() <= hi, "{p}");
        assert!(p.radius() < ratio(1, BigInt::from(2u32).pow(250)));
    }

    #[test]
    fn sin_special_values() {
        assert!(sin_2pi(&int(0), 64).is_exact());
        assert_eq!(sin_2pi(&ratio(1, 4), 64).center(), int(1));
        assert_eq!(sin_2pi(&ratio(3, 4), 64).center(), int(-1));
        assert_eq!(sin_2pi(&ratio(5, 2), 64).center(), int(0));
        // sin(π/6) = 1/2
        let s = sin_2pi(&ratio(1, 12), 128);
        assert!(s.contains(&ratio(1, 2)));
        assert!(s.radius() < ratio(1, BigInt::from(2u32).pow(120)));
        // cos(π/3) = 1/2, cos(2π/3) = -1/2
        assert!(cos_2pi(&ratio(1, 6), 128).contains(&ratio(1, 2)));
        assert!(cos_2pi(&ratio(1, 3), 128).contains(&ratio(-1, 2)));
    }

    #[test]
    fn sin_matches_f64() {
        for num in -40..=40 {
            let x = ratio(num, 37);
            let s = sin_2pi(&x, 96);
            let expect = (2.0 * std::f64::consts::PI * num as f64 / 37.0).sin();
            assert!(close(&s, expect, 1e-14), "x={x}: {s} vs {expect}");
        }
    }

    #[test]
    fn arithmetic_encloses_rationals() {
        let a = BoundedReal::from_rational(&ratio(1, 3), 64);
        let b = BoundedReal::from_rational(&ratio(-2, 7), 64);
        assert!((&a + &b).contains(&ratio(1, 21)));
        assert!((&a - &b).contains(&ratio(13, 21)));
        assert!((&a * &b).contains(&ratio(-2, 21)));
        assert!(a.div(&b).unwrap().contains(&ratio(-7, 6)));
        assert!(a.div_int(-5).contains(&ratio(-1, 15)));
        assert!(b.recip().unwrap().contains(&ratio(-7, 2)));
        assert!(BoundedReal::from_rational(&ratio(0, 1), 8)
            .recip()
            .is_none());
    }

    #[test]
    fn dyadic_stays_exact() {
        let a = BoundedReal::from_rational(&ratio(3, 8), 32);
        let b = BoundedReal::from_rational(&ratio(5, 4), 32);
        assert!((&a * &b).is_exact());
        assert_eq!((&a * &b).center(), ratio(15, 32));
        assert!(a.with_prec(8).is_exact());
    }

    #[test]
    fn decide_doubles_until_cap() {
        let policy = PrecisionPolicy::new(32, 256);
        let mut seen = Vec::new();
        let out: Result<Result<u32, Undecided>, ()> = policy.decide(|bits| {
            seen.push(bits);
            Ok((bits >= 128).then_some(bits))
        });
        assert_eq!(out, Ok(Ok(128)));
        assert_eq!(seen, vec![32, 64, 128]);
        let never: Result<Result<(), Undecided>, ()> = policy.decide(|_| Ok(None));
        assert_eq!(never, Ok(Err(Undecided { bits: 256 })));
    }

    #[test]
    fn from_bounds_is_outward() {
        let x = BoundedReal::from_bounds(&ratio(1, 3), &ratio(1, 2), 20);
        assert!(x.lower() <= ratio(1, 3) && x.upper() >= ratio(1, 2));
    }

    #[test]
    fn tree_sum_is_order_fixed() {
        let items: Vec<_> = (1..=7)
            .map(|k| BoundedReal::from_rational(&ratio(1, k), 40))
            .collect();
        let s = BoundedReal::tree_sum(&items, 40);
        let exact: ExactRational = (1..=7).map(|k| ratio(1, k)).sum();
        assert!(s.contains(&exact));
    }
}
