//! Validated speed sets.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpeedSetError {
    #[error("speed set is empty")]
    EmptySet,
    #[error("speed {0} is not a positive integer")]
    NonPositiveSpeed(i128),
    #[error("speed {0} appears more than once")]
    DuplicateSpeed(u64),
    #[error("speed {0} does not fit in 64 bits")]
    TooLarge(i128),
}

/// A set of `n >= 1` distinct positive integer speeds, sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct SpeedSet {
    speeds: Vec<u64>,
}

impl SpeedSet {
    /// Sorts and validates. Duplicates are rejected rather than merged.
    pub fn new<I, T>(raw: I) -> Result<Self, SpeedSetError>
    where
        I: IntoIterator<Item = T>,
        T: Into<i128>,
    {
        let mut speeds = Vec::new();
        for value in raw {
            let value: i128 = value.into();
            if value <= 0 {
                return Err(SpeedSetError::NonPositiveSpeed(value));
            }
            let v = u64::try_from(value).map_err(|_| SpeedSetError::TooLarge(value))?;
            speeds.push(v);
        }
        if speeds.is_empty() {
            return Err(SpeedSetError::EmptySet);
        }
        speeds.sort_unstable();
        if let Some(w) = speeds.windows(2).find(|w| w[0] == w[1]) {
            return Err(SpeedSetError::DuplicateSpeed(w[0]));
        }
        Ok(SpeedSet { speeds })
    }

    /// `1, 2, ..., n`.
    pub fn initial_segment(n: u64) -> Self {
        assert!(n >= 1);
        SpeedSet {
            speeds: (1..=n).collect(),
        }
    }

    pub fn speeds(&self) -> &[u64] {
        &self.speeds
    }

    pub fn len(&self) -> usize {
        self.speeds.len()
    }

    /// Always false; a speed set has at least one element.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max(&self) -> u64 {
        *self.speeds.last().expect("nonempty")
    }

    pub fn min(&self) -> u64 {
        self.speeds[0]
    }

    pub fn contains(&self, v: u64) -> bool {
        self.speeds.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.speeds.iter().copied()
    }

    pub fn gcd(&self) -> u64 {
        self.speeds.iter().fold(0u64, |g, &v| g.gcd(&v))
    }

    /// `λ·V`. Maximum loneliness is unchanged by this map.
    pub fn dilate(&self, factor: u64) -> Result<Self, SpeedSetError> {
        if factor == 0 {
            return Err(SpeedSetError::NonPositiveSpeed(0));
        }
        let speeds = self
            .speeds
            .iter()
            .map(|&v| {
                v.checked_mul(factor)
                    .ok_or(SpeedSetError::TooLarge(i128::from(v) * i128::from(factor)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SpeedSet { speeds })
    }

    /// Divides out the common gcd. Returns the normalized set together with
    /// the divisor so callers can record the step.
    pub fn normalize(&self) -> (Self, u64) {
        let g = self.gcd();
        let speeds = self.speeds.iter().map(|v| v / g).collect();
        (SpeedSet { speeds }, g)
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.speeds.iter().map(|&v| v as i64).collect()
    }
}

impl TryFrom<Vec<u64>> for SpeedSet {
    type Error = SpeedSetError;

    fn try_from(value: Vec<u64>) -> Result<Self, Self::Error> {
        SpeedSet::new(value)
    }
}

impl From<SpeedSet> for Vec<u64> {
    fn from(set: SpeedSet) -> Self {
        set.speeds
    }
}

impl fmt::Display for SpeedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.speeds.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Validates a raw integer sequence into a [`SpeedSet`].
pub fn validate_speed_set(raw: &[i64]) -> Result<SpeedSet, SpeedSetError> {
    SpeedSet::new(raw.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_input() {
        let set = validate_speed_set(&[3, 1, 2]).unwrap();
        assert_eq!(set.speeds(), &[1, 2, 3]);
        assert_eq!(set.len(), 3);
        assert_eq!(set.max(), 3);
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(
            validate_speed_set(&[1, 1]),
            Err(SpeedSetError::DuplicateSpeed(1))
        );
        assert_eq!(
            validate_speed_set(&[0, 2]),
            Err(SpeedSetError::NonPositiveSpeed(0))
        );
        assert_eq!(
            validate_speed_set(&[-4]),
            Err(SpeedSetError::NonPositiveSpeed(-4))
        );
        assert_eq!(validate_speed_set(&[]), Err(SpeedSetError::EmptySet));
    }

    #[test]
    fn normalization_is_explicit() {
        let set = validate_speed_set(&[6, 4, 10]).unwrap();
        let (norm, g) = set.normalize();
        assert_eq!(g, 2);
        assert_eq!(norm.speeds(), &[2, 3, 5]);
        assert_eq!(norm.dilate(2).unwrap(), set);
    }

    #[test]
    fn serde_validates() {
        let ok: SpeedSet = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(ok.speeds(), &[1, 2]);
        assert!(serde_json::from_str::<SpeedSet>("[1,1]").is_err());
    }
}
