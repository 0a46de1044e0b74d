//! Exact maximum loneliness `ML(V) = max_t min_j ‖t v_j‖`.
//!
//! `f(t) = min_j ‖t v_j‖` is piecewise linear with slopes `±v_j`. A local
//! maximum is either the peak of one sawtooth (`t v_j ∈ 1/2 + Z`) or a point
//! where an increasing branch of one sawtooth meets a decreasing branch of
//! another, which solves to `t = a / (v_i + v_j)`. Every maximizer therefore
//! has the form `a / D` with `D` among the sums `v_i + v_j` (`i <= j`; the
//! case `i = j` covers the peaks). Differences `v_j - v_i` are included as
//! well, which costs little and keeps the candidate set closed under the
//! other crossing type.

use crate::rational::{ratio, torus_norm, ExactRational};
use crate::speeds::SpeedSet;
use num_traits::Zero;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use thiserror::Error;

pub const DEFAULT_CANDIDATE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MlError {
    #[error("{candidates} candidate times exceed the budget of {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MlConfig {
    pub candidate_budget: u64,
}

impl Default for MlConfig {
    fn default() -> Self {
        MlConfig {
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
        }
    }
}

/// `ML(V)` together with the smallest time in `[0, 1)` attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlResult {
    pub value: ExactRational,
    pub witness_time: ExactRational,
}

/// `min_j ‖t v_j‖`, exactly.
pub fn loneliness_at(speeds: &SpeedSet, t: &ExactRational) -> ExactRational {
    speeds
        .iter()
        .map(|v| torus_norm(&(t * ExactRational::from_integer(v.into()))).into_inner())
        .min()
        .expect("speed sets are nonempty")
}

/// Numerator of `min_j ‖a v_j / d‖` over `d`.
#[inline]
fn loneliness_num(speeds: &[u64], a: u128, d: u128) -> u128 {
    let mut best = u128::MAX;
    for &v in speeds {
        let n = crate::rational::torus_num(a, v as u128, d);
        if n < best {
            best = n;
            if best == 0 {
                break;
            }
        }
    }
    best
}

/// Denominators of the candidate times.
pub fn candidate_denominators(speeds: &SpeedSet) -> BTreeSet<u128> {
    let v = speeds.speeds();
    let mut out = BTreeSet::new();
    for i in 0..v.len() {
        for j in i..v.len() {
            out.insert(v[i] as u128 + v[j] as u128);
            if j > i {
                out.insert((v[j] - v[i]) as u128);
            }
        }
    }
    out
}

/// Number of (unreduced) candidate times `a / D`, `0 <= a < D`.
pub fn candidate_count(speeds: &SpeedSet) -> u128 {
    candidate_denominators(speeds).iter().sum()
}

/// All candidate times in `[0, 1)`, reduced and deduplicated.
pub fn candidate_times(speeds: &SpeedSet) -> BTreeSet<ExactRational> {
    let mut out = BTreeSet::new();
    for d in candidate_denominators(speeds) {
        for a in 0..d {
            out.insert(ratio(a, d));
        }
    }
    out
}

/// Best candidate `(value_num, a, d)` for one denominator: the largest value,
/// earliest time on ties.
fn best_for_denominator(speeds: &[u64], d: u128) -> (u128, u128, u128) {
    let mut best_num = 0u128;
    let mut best_a = 0u128;
    for a in 1..d {
        let mut m = u128::MAX;
        for &v in speeds {
            let n = crate::rational::torus_num(a, v as u128, d);
            if n < m {
                m = n;
                if m <= best_num {
                    break;
                }
            }
        }
        if m > best_num {
            best_num = m;
            best_a = a;
        }
    }
    (best_num, best_a, d)
}

/// Orders candidates by value, then prefers the earlier time.
fn better(x: &(u128, u128, u128), y: &(u128, u128, u128)) -> Ordering {
    let (xn, xa, xd) = *x;
    let (yn, ya, yd) = *y;
    (xn * yd)
        .cmp(&(yn * xd))
        .then_with(|| (ya * xd).cmp(&(xa * yd)))
}

pub fn ml_exact(speeds: &SpeedSet) -> Result<MlResult, MlError> {
    ml_exact_with(speeds, &MlConfig::default())
}

pub fn ml_exact_with(speeds: &SpeedSet, config: &MlConfig) -> Result<MlResult, MlError> {
    let dens = candidate_denominators(speeds);
    let count: u128 = dens.iter().sum();
    if count > config.candidate_budget as u128 {
        return Err(MlError::BudgetExceeded {
            candidates: count,
            budget: config.candidate_budget,
        });
    }
    let v = speeds.speeds();
    let dens: Vec<u128> = dens.into_iter().collect();
    let reduce = |x: (u128, u128, u128), y: (u128, u128, u128)| {
        if better(&x, &y) == Ordering::Less {
            y
        } else {
            x
        }
    };
    let best = if count > 200_000 {
        dens.par_iter()
            .map(|&d| best_for_denominator(v, d))
            .reduce(|| (0, 0, 1), reduce)
    } else {
        dens.iter()
            .map(|&d| best_for_denominator(v, d))
            .fold((0, 0, 1), reduce)
    };
    let (num, a, d) = best;
    let witness_time = if num.is_zero() {
        ExactRational::zero()
    } else {
        ratio(a, d)
    };
    Ok(MlResult {
        value: ratio(num, d),
        witness_time,
    })
}

/// `max_{0 <= i < N} min_j ‖(i/N) v_j‖`: a lower bound on `ML(V)` within
/// `max(V)/N` of it. Independent of the candidate enumeration.
pub fn ml_grid_oracle(speeds: &SpeedSet, grid: u64) -> ExactRational {
    assert!(grid >= 1, "grid size must be positive");
    let n = grid as u128;
    let best = (0..n)
        .map(|i| loneliness_num(speeds.speeds(), i, n))
        .max()
        .unwrap_or(0);
    ratio(best, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::speeds::validate_speed_set;

    fn set(v: &[i64]) -> SpeedSet {
        validate_speed_set(v).unwrap()
    }

    /// Brute force over a fine exact grid whose denominators include every
    /// candidate denominator; independent of the candidate logic.
    fn brute_ml(speeds: &SpeedSet) -> ExactRational {
        let l: u128 = candidate_denominators(speeds)
            .iter()
            .fold(1u128, |acc, &d| num_integer::lcm(acc, d));
        ml_grid_oracle(speeds, l as u64)
    }

    #[test]
    fn loneliness_examples() {
        assert_eq!(loneliness_at(&set(&[1, 2, 3]), &ratio(1, 4)), ratio(1, 4));
        assert_eq!(loneliness_at(&set(&[7]), &ratio(1, 14)), ratio(1, 2));
        assert_eq!(loneliness_at(&set(&[2, 9, 11]), &int(0)), int(0));
    }

    #[test]
    fn candidate_examples() {
        let one = candidate_times(&set(&[1]));
        assert!(one.contains(&ratio(1, 2)));
        assert!(one.iter().all(|t| *t == int(0) || *t == ratio(1, 2)));
        assert!(candidate_times(&set(&[1, 3])).contains(&ratio(1, 2)));
        let c12 = candidate_times(&set(&[1, 2]));
        assert!(c12.contains(&ratio(1, 3)) && c12.contains(&ratio(2, 3)));
    }

    #[test]
    fn initial_segments() {
        for n in 1..=8u64 {
            let r = ml_exact(&SpeedSet::initial_segment(n)).unwrap();
            assert_eq!(r.value, ratio(1, n + 1), "n = {n}");
            assert_eq!(
                loneliness_at(&SpeedSet::initial_segment(n), &r.witness_time),
                r.value
            );
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(ml_exact(&set(&[1, 3])).unwrap().value, ratio(1, 2));
        assert_eq!(ml_exact(&set(&[2, 4])).unwrap().value, ratio(1, 3));
        let r = ml_exact(&set(&[1, 2, 3])).unwrap();
        assert_eq!(r.value, ratio(1, 4));
        assert_eq!(r.witness_time, ratio(1, 4));
    }

    #[test]
    fn witness_is_smallest_maximizer() {
        // {1}: peak at 1/2 only.
        assert_eq!(ml_exact(&set(&[1])).unwrap().witness_time, ratio(1, 2));
        // {1,2}: 1/3 and 2/3 tie; the smaller wins.
        assert_eq!(ml_exact(&set(&[1, 2])).unwrap().witness_time, ratio(1, 3));
    }

    #[test]
    fn agrees_with_brute_force() {
        let sets: &[&[i64]] = &[
            &[1, 5],
            &[2, 3, 7],
            &[3, 4, 10, 12],
            &[1, 6, 7],
            &[5, 6, 11, 13],
        ];
        for s in sets {
            let v = set(s);
            assert_eq!(ml_exact(&v).unwrap().value, brute_ml(&v), "{v}");
        }
    }

    #[test]
    fn grid_examples() {
        assert_eq!(ml_grid_oracle(&set(&[1]), 2), ratio(1, 2));
        assert_eq!(ml_grid_oracle(&set(&[4, 9]), 1), int(0));
        let g = ml_grid_oracle(&set(&[1, 2, 3]), 1000);
        assert!(g <= ratio(1, 4) && g >= ratio(1, 4) - ratio(3, 1000));
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = MlConfig {
            candidate_budget: 10,
        };
        assert!(matches!(
            ml_exact_with(&set(&[5, 9]), &cfg),
            Err(MlError::BudgetExceeded { .. })
        ));
    }
}
