//! The covering function `Φ(t) = #{v ∈ V : ‖tv‖ ≤ δ}`, its Fourier
//! coefficients, Fejér kernels, and `∫Φ dμ` for discrete and Riesz-product
//! measures.
//!
//! Every transcendental quantity here is a finite combination
//! `Σ_q c_q λ(q)` with rational `c_q` and `λ(q) = sin(2πqδ)/(πq)`. Such sums
//! go through [`LambdaSum`], which groups terms by the residue of `qa mod b`
//! (for `δ = a/b`) so that each distinct sine is evaluated once.

use crate::dissociation::{require_2_dissociated, DissociationError};
use crate::exact_ml::MlError;
use crate::interval::{cos_2pi, pi, sin_2pi, BoundedReal};
use crate::rational::{int, ratio, to_f64, torus_num, ExactRational, RationalDoc};
use crate::speeds::SpeedSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourierError {
    #[error("delta must lie in (0, 1/2], got {0}")]
    InvalidDelta(ExactRational),
    #[error("weight must lie in [0, 1], got {0}")]
    InvalidWeight(ExactRational),
    #[error("measure weights must be nonnegative and sum to 1")]
    InvalidMeasure,
    #[error("Riesz frequencies must be positive")]
    InvalidFrequency,
    #[error(transparent)]
    Dissociation(#[from] DissociationError),
    #[error("{size} Riesz frequencies exceed the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error(transparent)]
    Ml(#[from] MlError),
}

/// `Φ` for a speed set at width `δ ∈ (0, 1/2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSpec {
    speeds: SpeedSet,
    delta: ExactRational,
}

impl PhiSpec {
    pub fn new(speeds: SpeedSet, delta: ExactRational) -> Result<Self, FourierError> {
        if !delta.is_positive() || delta > ratio(1, 2) {
            return Err(FourierError::InvalidDelta(delta));
        }
        Ok(PhiSpec { speeds, delta })
    }

    pub fn speeds(&self) -> &SpeedSet {
        &self.speeds
    }

    pub fn delta(&self) -> &ExactRational {
        &self.delta
    }

    /// `Φ̂(0) = ∫Φ = 2δn`.
    pub fn mass(&self) -> ExactRational {
        &self.delta * int(2 * self.speeds.len() as u64)
    }
}

/// Closed indicator test `‖a v / d‖ ≤ δ` in integers.
fn inside(a: u128, v: u128, d: u128, delta: &(u128, u128)) -> bool {
    torus_num(a, v, d) * delta.1 <= delta.0 * d
}

fn delta_parts(delta: &ExactRational) -> Option<(u128, u128)> {
    Some((delta.numer().to_u128()?, delta.denom().to_u128()?))
}

/// Exact `Φ(t)`.
pub fn phi_value(spec: &PhiSpec, t: &ExactRational) -> usize {
    let t = crate::rational::frac(t);
    match (t.numer().to_u128(), t.denom().to_u128(), delta_parts(&spec.delta)) {
        (Some(a), Some(d), Some(dp))
            if d.checked_mul(spec.speeds.max() as u128).is_some()
                && d.checked_mul(dp.0).is_some() =>
        {
            spec.speeds.iter().filter(|&v| inside(a, v as u128, d, &dp)).count()
        }
        _ => spec
            .speeds
            .iter()
            .filter(|&v| {
                crate::rational::torus_norm(&(&t * int(v))).into_inner() <= spec.delta
            })
            .count(),
    }
}

/// Minimum of `Φ` over the torus with the smallest witness time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMinimum {
    pub value: usize,
    pub witness: ExactRational,
}

/// `Φ` is constant on the open pieces between breakpoints `(a ± δ)/v`; on a
/// breakpoint the closed indicator takes the larger one-sided value, so the
/// minimum is attained at a piece midpoint.
pub fn min_phi(spec: &PhiSpec, budget: u64) -> Result<PhiMinimum, FourierError> {
    let total: u128 = spec.speeds.iter().map(|v| 2 * v as u128).sum();
    if total > budget as u128 {
        return Err(MlError::BudgetExceeded {
            candidates: total,
            budget,
        }
        .into());
    }
    let mut points = BTreeSet::new();
    for v in spec.speeds.iter() {
        for a in 0..v {
            for s in [-1, 1] {
                let x = (int(a) + &spec.delta * int(s)) / int(v);
                points.insert(crate::rational::frac(&x));
            }
        }
    }
    let points: Vec<ExactRational> = points.into_iter().collect();
    let mut best: Option<PhiMinimum> = None;
    for (i, p) in points.iter().enumerate() {
        let next = if i + 1 < points.len() {
            points[i + 1].clone()
        } else {
            &points[0] + int(1)
        };
        let mid = crate::rational::frac(&((p + &next) / int(2)));
        let value = phi_value(spec, &mid);
        let better = match &best {
            None => true,
            Some(b) => value < b.value || (value == b.value && mid < b.witness),
        };
        if better {
            best = Some(PhiMinimum {
                value,
                witness: mid,
            });
        }
    }
    Ok(best.expect("at least two breakpoints"))
}

/// A finite combination `Σ_q c_q λ(q)` with exact coefficients. Since `λ` is
/// even, terms are stored under `|q|`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaSum {
    terms: BTreeMap<u64, ExactRational>,
}

impl LambdaSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, q: i64, coefficient: &ExactRational) {
        assert!(q != 0, "λ(0) is not part of a LambdaSum");
        let entry = self
            .terms
            .entry(q.unsigned_abs())
            .or_insert_with(ExactRational::zero);
        *entry += coefficient;
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &ExactRational)> {
        self.terms.iter().map(|(&q, c)| (q, c))
    }

    /// Coefficients of `sin(2π r/b)` for `δ = a/b`, with `r ∈ (0, b/2)`.
    fn by_residue(&self, delta: &ExactRational) -> (BigInt, BTreeMap<BigInt, ExactRational>) {
        let a = delta.numer().clone();
        let b = delta.denom().clone();
        let small = match (a.to_u128(), b.to_u128()) {
            (Some(a), Some(b)) if b < 1u128 << 63 => Some((a % b, b)),
            _ => None,
        };
        let mut out: BTreeMap<BigInt, ExactRational> = BTreeMap::new();
        for (&q, c) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let r: BigInt = match small {
                Some((a, b)) => BigInt::from((q as u128 % b) * a % b),
                None => (BigInt::from(q) * &a).mod_floor(&b),
            };
            let twice: BigInt = &r * 2u32;
            if r.is_zero() || twice == b {
                continue;
            }
            let (r, sign) = if twice > b { (&b - &r, -1) } else { (r, 1) };
            let term = c / int(q) * int(sign);
            *out.entry(r).or_insert_with(ExactRational::zero) += term;
        }
        (b, out)
    }

    /// Encloses `Σ_q c_q sin(2πqδ)/(πq)`.
    pub fn evaluate(&self, delta: &ExactRational, prec: u32) -> BoundedReal {
        let (b, groups) = self.by_residue(delta);
        let parts: Vec<BoundedReal> = groups
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(r, c)| {
                sin_2pi(&ExactRational::new(r.clone(), b.clone()), prec).mul_rational(c)
            })
            .collect();
        let total = BoundedReal::tree_sum(&parts, prec);
        total.div(&pi(prec)).expect("π is bounded away from zero")
    }

    /// Floating-point estimate of the same sum, for heuristic searches only.
    pub fn evaluate_f64(&self, delta: &ExactRational) -> f64 {
        let (b, groups) = self.by_residue(delta);
        let bf = b.to_f64().unwrap_or(f64::INFINITY);
        let total: f64 = groups
            .iter()
            .map(|(r, c)| {
                let x = r.to_f64().unwrap_or(0.0) / bf;
                to_f64(c) * (2.0 * std::f64::consts::PI * x).sin()
            })
            .sum();
        total / std::f64::consts::PI
    }
}

/// `λ(m) = sin(2πmδ)/(πm)`, the Fourier coefficient of `1_{[-δ,δ]}`.
pub fn lambda_coeff(m: i64, delta: &ExactRational, prec: u32) -> BoundedReal {
    let mut s = LambdaSum::new();
    s.add(m, &int(1));
    s.evaluate(delta, prec)
}

/// A Fourier coefficient of `Φ`. `exact` is set when the value is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierCoefficient {
    pub frequency: i64,
    pub value: BoundedReal,
    pub exact: Option<ExactRational>,
}

/// Adds `coefficient · Φ̂(m)` (for `m ≠ 0`) to `sum`.
fn add_phi_hat(sum: &mut LambdaSum, speeds: &SpeedSet, m: i64, coefficient: &ExactRational) {
    let mu = m.unsigned_abs();
    for v in speeds.iter() {
        if mu % v == 0 {
            sum.add((mu / v) as i64, coefficient);
        }
    }
}

/// `Φ̂(m) = Σ_{v | m} λ(m/v)`, and `Φ̂(0) = 2δn`.
pub fn phi_hat(spec: &PhiSpec, m: i64, prec: u32) -> FourierCoefficient {
    if m == 0 {
        let mass = spec.mass();
        return FourierCoefficient {
            frequency: 0,
            value: BoundedReal::from_rational(&mass, prec),
            exact: Some(mass),
        };
    }
    let mut sum = LambdaSum::new();
    add_phi_hat(&mut sum, &spec.speeds, m, &int(1));
    let exact = sum.is_empty().then(ExactRational::zero);
    FourierCoefficient {
        frequency: m,
        value: sum.evaluate(&spec.delta, prec),
        exact,
    }
}

/// `K̂_m(j) = max(0, 1 - |j|/m)`.
pub fn fejer_coefficient(m: u64, j: i64) -> ExactRational {
    assert!(m >= 1);
    let j = j.unsigned_abs();
    if j >= m {
        ExactRational::zero()
    } else {
        ratio(m - j, m)
    }
}

/// `K_m(x) = Σ_{|j|<m} (1 - |j|/m) e(jx)`.
pub fn fejer_kernel(m: u64, x: &ExactRational, prec: u32) -> BoundedReal {
    assert!(m >= 1);
    let parts: Vec<BoundedReal> = (1..m)
        .map(|j| cos_2pi(&(x * int(j)), prec).mul_rational(&(fejer_coefficient(m, j as i64) * int(2))))
        .collect();
    &BoundedReal::from_int(1, prec) + &BoundedReal::tree_sum(&parts, prec)
}

/// Weights for the one-sided Fejér sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FejerWeights {
    /// `1 - j/M`, the Fejér kernel of degree `M`.
    #[default]
    Proof,
    /// `1 - j/n` with `n = |V|`, negative once `j > n`.
    Statement,
}

/// `Σ_{j=1}^{M} w_j Φ̂(jv)`.
pub fn fejer_weighted_sum(
    spec: &PhiSpec,
    v: u64,
    degree: u64,
    weights: FejerWeights,
    prec: u32,
) -> BoundedReal {
    assert!(spec.speeds.contains(v), "v must be one of the speeds");
    fejer_sum(spec, v, degree, weights).evaluate(&spec.delta, prec)
}

pub(crate) fn fejer_sum(spec: &PhiSpec, v: u64, degree: u64, weights: FejerWeights) -> LambdaSum {
    let n = spec.speeds.len() as u64;
    let mut sum = LambdaSum::new();
    for j in 1..=degree {
        let w = match weights {
            FejerWeights::Proof => ratio(degree - j, degree),
            FejerWeights::Statement => ratio(n as i64 - j as i64, n as i64),
        };
        if w.is_zero() {
            continue;
        }
        let m = i64::try_from(j * v).expect("frequency fits in i64");
        add_phi_hat(&mut sum, &spec.speeds, m, &w);
    }
    sum
}

/// A probability measure with finitely many atoms in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure {
    atoms: Vec<(ExactRational, ExactRational)>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(ExactRational, ExactRational)>) -> Result<Self, FourierError> {
        let zero = ExactRational::zero();
        let one = ExactRational::one();
        let mut total = ExactRational::zero();
        for (point, weight) in &atoms {
            if *weight < zero || *point < zero || *point >= one {
                return Err(FourierError::InvalidMeasure);
            }
            total += weight;
        }
        if total != one {
            return Err(FourierError::InvalidMeasure);
        }
        Ok(DiscreteMeasure { atoms })
    }

    /// Uniform on `{j/p : 1 <= j < p}`.
    pub fn uniform_mod_p(p: u64) -> Self {
        assert!(p >= 2);
        let w = ratio(1, p - 1);
        DiscreteMeasure {
            atoms: (1..p).map(|j| (ratio(j, p), w.clone())).collect(),
        }
    }

    pub fn point_mass(t: ExactRational) -> Result<Self, FourierError> {
        Self::new(vec![(t, int(1))])
    }

    pub fn atoms(&self) -> &[(ExactRational, ExactRational)] {
        &self.atoms
    }
}

/// `∫Φ dμ = Σ weight · Φ(point)`, exactly.
pub fn integrate_discrete(spec: &PhiSpec, mu: &DiscreteMeasure) -> ExactRational {
    mu.atoms
        .iter()
        .map(|(t, w)| w * int(phi_value(spec, t) as u64))
        .sum()
}

pub const RIESZ_MAX_FREQUENCIES: usize = 12;

/// `R(x) = Π_{m ∈ D'} (1 - w cos 2πmx)` over a 2-dissociated `D'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RieszSpecDoc", into = "RieszSpecDoc")]
pub struct RieszSpec {
    frequencies: Vec<i64>,
    weight: ExactRational,
}

#[derive(Clone, Serialize, Deserialize)]
struct RieszSpecDoc {
    frequencies: Vec<i64>,
    weight: RationalDoc,
}

impl TryFrom<RieszSpecDoc> for RieszSpec {
    type Error = String;

    fn try_from(doc: RieszSpecDoc) -> Result<Self, Self::Error> {
        let weight = ExactRational::try_from(&doc.weight)?;
        RieszSpec::new(doc.frequencies, weight).map_err(|e| e.to_string())
    }
}

impl From<RieszSpec> for RieszSpecDoc {
    fn from(spec: RieszSpec) -> Self {
        RieszSpecDoc {
            weight: RationalDoc::from(&spec.weight),
            frequencies: spec.frequencies,
        }
    }
}

impl RieszSpec {
    pub fn new(frequencies: Vec<i64>, weight: ExactRational) -> Result<Self, FourierError> {
        if weight.is_negative() || weight > ExactRational::one() {
            return Err(FourierError::InvalidWeight(weight));
        }
        let mut frequencies = frequencies;
        frequencies.sort_unstable();
        frequencies.dedup();
        if frequencies.iter().any(|&m| m <= 0) {
            return Err(FourierError::InvalidFrequency);
        }
        if frequencies.len() > RIESZ_MAX_FREQUENCIES {
            return Err(FourierError::BudgetExceeded {
                size: 3u128.pow(frequencies.len() as u32),
                budget: 3u128.pow(RIESZ_MAX_FREQUENCIES as u32),
            });
        }
        require_2_dissociated(&frequencies)?;
        Ok(RieszSpec {
            frequencies,
            weight,
        })
    }

    pub fn frequencies(&self) -> &[i64] {
        &self.frequencies
    }

    pub fn weight(&self) -> &ExactRational {
        &self.weight
    }

    pub fn dimension(&self) -> usize {
        self.frequencies.len()
    }
}

/// All `(m, k)` with `m ∈ E_k`, including `(0, 0)`.
fn shells(frequencies: &[i64]) -> Vec<(i64, usize)> {
    let mut out = vec![(0i64, 0usize)];
    for &f in frequencies {
        let mut next = Vec::with_capacity(out.len() * 3);
        for &(m, k) in &out {
            next.push((m, k));
            next.push((m + f, k + 1));
            next.push((m - f, k + 1));
        }
        out = next;
    }
    out
}

/// `R̂` by direct expansion of the product, independent of the `E_k`
/// description.
pub fn riesz_coefficients(riesz: &RieszSpec) -> BTreeMap<i64, ExactRational> {
    let half = &riesz.weight / int(2);
    let mut poly: BTreeMap<i64, ExactRational> = BTreeMap::from([(0, int(1))]);
    for &f in &riesz.frequencies {
        let mut next: BTreeMap<i64, ExactRational> = BTreeMap::new();
        for (m, c) in &poly {
            *next.entry(*m).or_insert_with(ExactRational::zero) += c;
            for s in [-1, 1] {
                *next.entry(m + s * f).or_insert_with(ExactRational::zero) -= c * &half;
            }
        }
        next.retain(|_, c| !c.is_zero());
        poly = next;
    }
    poly
}

/// `R(x)`, enclosed.
pub fn riesz_density(riesz: &RieszSpec, x: &ExactRational, prec: u32) -> BoundedReal {
    let one = BoundedReal::from_int(1, prec);
    riesz.frequencies.iter().fold(one.clone(), |acc, &f| {
        let factor = &one - &cos_2pi(&(x * int(f)), prec).mul_rational(&riesz.weight);
        &acc * &factor
    })
}

/// `R(x)` in floating point.
pub fn riesz_density_f64(riesz: &RieszSpec, x: f64) -> f64 {
    let w = to_f64(&riesz.weight);
    riesz
        .frequencies
        .iter()
        .map(|&f| 1.0 - w * (2.0 * std::f64::consts::PI * f as f64 * x).cos())
        .product()
}

/// `∫ΦR` split into `2δn`, the `k = 1` shell and the `k >= 2` shells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RieszIntegral {
    pub value: BoundedReal,
    pub mass: ExactRational,
    pub t2: BoundedReal,
    pub t3: BoundedReal,
}

/// The δ-independent part of `∫ΦR = 2δn + Σ_k (-w/2)^k Σ_{m∈E_k} Φ̂(m)`:
/// the coefficients of each `λ(q)`.
#[derive(Clone, Debug)]
pub struct RieszExpansion {
    n: usize,
    t2: LambdaSum,
    t3: LambdaSum,
    fast: Vec<(u64, f64)>,
}

impl RieszExpansion {
    pub fn new(speeds: &SpeedSet, riesz: &RieszSpec) -> Self {
        let half = -(&riesz.weight / int(2));
        let powers: Vec<ExactRational> = (0..=riesz.dimension())
            .scan(int(1), |acc, _| {
                let cur = acc.clone();
                *acc = &*acc * &half;
                Some(cur)
            })
            .collect();
        let mut t2 = LambdaSum::new();
        let mut t3 = LambdaSum::new();
        if !riesz.weight.is_zero() {
            for (m, k) in shells(&riesz.frequencies) {
                if k == 0 {
                    continue;
                }
                let target = if k == 1 { &mut t2 } else { &mut t3 };
                add_phi_hat(target, speeds, m, &powers[k]);
            }
        }
        let mut merged = t2.clone();
        for (q, c) in t3.terms() {
            merged.add(q as i64, c);
        }
        let fast = merged
            .terms()
            .map(|(q, c)| (q, to_f64(c) / q as f64))
            .collect();
        RieszExpansion {
            n: speeds.len(),
            t2,
            t3,
            fast,
        }
    }

    pub fn integrate(&self, delta: &ExactRational, prec: u32) -> RieszIntegral {
        let mass = delta * int(2 * self.n as u64);
        let t2 = self.t2.evaluate(delta, prec);
        let t3 = self.t3.evaluate(delta, prec);
        let value = &(&BoundedReal::from_rational(&mass, prec) + &t2) + &t3;
        RieszIntegral {
            value,
            mass,
            t2,
            t3,
        }
    }

    pub fn integrate_f64(&self, delta: &ExactRational) -> f64 {
        let mass = 2.0 * self.n as f64 * to_f64(delta);
        let parts = match delta_parts(delta) {
            Some((a, b)) if b < 1 << 63 => (a % b, b),
            _ => return mass + self.t2.evaluate_f64(delta) + self.t3.evaluate_f64(delta),
        };
        let (a, b) = parts;
        let tau = 2.0 * std::f64::consts::PI;
        let sum: f64 = self
            .fast
            .iter()
            .map(|&(q, c)| {
                let r = (q as u128 % b) * a % b;
                c * (tau * (r as f64 / b as f64)).sin()
            })
            .sum();
        mass + sum / std::f64::consts::PI
    }
}

pub fn integrate_riesz(spec: &PhiSpec, riesz: &RieszSpec, prec: u32) -> RieszIntegral {
    RieszExpansion::new(&spec.speeds, riesz).integrate(&spec.delta, prec)
}

/// Left Riemann sum of `ΦR` on `N` points with a rigorous bound on its
/// distance to the integral: `TV(ΦR)/N`, using
/// `TV(ΦR) <= TV(Φ)·sup R + sup Φ·TV(R)`.
pub fn quadrature_riesz(spec: &PhiSpec, riesz: &RieszSpec, points: u64) -> (f64, f64) {
    let n = spec.speeds.len() as f64;
    let dp = delta_parts(&spec.delta).expect("small delta");
    let mut total = 0.0;
    for i in 0..points {
        let phi = spec
            .speeds
            .iter()
            .filter(|&v| inside(i as u128, v as u128, points as u128, &dp))
            .count() as f64;
        if phi > 0.0 {
            total += phi * riesz_density_f64(riesz, i as f64 / points as f64);
        }
    }
    let w = to_f64(&riesz.weight);
    let d = riesz.dimension() as i32;
    let sup_r = (1.0 + w).powi(d);
    let tv_phi = 2.0 * spec.speeds.iter().map(|v| v as f64).sum::<f64>();
    let freq_sum: f64 = riesz.frequencies.iter().map(|&f| f as f64).sum();
    let tv_r = (1.0 + w).powi((d - 1).max(0)) * w * 2.0 * std::f64::consts::PI * freq_sum;
    let remainder = (tv_phi * sup_r + n * tv_r) / points as f64 + 1e-9;
    (total / points as f64, remainder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_ml::ml_exact;
    use crate::interval::DEFAULT_PRECISION as P;
    use crate::speeds::validate_speed_set;

    fn spec(v: &[i64], delta: ExactRational) -> PhiSpec {
        PhiSpec::new(validate_speed_set(v).unwrap(), delta).unwrap()
    }

    fn near(x: &BoundedReal, y: f64, tol: f64) -> bool {
        (x.to_f64() - y).abs() < tol
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_value(&spec(&[1, 2, 3], ratio(1, 4)), &ratio(1, 4)), 2);
        assert_eq!(phi_value(&spec(&[4, 9, 11], ratio(1, 10)), &int(0)), 3);
        assert_eq!(phi_value(&spec(&[1], ratio(1, 8)), &ratio(1, 2)), 0);
    }

    #[test]
    fn min_phi_detects_covering() {
        assert_eq!(min_phi(&spec(&[1, 2, 3], ratio(1, 4)), 1000).unwrap().value, 1);
        let m = min_phi(&spec(&[1, 2, 3], ratio(1, 5)), 1000).unwrap();
        assert_eq!(m.value, 0);
        assert_eq!(phi_value(&spec(&[1, 2, 3], ratio(1, 5)), &m.witness), 0);
        assert_eq!(min_phi(&spec(&[1], ratio(1, 2)), 1000).unwrap().value, 1);
    }

    #[test]
    fn min_phi_matches_exact_ml() {
        for v in [&[1i64, 5][..], &[2, 3, 7], &[3, 4, 10, 12]] {
            let set = validate_speed_set(v).unwrap();
            let ml = ml_exact(&set).unwrap().value;
            let at = PhiSpec::new(set.clone(), ml.clone()).unwrap();
            assert!(min_phi(&at, 10_000).unwrap().value >= 1);
            let below = PhiSpec::new(set, &ml - ratio(1, 1000)).unwrap();
            assert_eq!(min_phi(&below, 10_000).unwrap().value, 0);
        }
    }

    #[test]
    fn lambda_examples() {
        let d = ratio(1, 4);
        assert!(near(&lambda_coeff(1, &d, P), 1.0 / std::f64::consts::PI, 1e-15));
        assert!(lambda_coeff(2, &d, P).is_exact());
        assert_eq!(lambda_coeff(2, &d, P).to_f64(), 0.0);
        assert_eq!(lambda_coeff(-3, &ratio(1, 7), P), lambda_coeff(3, &ratio(1, 7), P));
        for m in 1..40i64 {
            let x = lambda_coeff(m, &ratio(2, 11), P);
            let exact = (2.0 * std::f64::consts::PI * m as f64 * 2.0 / 11.0).sin()
                / (std::f64::consts::PI * m as f64);
            assert!(near(&x, exact, 1e-14), "m = {m}");
            let cap = (4.0f64 / 11.0).min(1.0 / (std::f64::consts::PI * m as f64));
            assert!(x.to_f64().abs() <= cap + 1e-15);
        }
    }

    #[test]
    fn phi_hat_examples() {
        let s = spec(&[1, 2, 3], ratio(1, 5));
        let zero = phi_hat(&s, 0, P);
        assert_eq!(zero.exact, Some(ratio(6, 5)));
        let single = spec(&[1], ratio(1, 6));
        assert_eq!(phi_hat(&single, 5, P).value, lambda_coeff(5, &ratio(1, 6), P));
        assert_eq!(phi_hat(&spec(&[2], ratio(1, 6)), 3, P).exact, Some(int(0)));
        assert_eq!(phi_hat(&s, 6, P).value, phi_hat(&s, -6, P).value);
    }

    #[test]
    fn fejer_examples() {
        assert_eq!(fejer_kernel(7, &int(0), P).to_f64(), 7.0);
        assert_eq!(fejer_coefficient(5, 0), int(1));
        assert_eq!(fejer_coefficient(5, 5), int(0));
        let closed = |m: u64, x: f64| {
            let s = (std::f64::consts::PI * m as f64 * x).sin();
            let t = (std::f64::consts::PI * x).sin();
            s * s / (m as f64 * t * t)
        };
        let k = fejer_kernel(6, &ratio(1, 7), P);
        assert!(near(&k, closed(6, 1.0 / 7.0), 1e-12));
        assert!(k.lower() >= int(0));
    }

    #[test]
    fn fejer_sum_is_large_for_initial_segment() {
        let s = spec(&[1, 2, 3, 4, 5, 6, 7, 8], ratio(1, 9));
        for v in 1..=8 {
            let x = fejer_weighted_sum(&s, v, 800, FejerWeights::Proof, P);
            assert!(x.lower() >= ratio(1, 100), "v = {v}: {x}");
        }
    }

    #[test]
    fn discrete_examples() {
        let s = spec(&[1, 2, 3], ratio(1, 4));
        assert_eq!(
            integrate_discrete(&s, &DiscreteMeasure::point_mass(int(0)).unwrap()),
            int(3)
        );
        // Φ at j/5: {1/5, 2/5, 3/5, 4/5} → counts by direct evaluation.
        let direct: usize = (1..5).map(|j| phi_value(&s, &ratio(j, 5))).sum();
        assert_eq!(
            integrate_discrete(&s, &DiscreteMeasure::uniform_mod_p(5)),
            ratio(direct as i64, 4)
        );
        assert!(DiscreteMeasure::new(vec![(int(0), ratio(1, 2))]).is_err());
    }

    #[test]
    fn uniform_prime_measure_formula() {
        // Σ_v 2⌊pδ⌋/(p-1) when p divides no speed.
        let set = validate_speed_set(&[1, 2, 3]).unwrap();
        let ml = ml_exact(&set).unwrap().value;
        let s = PhiSpec::new(set, ml.clone()).unwrap();
        for p in [5u64, 7, 11, 13, 101] {
            let floor = (&ml * int(p)).floor().to_integer();
            let expected = ExactRational::new(floor * 2 * 3, (p - 1).into());
            assert_eq!(integrate_discrete(&s, &DiscreteMeasure::uniform_mod_p(p)), expected);
        }
    }

    #[test]
    fn riesz_coefficients_match_shells() {
        let r = RieszSpec::new(vec![1, 3, 9], ratio(1, 2)).unwrap();
        let coeffs = riesz_coefficients(&r);
        assert_eq!(coeffs[&0], int(1));
        for (m, k) in shells(r.frequencies()) {
            let expected = (-ratio(1, 4)).pow(k as i32);
            assert_eq!(coeffs[&m], expected, "m = {m}");
        }
        assert_eq!(coeffs.len(), 27);
    }

    #[test]
    fn riesz_rejects_bad_specs() {
        assert!(matches!(
            RieszSpec::new(vec![1, 2], ratio(1, 2)),
            Err(FourierError::Dissociation(_))
        ));
        assert!(RieszSpec::new(vec![1], ratio(3, 2)).is_err());
    }

    #[test]
    fn riesz_zero_weight_is_mass() {
        let s = spec(&[2, 3, 7], ratio(1, 8));
        let r = RieszSpec::new(vec![1, 3], int(0)).unwrap();
        let i = integrate_riesz(&s, &r, P);
        assert!(i.value.is_exact());
        assert_eq!(i.value.lower(), ratio(3, 4));
    }

    #[test]
    fn riesz_matches_quadrature() {
        for (v, delta) in [(&[1i64, 3][..], ratio(1, 2)), (&[1, 3], ratio(1, 5)), (&[2, 3, 7], ratio(1, 6))] {
            let s = spec(v, delta);
            let r = RieszSpec::new(vec![1, 3], int(1)).unwrap();
            let i = integrate_riesz(&s, &r, P);
            let (q, err) = quadrature_riesz(&s, &r, 200_000);
            assert!((i.value.to_f64() - q).abs() <= err, "{v:?}: {} vs {q} ± {err}", i.value);
        }
        let i = integrate_riesz(&spec(&[1, 3], ratio(1, 2)), &RieszSpec::new(vec![1, 3], int(1)).unwrap(), P);
        assert!(near(&i.value, 2.0, 1e-30));
    }

    #[test]
    fn riesz_at_ml_is_at_least_one() {
        let set = validate_speed_set(&[3, 4, 10]).unwrap();
        let ml = ml_exact(&set).unwrap().value;
        let s = PhiSpec::new(set, ml).unwrap();
        for w in [ratio(1, 4), ratio(1, 2), int(1)] {
            let r = RieszSpec::new(vec![2, 7], w).unwrap();
            let i = integrate_riesz(&s, &r, P);
            assert!(i.value.upper() >= int(1), "{}", i.value);
            let f = RieszExpansion::new(s.speeds(), &r).integrate_f64(s.delta());
            assert!((f - i.value.to_f64()).abs() < 1e-12);
        }
    }

    #[test]
    fn density_is_nonnegative() {
        let r = RieszSpec::new(vec![1, 3, 9], int(1)).unwrap();
        for i in 0..200 {
            let x = ratio(i, 200);
            assert!(riesz_density(&r, &x, P).upper() >= int(0));
            assert!(riesz_density_f64(&r, i as f64 / 200.0) >= -1e-12);
        }
    }
}
