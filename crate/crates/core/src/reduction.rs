//! Model reduction: rectifying a residue set of low additive dimension into a
//! short interval by a dilation, transferring loneliness bounds across the
//! dilation, and iterating towards a denser model.

use crate::dissociation::{dim2_minus_mod, span2_mod, DissociationError};
use crate::primes::{inv_mod, is_prime, primes_in};
use crate::rational::{int, ratio, ExactRational, RationalDoc};
use crate::speeds::{SpeedSet, SpeedSetError};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("residue {0} is zero modulo the prime")]
    ZeroResidue(i64),
    #[error("dim2- of the set is {actual}, above the requested {requested}")]
    DimensionTooLarge { actual: usize, requested: usize },
    #[error("modulus {modulus} exceeds the exhaustive budget {budget}")]
    BudgetExceeded { modulus: u64, budget: u64 },
    #[error("dilated element {element} leaves the interval of radius {radius}")]
    IntervalViolation { element: i64, radius: ExactRational },
    #[error("dilation identifies two speeds")]
    CollisionToMultiset,
    #[error("speed {0} is not in 1..p-1")]
    OutOfRange(u64),
    #[error("scale must be at least 2")]
    ScaleTooSmall,
    #[error("no suitable prime in ({lo}, {hi}]")]
    PrimeSearchFailed { lo: u64, hi: u64 },
    #[error(transparent)]
    Dissociation(#[from] DissociationError),
    #[error(transparent)]
    Speeds(#[from] SpeedSetError),
}

pub const EXHAUSTIVE_MODULUS_BUDGET: u64 = 1_000_000;

/// Representative of `x mod p` in `(-p/2, p/2)`.
pub fn centered(x: i128, p: u64) -> i64 {
    let p = p as i128;
    let r = x.rem_euclid(p);
    (if 2 * r > p { r - p } else { r }) as i64
}

/// Nonzero residues modulo an odd prime, stored as centered representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSet {
    modulus: u64,
    elements: BTreeSet<i64>,
}

impl ResidueSet {
    pub fn new(modulus: u64, raw: impl IntoIterator<Item = i64>) -> Result<Self, ReductionError> {
        if modulus == 2 || !is_prime(modulus) {
            return Err(ReductionError::NotPrime(modulus));
        }
        let mut elements = BTreeSet::new();
        for x in raw {
            let c = centered(x as i128, modulus);
            if c == 0 {
                return Err(ReductionError::ZeroResidue(x));
            }
            elements.insert(c);
        }
        Ok(ResidueSet { modulus, elements })
    }

    pub fn from_speeds(modulus: u64, speeds: &SpeedSet) -> Result<Self, ReductionError> {
        Self::new(modulus, speeds.iter().map(|v| v as i64))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &BTreeSet<i64> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `max_b |centered(λb)|`.
    pub fn dilated_radius(&self, lambda: u64) -> u64 {
        self.elements
            .iter()
            .map(|&b| centered(b as i128 * lambda as i128, self.modulus).unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn dim2_minus(&self) -> Result<usize, ReductionError> {
        let elems: Vec<i64> = self.elements.iter().copied().collect();
        Ok(dim2_minus_mod(&elems, self.modulus)?.dimension)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RectifyPath {
    Pigeonhole,
    Exhaustive,
}

/// A dilation unit `λ` with `λ·B ⊂ [-q, q]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectificationResult {
    pub dilation_unit: u64,
    pub radius: u64,
    pub path: RectifyPath,
    /// `|D₀|` for the pigeonhole path.
    pub dimension: Option<usize>,
}

impl RectificationResult {
    pub fn verify(&self, set: &ResidueSet) -> bool {
        self.dilation_unit % set.modulus != 0 && set.dilated_radius(self.dilation_unit) <= self.radius
    }
}

/// `q <= 8 d p^(1 - 1/(2d))`, compared as `q^(2d) <= (8d)^(2d) p^(2d-1)`.
pub fn within_rectification_bound(q: u64, d: usize, p: u64) -> bool {
    if d == 0 {
        return q == 0;
    }
    let e = 2 * d as u32;
    let lhs: BigInt = Pow::pow(BigInt::from(q), e);
    let rhs: BigInt = Pow::pow(BigInt::from(8 * d as u64), e) * Pow::pow(BigInt::from(p), e - 1);
    lhs <= rhs
}

/// The pigeonhole construction: a maximal 2-dissociated `D₀`, its halves
/// `D = D₀ ∪ D₀/2`, boxes of side `1/m` in `T^|D|` with `(2m)^(2d) >= p`, and
/// two units `λ₁ < λ₂` whose points share a box. Returns `λ₂ - λ₁`.
pub fn rectify(set: &ResidueSet, d: usize) -> Result<RectificationResult, ReductionError> {
    let p = set.modulus;
    let elems: Vec<i64> = set.elements.iter().copied().collect();
    let base = dim2_minus_mod(&elems, p)?;
    if base.dimension > d {
        return Err(ReductionError::DimensionTooLarge {
            actual: base.dimension,
            requested: d,
        });
    }
    let d0 = base.dimension;
    if d0 == 0 {
        return Ok(RectificationResult {
            dilation_unit: 1,
            radius: 0,
            path: RectifyPath::Pigeonhole,
            dimension: Some(0),
        });
    }
    let half = inv_mod(2, p);
    let mut coords: Vec<u64> = Vec::new();
    for &z in &base.witness {
        let z = z.rem_euclid(p as i64) as u64;
        coords.push(z);
        coords.push(((z as u128 * half as u128) % p as u128) as u64);
    }
    coords.sort_unstable();
    coords.dedup();
    let e = 2 * d0 as u32;
    let pb = BigInt::from(p);
    let mut m: u64 = 1;
    while Pow::pow(BigInt::from(2 * m), e) < pb {
        m += 1;
    }
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut found = None;
    for lambda in 0..p {
        let key: Vec<u64> = coords
            .iter()
            .map(|&z| ((lambda as u128 * z as u128 % p as u128) * m as u128 / p as u128) as u64)
            .collect();
        if let Some(&first) = seen.get(&key) {
            found = Some(lambda - first);
            break;
        }
        seen.insert(key, lambda);
    }
    let lambda = found.expect("fewer boxes than units");
    Ok(RectificationResult {
        dilation_unit: lambda,
        radius: set.dilated_radius(lambda),
        path: RectifyPath::Pigeonhole,
        dimension: Some(d0),
    })
}

/// Scans every unit; the smallest radius wins, then the smallest `λ`.
pub fn rectify_exhaustive(set: &ResidueSet) -> Result<RectificationResult, ReductionError> {
    let p = set.modulus;
    if p > EXHAUSTIVE_MODULUS_BUDGET {
        return Err(ReductionError::BudgetExceeded {
            modulus: p,
            budget: EXHAUSTIVE_MODULUS_BUDGET,
        });
    }
    let mut best = (u64::MAX, 1u64);
    for lambda in 1..p {
        let mut r = 0;
        for &b in &set.elements {
            r = r.max(centered(b as i128 * lambda as i128, p).unsigned_abs());
            if r >= best.0 {
                break;
            }
        }
        if r < best.0 {
            best = (r, lambda);
        }
    }
    Ok(RectificationResult {
        dilation_unit: best.1,
        radius: best.0,
        path: RectifyPath::Exhaustive,
        dimension: None,
    })
}

/// `B' = |π⁻¹(λ·π(B))|` with its loss: `ML(B) >= ML(B') - 1/ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilatedModel {
    pub model: SpeedSet,
    pub loss: ExactRational,
}

/// Requires `B ⊂ [1, p-1]`, `ℓ >= 2` and `|centered(λb)| <= p/ℓ` for all `b`.
pub fn dilate_model(
    set: &SpeedSet,
    p: u64,
    lambda: u64,
    scale: &ExactRational,
) -> Result<DilatedModel, ReductionError> {
    if p == 2 || !is_prime(p) {
        return Err(ReductionError::NotPrime(p));
    }
    if *scale < int(2) {
        return Err(ReductionError::ScaleTooSmall);
    }
    if let Some(v) = set.iter().find(|&v| v >= p) {
        return Err(ReductionError::OutOfRange(v));
    }
    if lambda % p == 0 {
        return Err(ReductionError::ZeroResidue(lambda as i64));
    }
    let radius = int(p) / scale;
    let mut images = BTreeSet::new();
    for b in set.iter() {
        let c = centered(b as i128 * lambda as i128, p);
        if int(c.unsigned_abs()) > radius {
            return Err(ReductionError::IntervalViolation { element: c, radius });
        }
        if !images.insert(c.unsigned_abs()) {
            return Err(ReductionError::CollisionToMultiset);
        }
    }
    Ok(DilatedModel {
        model: SpeedSet::new(images)?,
        loss: ExactRational::one() / scale,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    /// The model fits inside the stop radius.
    Dense,
    /// `q >= p/(2n)`.
    RadiusTooLargeForPrime,
    /// `q >= m`: no shrinkage.
    NoShrinkage,
    /// The step cap was reached.
    StepLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionConfig {
    pub path: RectifyPath,
    pub max_steps: usize,
    /// Records the proof's `m^(-ε)` charge with `ε = 1/(d (log n)²)` next to
    /// the exact charge.
    pub proof_schedule: bool,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            path: RectifyPath::Pigeonhole,
            max_steps: 64,
            proof_schedule: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub prime: u64,
    pub dilation_unit: u64,
    pub radius: u64,
    pub scale: RationalDoc,
    pub error_charge: RationalDoc,
    pub model_before: SpeedSet,
    pub model_after: SpeedSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_charge: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub original: SpeedSet,
    pub steps: Vec<ReductionStep>,
    pub total_error: RationalDoc,
    pub final_model: SpeedSet,
    pub stop_reason: StopReason,
}

impl ReductionTrace {
    pub fn total_error(&self) -> ExactRational {
        ExactRational::try_from(&self.total_error).expect("trace stores valid rationals")
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Smallest prime in `(2m, 4m]` with `0 ∉ π(V) + π(V)`, then `(4m, 8m]`.
pub fn choose_prime(set: &SpeedSet) -> Result<u64, ReductionError> {
    let m = set.max();
    let ok = |p: u64| {
        let v: Vec<u64> = set.iter().map(|v| v % p).collect();
        v.iter().all(|&a| a != 0 && v.iter().all(|&b| (a + b) % p != 0))
    };
    for (lo, hi) in [(2 * m, 4 * m), (4 * m, 8 * m)] {
        if let Some(p) = primes_in(lo, hi).find(|&p| p > 2 && ok(p)) {
            return Ok(p);
        }
    }
    Err(ReductionError::PrimeSearchFailed {
        lo: 2 * m,
        hi: 8 * m,
    })
}

pub fn reduce_model(
    set: &SpeedSet,
    stop_radius: u64,
    config: &ReductionConfig,
) -> Result<ReductionTrace, ReductionError> {
    let n = set.len() as u64;
    let mut current = set.clone();
    let mut steps = Vec::new();
    let mut total = ExactRational::zero();
    let stop_reason = loop {
        let m = current.max();
        if m <= stop_radius {
            break StopReason::Dense;
        }
        if steps.len() >= config.max_steps {
            break StopReason::StepLimit;
        }
        let p = choose_prime(&current)?;
        let residues = ResidueSet::from_speeds(p, &current)?;
        let rect = match config.path {
            RectifyPath::Pigeonhole => rectify(&residues, current.len())?,
            RectifyPath::Exhaustive => rectify_exhaustive(&residues)?,
        };
        let q = rect.radius;
        if 2 * n * q >= p {
            break StopReason::RadiusTooLargeForPrime;
        }
        if q >= m {
            break StopReason::NoShrinkage;
        }
        let scale = ratio(p, q);
        let dilated = dilate_model(&current, p, rect.dilation_unit, &scale)?;
        let charge = ratio(q, p);
        total += &charge;
        let schedule_charge = config.proof_schedule.then(|| {
            let d = residues.dim2_minus().unwrap_or(1).max(1) as f64;
            let ln = (n.max(2) as f64).ln();
            (m as f64).powf(-1.0 / (d * ln * ln))
        });
        steps.push(ReductionStep {
            prime: p,
            dilation_unit: rect.dilation_unit,
            radius: q,
            scale: RationalDoc::from(&scale),
            error_charge: RationalDoc::from(&charge),
            model_before: current.clone(),
            model_after: dilated.model.clone(),
            schedule_charge,
        });
        current = dilated.model;
    };
    Ok(ReductionTrace {
        original: set.clone(),
        steps,
        total_error: RationalDoc::from(&total),
        final_model: current,
        stop_reason,
    })
}

/// Re-checks every step of a trace from its recorded data.
pub fn verify_trace(trace: &ReductionTrace) -> Result<(), String> {
    let mut current = trace.original.clone();
    let mut total = ExactRational::zero();
    for (i, step) in trace.steps.iter().enumerate() {
        let fail = |msg: String| Err(format!("step {}: {msg}", i + 1));
        if step.model_before != current {
            return fail("model does not continue the previous step".into());
        }
        let scale = ExactRational::try_from(&step.scale)?;
        let charge = ExactRational::try_from(&step.error_charge)?;
        if step.radius == 0 || scale != ratio(step.prime, step.radius) {
            return fail("scale is not p/q".into());
        }
        if charge != ExactRational::one() / &scale {
            return fail("error charge is not 1/ℓ".into());
        }
        let dilated = match dilate_model(&current, step.prime, step.dilation_unit, &scale) {
            Ok(d) => d,
            Err(e) => return fail(e.to_string()),
        };
        if dilated.model != step.model_after {
            return fail("dilated model differs from the recorded one".into());
        }
        total += &charge;
        current = dilated.model;
    }
    if current != trace.final_model {
        return Err("final model does not match the last step".into());
    }
    if total != ExactRational::try_from(&trace.total_error)? {
        return Err("total error is not the sum of the charges".into());
    }
    Ok(())
}

/// Whether every element of `set` lies in `Span₂(D₀ ∪ D₀/2)` for the
/// maximal subset `D₀` used by [`rectify`].
pub fn span_contains_set(set: &ResidueSet) -> Result<bool, ReductionError> {
    let p = set.modulus;
    let elems: Vec<i64> = set.elements.iter().copied().collect();
    let base = dim2_minus_mod(&elems, p)?;
    let half = inv_mod(2, p) as i128;
    let mut d: Vec<i64> = base.witness.clone();
    d.extend(base.witness.iter().map(|&z| centered(z as i128 * half, p)));
    let span = span2_mod(&d, p)?;
    Ok(set
        .elements
        .iter()
        .all(|&b| span.contains(&(b.rem_euclid(p as i64)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_ml::ml_exact;
    use crate::speeds::validate_speed_set;

    fn set(v: &[i64]) -> SpeedSet {
        validate_speed_set(v).unwrap()
    }

    #[test]
    fn residue_set_validation() {
        let r = ResidueSet::new(11, [3, 5, 14]).unwrap();
        assert_eq!(r.elements(), &BTreeSet::from([3, 5]));
        assert_eq!(ResidueSet::new(11, [8]).unwrap().elements(), &BTreeSet::from([-3]));
        assert_eq!(ResidueSet::new(9, [1]), Err(ReductionError::NotPrime(9)));
        assert_eq!(ResidueSet::new(7, [14]), Err(ReductionError::ZeroResidue(14)));
    }

    #[test]
    fn exhaustive_examples() {
        let b = ResidueSet::new(11, [3, 5]).unwrap();
        let r = rectify_exhaustive(&b).unwrap();
        assert_eq!(r.radius, 2);
        assert!(r.verify(&b));
        // Oracle: brute force over all units.
        let brute = (1..11).map(|l| b.dilated_radius(l)).min().unwrap();
        assert_eq!(brute, 2);
        assert_eq!(b.dilated_radius(4), 2);
        assert_eq!(rectify_exhaustive(&ResidueSet::new(101, [1]).unwrap()).unwrap().radius, 1);
        let full = ResidueSet::new(13, 1..13).unwrap();
        assert_eq!(rectify_exhaustive(&full).unwrap().radius, 6);
    }

    #[test]
    fn pigeonhole_respects_bound() {
        for (p, raw) in [(11u64, vec![3i64, 5]), (101, vec![7, 30, 44]), (997, vec![1, 500]), (9973, vec![12, 1000, 4321])] {
            let b = ResidueSet::new(p, raw).unwrap();
            let d = b.dim2_minus().unwrap();
            let r = rectify(&b, d).unwrap();
            assert!(r.verify(&b));
            assert!(within_rectification_bound(r.radius, d, p), "p = {p}");
            assert!(rectify_exhaustive(&b).unwrap().radius <= r.radius);
            assert!(span_contains_set(&b).unwrap());
        }
        let single = ResidueSet::new(31, [7]).unwrap();
        let r = rectify(&single, 1).unwrap();
        assert!(r.verify(&single));
    }

    #[test]
    fn bound_arithmetic() {
        // 8·1·p^(1/2) for p = 100 is 80.
        assert!(within_rectification_bound(80, 1, 100));
        assert!(!within_rectification_bound(81, 1, 100));
    }

    #[test]
    fn dilation_example() {
        let out = dilate_model(&set(&[3, 5]), 11, 4, &ratio(11, 2)).unwrap();
        assert_eq!(out.model, set(&[1, 2]));
        assert_eq!(out.loss, ratio(2, 11));
        let lhs = ml_exact(&set(&[3, 5])).unwrap().value;
        let rhs = ml_exact(&out.model).unwrap().value - &out.loss;
        assert_eq!(rhs, ratio(5, 33));
        assert!(lhs >= rhs);
        let same = dilate_model(&set(&[1, 2]), 11, 1, &ratio(5, 1)).unwrap();
        assert_eq!(same.model, set(&[1, 2]));
        assert!(matches!(
            dilate_model(&set(&[3, 5]), 11, 1, &ratio(11, 2)),
            Err(ReductionError::IntervalViolation { .. })
        ));
    }

    #[test]
    fn reduction_examples() {
        let trivial = reduce_model(&set(&[3, 7]), 10, &ReductionConfig::default()).unwrap();
        assert!(trivial.is_trivial());
        assert_eq!(trivial.final_model, set(&[3, 7]));
        assert_eq!(trivial.stop_reason, StopReason::Dense);

        let v = set(&[1001, 2003]);
        let cfg = ReductionConfig {
            path: RectifyPath::Exhaustive,
            ..ReductionConfig::default()
        };
        let t = reduce_model(&v, 1, &cfg).unwrap();
        assert!(!t.steps.is_empty());
        verify_trace(&t).unwrap();
        let lhs = ml_exact(&v).unwrap().value;
        let rhs = ml_exact(&t.final_model).unwrap().value - t.total_error();
        assert!(lhs >= rhs);
        let t = reduce_model(&v, 1, &ReductionConfig::default()).unwrap();
        verify_trace(&t).unwrap();
    }

    #[test]
    fn tampered_trace_fails() {
        let cfg = ReductionConfig {
            path: RectifyPath::Exhaustive,
            ..ReductionConfig::default()
        };
        let mut t = reduce_model(&set(&[1001, 2003]), 1, &cfg).unwrap();
        t.total_error = RationalDoc::from(&ratio(0, 1));
        assert!(verify_trace(&t).is_err());
    }

    #[test]
    fn prime_choice() {
        let p = choose_prime(&set(&[1001, 2003])).unwrap();
        assert!(p > 4006 && p <= 8012 && is_prime(p));
    }
}
