//! Signed-sum shells inside arithmetic progressions, sunflower search in
//! set families, and extraction of a large 1-dissociated subfamily from a
//! sunflower of supports.

use crate::dissociation::{
    enumerate_ek, is_k_dissociated, require_2_dissociated, Dissociation, DissociationError,
    SignedSum,
};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SunflowerError {
    #[error(transparent)]
    Dissociation(#[from] DissociationError),
    #[error("search exceeded the budget of {0} nodes")]
    BudgetExceeded(u64),
    #[error("not a sunflower: {0}")]
    NotASunflower(String),
    #[error("progression step must be nonzero and length positive")]
    InvalidProgression,
}

/// `{start + i·step : 0 <= i < length}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticProgression {
    start: i64,
    step: i64,
    length: u64,
}

impl ArithmeticProgression {
    pub fn new(start: i64, step: i64, length: u64) -> Result<Self, SunflowerError> {
        if step == 0 || length == 0 {
            return Err(SunflowerError::InvalidProgression);
        }
        Ok(ArithmeticProgression {
            start,
            step,
            length,
        })
    }

    /// `[lo, hi]` with step 1.
    pub fn interval(lo: i64, hi: i64) -> Result<Self, SunflowerError> {
        if hi < lo {
            return Err(SunflowerError::InvalidProgression);
        }
        Self::new(lo, 1, (hi - lo) as u64 + 1)
    }

    pub fn len(&self) -> u64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: i64) -> bool {
        let diff = x as i128 - self.start as i128;
        let step = self.step as i128;
        diff % step == 0 && {
            let i = diff / step;
            i >= 0 && i < self.length as i128
        }
    }

    pub fn shifted(&self, by: i64) -> Self {
        ArithmeticProgression {
            start: self.start - by,
            ..*self
        }
    }
}

/// `E_k ∩ P` together with the comparison against `(C₁ ln|P| ln|A|)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgressionReport {
    pub hits: Vec<SignedSum>,
    pub bound: f64,
    pub within_bound: bool,
}

pub fn ek_in_progression(
    a: &[i64],
    k: usize,
    p: &ArithmeticProgression,
    c1: f64,
) -> Result<ProgressionReport, SunflowerError> {
    let hits: Vec<SignedSum> = enumerate_ek(a, k)?
        .into_iter()
        .filter(|s| p.contains(s.value))
        .collect();
    let base = c1 * (p.len() as f64).ln() * (a.len() as f64).ln();
    let bound = base.powi(k as i32);
    Ok(ProgressionReport {
        within_bound: hits.len() as f64 <= bound,
        hits,
        bound,
    })
}

/// A support decomposition `b = Σ_{z ∈ S_b} z` with `S_b ⊂ A ∪ -A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportDecomposition {
    pub element: i64,
    pub support: BTreeSet<i64>,
}

/// Every element of `∪E_k` mapped to its unique decomposition.
pub fn support_index(a: &[i64]) -> Result<HashMap<i64, SignedSum>, SunflowerError> {
    require_2_dissociated(a)?;
    let mut index = HashMap::new();
    for k in 0..=a.len() {
        for s in enumerate_ek(a, k)? {
            let prev = index.insert(s.value, s);
            assert!(prev.is_none(), "supports are unique over a 2-dissociated set");
        }
    }
    Ok(index)
}

pub fn decompose(a: &[i64], m: i64) -> Result<Option<SupportDecomposition>, SunflowerError> {
    Ok(support_index(a)?.remove(&m).map(|s| SupportDecomposition {
        element: m,
        support: s.support(),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SunflowerWitness {
    pub kernel: BTreeSet<i64>,
    /// Indices into the searched family.
    pub members: Vec<usize>,
    pub petals: Vec<BTreeSet<i64>>,
}

pub const SUNFLOWER_NODE_BUDGET: u64 = 10_000_000;

/// A sunflower with `r` members, or `None` when the family has none.
/// Kernels are drawn from `∅` and all pairwise intersections, smallest
/// first; within a kernel a backtracking search picks members with pairwise
/// disjoint petals.
pub fn find_sunflower(
    family: &[BTreeSet<i64>],
    r: usize,
) -> Result<Option<SunflowerWitness>, SunflowerError> {
    assert!(r >= 2, "a sunflower needs at least two petals");
    let mut distinct: Vec<usize> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, s) in family.iter().enumerate() {
        if seen.insert(s.clone()) {
            distinct.push(i);
        }
    }
    if distinct.len() < r {
        return Ok(None);
    }
    let mut kernels: BTreeSet<(usize, BTreeSet<i64>)> = BTreeSet::new();
    kernels.insert((0, BTreeSet::new()));
    for (x, &i) in distinct.iter().enumerate() {
        for &j in &distinct[x + 1..] {
            let k: BTreeSet<i64> = family[i].intersection(&family[j]).copied().collect();
            kernels.insert((k.len(), k));
        }
    }
    let mut nodes = 0u64;
    for (_, kernel) in kernels {
        let candidates: Vec<(usize, BTreeSet<i64>)> = distinct
            .iter()
            .filter(|&&i| kernel.is_subset(&family[i]))
            .map(|&i| (i, family[i].difference(&kernel).copied().collect()))
            .collect();
        if candidates.len() < r {
            continue;
        }
        let mut chosen = Vec::new();
        if pick_disjoint(&candidates, r, 0, &mut chosen, &mut BTreeSet::new(), &mut nodes)? {
            return Ok(Some(SunflowerWitness {
                petals: chosen.iter().map(|&c| candidates[c].1.clone()).collect(),
                members: chosen.iter().map(|&c| candidates[c].0).collect(),
                kernel,
            }));
        }
    }
    Ok(None)
}

fn pick_disjoint(
    candidates: &[(usize, BTreeSet<i64>)],
    r: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    used: &mut BTreeSet<i64>,
    nodes: &mut u64,
) -> Result<bool, SunflowerError> {
    if chosen.len() == r {
        return Ok(true);
    }
    for c in from..candidates.len() {
        if chosen.len() + (candidates.len() - c) < r {
            break;
        }
        *nodes += 1;
        if *nodes > SUNFLOWER_NODE_BUDGET {
            return Err(SunflowerError::BudgetExceeded(SUNFLOWER_NODE_BUDGET));
        }
        let petal = &candidates[c].1;
        if petal.iter().any(|z| used.contains(z)) {
            continue;
        }
        chosen.push(c);
        used.extend(petal.iter().copied());
        if pick_disjoint(candidates, r, c + 1, chosen, used, nodes)? {
            return Ok(true);
        }
        for z in petal {
            used.remove(z);
        }
        chosen.pop();
    }
    Ok(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtractionCase {
    /// No negated petal element is shared; only `b` leaves.
    Disjoint,
    /// `z ∈ S_b \ X` with `-z` in the petal of `partner`, which leaves too.
    Paired { z: i64, partner: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    /// `B''` in the order chosen.
    pub kept: Vec<i64>,
    /// `t = Σ_{x ∈ X} x`.
    pub shift: i64,
    pub cases: Vec<ExtractionCase>,
}

impl Extraction {
    pub fn shifted(&self) -> Vec<i64> {
        self.kept.iter().map(|b| b - self.shift).collect()
    }
}

fn check_sunflower(
    elements: &[i64],
    supports: &BTreeMap<i64, BTreeSet<i64>>,
    kernel: &BTreeSet<i64>,
) -> Result<BTreeMap<i64, BTreeSet<i64>>, SunflowerError> {
    let bad = |m: String| Err(SunflowerError::NotASunflower(m));
    let mut petals = BTreeMap::new();
    let mut used = BTreeSet::new();
    let mut base = BTreeSet::new();
    for &b in elements {
        let Some(s) = supports.get(&b) else {
            return bad(format!("no support for {b}"));
        };
        if s.iter().sum::<i64>() != b {
            return bad(format!("support of {b} does not sum to it"));
        }
        if s.iter().any(|z| *z == 0 || s.contains(&-z)) {
            return bad(format!("support of {b} is not a signed subset"));
        }
        if !kernel.is_subset(s) {
            return bad(format!("kernel is not inside the support of {b}"));
        }
        let petal: BTreeSet<i64> = s.difference(kernel).copied().collect();
        if petal.is_empty() {
            return bad(format!("empty petal for {b}"));
        }
        if petal.iter().any(|z| used.contains(z)) {
            return bad(format!("petal of {b} meets another petal"));
        }
        used.extend(petal.iter().copied());
        base.extend(s.iter().map(|z| z.abs()));
        if petals.insert(b, petal).is_some() {
            return bad(format!("{b} appears twice"));
        }
    }
    let base: Vec<i64> = base.into_iter().collect();
    require_2_dissociated(&base)?;
    Ok(petals)
}

/// Repeatedly takes the smallest remaining `b`. If some `z` in its petal has
/// `-z` in a remaining petal, the owner of `-z` is removed as well; among
/// several such `z` the smallest `|z|` wins, then the positive one.
pub fn extract_dissociated_half(
    elements: &[i64],
    supports: &BTreeMap<i64, BTreeSet<i64>>,
    kernel: &BTreeSet<i64>,
) -> Result<Extraction, SunflowerError> {
    let petals = check_sunflower(elements, supports, kernel)?;
    let mut remaining: BTreeSet<i64> = petals.keys().copied().collect();
    let mut kept = Vec::new();
    let mut cases = Vec::new();
    while let Some(b) = remaining.pop_first() {
        kept.push(b);
        let owner: HashMap<i64, i64> = remaining
            .iter()
            .flat_map(|c| petals[c].iter().map(move |&z| (z, *c)))
            .collect();
        let mut conflicts: Vec<(i64, i64)> = petals[&b]
            .iter()
            .filter_map(|z| owner.get(&-z).map(|&c| (*z, c)))
            .collect();
        conflicts.sort_by_key(|&(z, _)| (z.abs(), z < 0));
        match conflicts.first() {
            None => cases.push(ExtractionCase::Disjoint),
            Some(&(z, partner)) => {
                remaining.remove(&partner);
                cases.push(ExtractionCase::Paired { z, partner });
            }
        }
    }
    Ok(Extraction {
        kept,
        shift: kernel.iter().sum(),
        cases,
    })
}

/// A sunflower of supports over a random 2-dissociated set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunflowerInstance {
    pub base: Vec<i64>,
    pub kernel: BTreeSet<i64>,
    pub supports: BTreeMap<i64, BTreeSet<i64>>,
}

impl SunflowerInstance {
    pub fn elements(&self) -> Vec<i64> {
        self.supports.keys().copied().collect()
    }
}

/// A random 2-dissociated set of `size` elements in `[1, max]`, by
/// rejection sampling.
pub fn random_dissociated<R: Rng>(rng: &mut R, size: usize, max: i64) -> Vec<i64> {
    loop {
        let mut s: BTreeSet<i64> = BTreeSet::new();
        while s.len() < size {
            s.insert(rng.gen_range(1..=max));
        }
        let v: Vec<i64> = s.into_iter().collect();
        if matches!(is_k_dissociated(&v, 2), Ok(Dissociation::Dissociated)) {
            return v;
        }
    }
}

/// Members share a signed kernel drawn from part of the base; petals are
/// pairwise disjoint signed subsets of the rest, all of the same size. A
/// petal may hold `a` while another holds `-a`.
pub fn random_sunflower<R: Rng>(
    rng: &mut R,
    base_size: usize,
    kernel_size: usize,
    petal_size: usize,
    members: usize,
) -> SunflowerInstance {
    assert!(petal_size >= 1 && kernel_size < base_size);
    let base = random_dissociated(rng, base_size, 4i64.pow(base_size as u32).max(64));
    let mut order = base.clone();
    order.shuffle(rng);
    let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1 } else { -1 };
    let kernel: BTreeSet<i64> = order[..kernel_size].iter().map(|&a| a * sign(rng)).collect();
    let free = &order[kernel_size..];
    let mut used: BTreeSet<i64> = BTreeSet::new();
    let mut supports = BTreeMap::new();
    for _ in 0..members {
        let mut pool: Vec<i64> = free
            .iter()
            .flat_map(|&a| [a, -a])
            .filter(|z| !used.contains(z))
            .collect();
        pool.shuffle(rng);
        let mut petal = BTreeSet::new();
        for z in pool {
            if petal.len() == petal_size {
                break;
            }
            if !petal.contains(&-z) {
                petal.insert(z);
            }
        }
        if petal.len() < petal_size {
            break;
        }
        used.extend(petal.iter().copied());
        let support: BTreeSet<i64> = kernel.union(&petal).copied().collect();
        supports.insert(support.iter().sum(), support);
    }
    SunflowerInstance {
        base,
        kernel,
        supports,
    }
}
