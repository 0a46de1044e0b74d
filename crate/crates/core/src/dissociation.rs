//! k-dissociativity, additive dimension, 2-spans and the signed-sum shells
//! `E_k` of a dissociated set.
//!
//! A set `D` is k-dissociated when `Σ ε_d d = 0` with `ε_d ∈ {-k..k}` forces
//! every `ε_d = 0`. Subset searches for `dim₂` and `dim₂⁻` grow a candidate
//! set one element at a time while maintaining its 2-span: `S ∪ {x}` stays
//! 2-dissociated exactly when neither `x` nor `2x` lies in `Span₂(S)`.
//! The same code runs over `Z/pZ` (for the reduction module) by reducing
//! every sum modulo `p`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DissociationError {
    #[error("{what}: size {size} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        size: u128,
        budget: u128,
    },
    #[error("set is not 2-dissociated: {0}")]
    NotDissociated(Relation),
    #[error("sums overflow 64-bit integers")]
    Overflow,
}

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DissociationBudget {
    /// Largest set accepted by the relation search.
    pub max_elements: usize,
    /// Largest half-table for the meet-in-the-middle search, `(2k+1)^⌈|D|/2⌉`.
    pub max_table: u64,
    /// Largest span or shell that may be materialized.
    pub max_enumeration: u64,
}

impl Default for DissociationBudget {
    fn default() -> Self {
        DissociationBudget {
            max_elements: 24,
            max_table: 2_000_000,
            max_enumeration: 10_000_000,
        }
    }
}

/// Below this size the relation search is a pruned depth-first search.
const DFS_LIMIT: usize = 10;

/// A nontrivial vanishing combination `Σ ε_d d = 0` with `|ε_d| <= order`.
/// Only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub coefficients: BTreeMap<i64, i32>,
    pub order: u32,
}

impl Relation {
    /// Re-checks the relation over the integers.
    pub fn verify(&self) -> bool {
        self.check(None)
    }

    /// Re-checks the relation modulo `p`.
    pub fn verify_mod(&self, p: u64) -> bool {
        self.check(Some(p))
    }

    fn check(&self, modulus: Option<u64>) -> bool {
        if self.coefficients.is_empty() {
            return false;
        }
        if self
            .coefficients
            .values()
            .any(|&c| c == 0 || c.unsigned_abs() > self.order)
        {
            return false;
        }
        let total: i128 = self
            .coefficients
            .iter()
            .map(|(&d, &c)| d as i128 * c as i128)
            .sum();
        match modulus {
            None => total == 0,
            Some(p) => total.rem_euclid(p as i128) == 0,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in &self.coefficients {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{c:+}·{d}")?;
        }
        write!(f, " = 0")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dissociation {
    Dissociated,
    Relation(Relation),
}

impl Dissociation {
    pub fn is_dissociated(&self) -> bool {
        matches!(self, Dissociation::Dissociated)
    }

    pub fn relation(&self) -> Option<&Relation> {
        match self {
            Dissociation::Relation(r) => Some(r),
            Dissociation::Dissociated => None,
        }
    }
}

/// Reduction of sums: plain integers or residues modulo an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Arith {
    Int,
    Mod(u64),
}

impl Arith {
    #[inline]
    fn norm(self, x: i128) -> i128 {
        match self {
            Arith::Int => x,
            Arith::Mod(p) => x.rem_euclid(p as i128),
        }
    }
}

fn dedup_sorted(elements: &[i64]) -> Vec<i64> {
    let set: BTreeSet<i64> = elements.iter().copied().collect();
    set.into_iter().collect()
}

pub fn is_k_dissociated(set: &[i64], k: u32) -> Result<Dissociation, DissociationError> {
    is_k_dissociated_with(set, k, &DissociationBudget::default())
}

pub fn is_k_dissociated_with(
    set: &[i64],
    k: u32,
    budget: &DissociationBudget,
) -> Result<Dissociation, DissociationError> {
    find_relation(set, k, Arith::Int, budget)
}

/// Dissociativity of residues modulo the odd prime `p`.
pub fn is_k_dissociated_mod(
    set: &[i64],
    k: u32,
    p: u64,
) -> Result<Dissociation, DissociationError> {
    find_relation(set, k, Arith::Mod(p), &DissociationBudget::default())
}

fn find_relation(
    set: &[i64],
    k: u32,
    arith: Arith,
    budget: &DissociationBudget,
) -> Result<Dissociation, DissociationError> {
    assert!(k >= 1, "order must be positive");
    let elements = dedup_sorted(set);
    if elements.len() > budget.max_elements {
        return Err(DissociationError::BudgetExceeded {
            what: "relation search",
            size: elements.len() as u128,
            budget: budget.max_elements as u128,
        });
    }
    let bound: i128 = elements.iter().map(|&d| (d as i128).abs()).sum::<i128>() * k as i128;
    if bound > i64::MAX as i128 {
        return Err(DissociationError::Overflow);
    }
    if let Some(&z) = elements.iter().find(|&&d| arith.norm(d as i128) == 0) {
        return Ok(Dissociation::Relation(Relation {
            coefficients: BTreeMap::from([(z, 1)]),
            order: k,
        }));
    }
    let found = if arith == Arith::Int && elements.len() < DFS_LIMIT {
        relation_dfs(&elements, k)
    } else {
        let half = elements.len().div_ceil(2) as u32;
        let table = (2 * k as u128 + 1).saturating_pow(half);
        if table > budget.max_table as u128 {
            return Err(DissociationError::BudgetExceeded {
                what: "meet-in-the-middle table",
                size: table,
                budget: budget.max_table as u128,
            });
        }
        relation_mitm(&elements, k, arith)
    };
    Ok(match found {
        None => Dissociation::Dissociated,
        Some(mut coeffs) => {
            if coeffs.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                coeffs.iter_mut().for_each(|c| *c = -*c);
            }
            Dissociation::Relation(Relation {
                coefficients: elements
                    .iter()
                    .zip(coeffs)
                    .filter(|(_, c)| *c != 0)
                    .map(|(&d, c)| (d, c))
                    .collect(),
                order: k,
            })
        }
    })
}

/// Depth-first search over coefficient vectors, largest magnitudes first,
/// pruning partial sums that the remaining elements cannot cancel. The first
/// nonzero coefficient is taken positive.
fn relation_dfs(elements: &[i64], k: u32) -> Option<Vec<i32>> {
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(elements[i].unsigned_abs()));
    let vals: Vec<i128> = order.iter().map(|&i| elements[i] as i128).collect();
    let mut reach = vec![0i128; vals.len() + 1];
    for i in (0..vals.len()).rev() {
        reach[i] = reach[i + 1] + vals[i].abs() * k as i128;
    }
    let mut coeffs = vec![0i32; vals.len()];
    fn go(
        idx: usize,
        sum: i128,
        nontrivial: bool,
        vals: &[i128],
        reach: &[i128],
        k: i32,
        coeffs: &mut [i32],
    ) -> bool {
        if sum.abs() > reach[idx] {
            return false;
        }
        if idx == vals.len() {
            return nontrivial && sum == 0;
        }
        let lo = if nontrivial { -k } else { 0 };
        for c in lo..=k {
            coeffs[idx] = c;
            if go(
                idx + 1,
                sum + c as i128 * vals[idx],
                nontrivial || c != 0,
                vals,
                reach,
                k,
                coeffs,
            ) {
                return true;
            }
        }
        coeffs[idx] = 0;
        false
    }
    if go(0, 0, false, &vals, &reach, k as i32, &mut coeffs) {
        let mut out = vec![0i32; elements.len()];
        for (pos, &i) in order.iter().enumerate() {
            out[i] = coeffs[pos];
        }
        Some(out)
    } else {
        None
    }
}

/// All `(sum, index)` pairs for coefficient vectors over `elements`, where
/// `index` encodes the vector in base `2k+1` with digit `c + k`.
fn half_sums(elements: &[i64], k: u32, arith: Arith) -> Vec<(i64, u32)> {
    let base = 2 * k + 1;
    let mut out: Vec<(i64, u32)> = vec![(0, 0)];
    let mut place = 1u32;
    for &e in elements {
        let mut next = Vec::with_capacity(out.len() * base as usize);
        for digit in 0..base {
            let c = digit as i128 - k as i128;
            for &(s, idx) in &out {
                let v = arith.norm(s as i128 + c * e as i128) as i64;
                next.push((v, idx + digit * place));
            }
        }
        out = next;
        place *= base;
    }
    out
}

fn decode(mut idx: u32, len: usize, k: u32) -> Vec<i32> {
    let base = 2 * k + 1;
    (0..len)
        .map(|_| {
            let d = idx % base;
            idx /= base;
            d as i32 - k as i32
        })
        .collect()
}

fn relation_mitm(elements: &[i64], k: u32, arith: Arith) -> Option<Vec<i32>> {
    let h = elements.len().div_ceil(2);
    let (left, right) = elements.split_at(h);
    let zero_index = |len: usize| -> u32 {
        let base = 2 * k + 1;
        (0..len)
            .fold((0u32, 1u32), |(acc, pl), _| (acc + k * pl, pl * base))
            .0
    };
    let left_zero = zero_index(left.len());
    let right_zero = zero_index(right.len());
    let mut table = half_sums(left, k, arith);
    table.sort_unstable();
    for (s, ridx) in half_sums(right, k, arith) {
        let target = arith.norm(-(s as i128)) as i64;
        let start = table.partition_point(|&(v, _)| v < target);
        for &(v, lidx) in &table[start..] {
            if v != target {
                break;
            }
            if lidx == left_zero && ridx == right_zero {
                continue;
            }
            let mut coeffs = decode(lidx, left.len(), k);
            coeffs.extend(decode(ridx, right.len(), k));
            return Some(coeffs);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Spans and subset searches.

/// `Span₂` of a growing set, kept sorted and deduplicated.
#[derive(Clone, Debug)]
pub(crate) struct Span2 {
    values: Vec<i64>,
    arith: Arith,
}

impl Span2 {
    pub(crate) fn new(arith: Arith) -> Self {
        Span2 {
            values: vec![0],
            arith,
        }
    }

    pub(crate) fn contains(&self, x: i64) -> bool {
        let x = self.arith.norm(x as i128) as i64;
        self.values.binary_search(&x).is_ok()
    }

    /// Whether `S ∪ {x}` is still 2-dissociated.
    pub(crate) fn admits(&self, x: i64) -> bool {
        !self.contains(x) && !self.contains(2 * x)
    }

    pub(crate) fn extended(&self, x: i64) -> Span2 {
        let mut values = Vec::with_capacity(self.values.len() * 5);
        for c in -2i128..=2 {
            for &s in &self.values {
                values.push(self.arith.norm(s as i128 + c * x as i128) as i64);
            }
        }
        values.sort_unstable();
        values.dedup();
        Span2 {
            values,
            arith: self.arith,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.values.len()
    }
}

/// Largest or minimal-maximal 2-dissociated subset, with the witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub dimension: usize,
    pub witness: Vec<i64>,
}

fn check_span_budget(n: usize, budget: &DissociationBudget) -> Result<(), DissociationError> {
    // 2-spans of subsets are materialized; their size is at most 5^|S|.
    if n > budget.max_elements {
        return Err(DissociationError::BudgetExceeded {
            what: "subset search",
            size: n as u128,
            budget: budget.max_elements as u128,
        });
    }
    Ok(())
}

pub fn dim2(set: &[i64]) -> Result<DimensionResult, DissociationError> {
    dim2_in(set, Arith::Int, &DissociationBudget::default())
}

pub fn dim2_minus(set: &[i64]) -> Result<DimensionResult, DissociationError> {
    dim2_minus_in(set, Arith::Int, &DissociationBudget::default())
}

/// `dim₂⁻` of residues modulo the odd prime `p`.
pub fn dim2_minus_mod(set: &[i64], p: u64) -> Result<DimensionResult, DissociationError> {
    dim2_minus_in(set, Arith::Mod(p), &DissociationBudget::default())
}

pub(crate) fn dim2_in(
    set: &[i64],
    arith: Arith,
    budget: &DissociationBudget,
) -> Result<DimensionResult, DissociationError> {
    let elements = dedup_sorted(set);
    check_span_budget(elements.len(), budget)?;
    struct Search<'a> {
        elements: &'a [i64],
        best: Vec<i64>,
        current: Vec<i64>,
        cap: u64,
        overflow: bool,
    }
    impl Search<'_> {
        fn go(&mut self, idx: usize, span: &Span2) {
            if self.overflow {
                return;
            }
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            let remaining = self.elements.len() - idx;
            if self.current.len() + remaining <= self.best.len() {
                return;
            }
            for i in idx..self.elements.len() {
                if self.current.len() + (self.elements.len() - i) <= self.best.len() {
                    return;
                }
                let x = self.elements[i];
                if span.admits(x) {
                    if span.len() as u64 * 5 > self.cap {
                        self.overflow = true;
                        return;
                    }
                    let next = span.extended(x);
                    self.current.push(x);
                    self.go(i + 1, &next);
                    self.current.pop();
                }
            }
        }
    }
    let mut search = Search {
        elements: &elements,
        best: Vec::new(),
        current: Vec::new(),
        cap: budget.max_enumeration,
        overflow: false,
    };
    search.go(0, &Span2::new(arith));
    if search.overflow {
        return Err(DissociationError::BudgetExceeded {
            what: "span size",
            size: budget.max_enumeration as u128 + 1,
            budget: budget.max_enumeration as u128,
        });
    }
    Ok(DimensionResult {
        dimension: search.best.len(),
        witness: search.best,
    })
}

pub(crate) fn dim2_minus_in(
    set: &[i64],
    arith: Arith,
    budget: &DissociationBudget,
) -> Result<DimensionResult, DissociationError> {
    let elements = dedup_sorted(set);
    check_span_budget(elements.len(), budget)?;
    if elements.is_empty() {
        return Ok(DimensionResult {
            dimension: 0,
            witness: Vec::new(),
        });
    }
    // Sizes in increasing order; within a size, lexicographic order.
    fn go(
        elements: &[i64],
        size: usize,
        idx: usize,
        current: &mut Vec<i64>,
        span: &Span2,
        cap: u64,
    ) -> Result<bool, ()> {
        if current.len() == size {
            let maximal = elements
                .iter()
                .filter(|x| !current.contains(x))
                .all(|&x| !span.admits(x));
            return Ok(maximal);
        }
        for i in idx..elements.len() {
            if current.len() + (elements.len() - i) < size {
                break;
            }
            let x = elements[i];
            if span.admits(x) {
                if span.len() as u64 * 5 > cap {
                    return Err(());
                }
                let next = span.extended(x);
                current.push(x);
                if go(elements, size, i + 1, current, &next, cap)? {
                    return Ok(true);
                }
                current.pop();
            }
        }
        Ok(false)
    }
    for size in 0..=elements.len() {
        let mut current = Vec::new();
        match go(
            &elements,
            size,
            0,
            &mut current,
            &Span2::new(arith),
            budget.max_enumeration,
        ) {
            Ok(true) => {
                return Ok(DimensionResult {
                    dimension: size,
                    witness: current,
                })
            }
            Ok(false) => {}
            Err(()) => {
                return Err(DissociationError::BudgetExceeded {
                    what: "span size",
                    size: budget.max_enumeration as u128 + 1,
                    budget: budget.max_enumeration as u128,
                })
            }
        }
    }
    unreachable!("the full search always finds a maximal subset")
}

pub const SPAN2_MAX_ELEMENTS: usize = 20;

/// `Span₂(D) = {Σ ε_d d : ε_d ∈ {-2..2}}`.
pub fn span2(set: &[i64]) -> Result<BTreeSet<i64>, DissociationError> {
    span2_in(set, Arith::Int, &DissociationBudget::default())
}

/// `Span₂` modulo `p`, as residues in `[0, p)`.
pub fn span2_mod(set: &[i64], p: u64) -> Result<BTreeSet<i64>, DissociationError> {
    span2_in(set, Arith::Mod(p), &DissociationBudget::default())
}

fn span2_in(
    set: &[i64],
    arith: Arith,
    budget: &DissociationBudget,
) -> Result<BTreeSet<i64>, DissociationError> {
    let elements = dedup_sorted(set);
    if elements.len() > SPAN2_MAX_ELEMENTS {
        return Err(DissociationError::BudgetExceeded {
            what: "span2",
            size: elements.len() as u128,
            budget: SPAN2_MAX_ELEMENTS as u128,
        });
    }
    let bound: i128 = elements.iter().map(|&d| (d as i128).abs()).sum::<i128>() * 2;
    if bound > i64::MAX as i128 {
        return Err(DissociationError::Overflow);
    }
    let mut span = Span2::new(arith);
    for &x in &elements {
        if span.len() as u64 * 5 > budget.max_enumeration {
            return Err(DissociationError::BudgetExceeded {
                what: "span2 size",
                size: span.len() as u128 * 5,
                budget: budget.max_enumeration as u128,
            });
        }
        span = span.extended(x);
    }
    Ok(span.values.into_iter().collect())
}

/// A signed sum `Σ ε_m m` with `ε_m ∈ {-1, 0, 1}`; only nonzero signs are
/// stored, so the weight is the number of entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignedSum {
    pub value: i64,
    pub signs: BTreeMap<i64, i8>,
}

impl SignedSum {
    pub fn weight(&self) -> usize {
        self.signs.len()
    }

    /// The support as a set of signed elements `ε_m · m`.
    pub fn support(&self) -> BTreeSet<i64> {
        self.signs.iter().map(|(&m, &s)| m * s as i64).collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.signs.values().all(|&s| s == 1 || s == -1)
            && self
                .signs
                .iter()
                .map(|(&m, &s)| m as i128 * s as i128)
                .sum::<i128>()
                == self.value as i128
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Confirms `set` is 2-dissociated, returning the witnessing relation
/// otherwise.
pub(crate) fn require_2_dissociated(set: &[i64]) -> Result<(), DissociationError> {
    match is_k_dissociated(set, 2)? {
        Dissociation::Dissociated => Ok(()),
        Dissociation::Relation(r) => Err(DissociationError::NotDissociated(r)),
    }
}

/// `E_k`: signed sums of exactly `k` distinct elements of the 2-dissociated
/// set `D`, sorted by value. `|E_k| = C(|D|, k) · 2^k`.
pub fn enumerate_ek(set: &[i64], k: usize) -> Result<Vec<SignedSum>, DissociationError> {
    let elements = dedup_sorted(set);
    require_2_dissociated(&elements)?;
    assert!(k <= elements.len(), "k exceeds |D|");
    let size = binomial(elements.len() as u64, k as u64) << k;
    let budget = DissociationBudget::default().max_enumeration as u128;
    if size > budget {
        return Err(DissociationError::BudgetExceeded {
            what: "E_k",
            size,
            budget,
        });
    }
    let mut out = Vec::with_capacity(size as usize);
    for combo in elements.iter().copied().combinations(k) {
        for mask in 0u32..(1u32 << k) {
            let mut signs = BTreeMap::new();
            let mut value = 0i64;
            for (bit, &m) in combo.iter().enumerate() {
                let s: i8 = if mask >> bit & 1 == 1 { -1 } else { 1 };
                value += s as i64 * m;
                signs.insert(m, s);
            }
            out.push(SignedSum { value, signs });
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relation_of(set: &[i64], k: u32) -> Option<Relation> {
        is_k_dissociated(set, k).unwrap().relation().cloned()
    }

    /// Independent oracle: 2-dissociated iff all `3^|D|` sums with
    /// coefficients in {0,1,2} are distinct.
    fn brute_2_dissociated(set: &[i64]) -> bool {
        let mut sums = vec![0i64];
        for &d in set {
            sums = sums.iter().flat_map(|&s| [s, s + d, s + 2 * d]).collect();
        }
        let total = sums.len();
        sums.sort_unstable();
        sums.dedup();
        sums.len() == total
    }

    #[test]
    fn spec_examples() {
        assert!(relation_of(&[1, 3, 9], 2).is_none());
        let r = relation_of(&[1, 2], 2).unwrap();
        assert!(r.verify());
        assert_eq!(r.coefficients, BTreeMap::from([(1, 2), (2, -1)]));
        assert!(relation_of(&[1, 2], 1).is_none());
    }

    #[test]
    fn zero_is_never_dissociated() {
        let r = relation_of(&[0, 5], 2).unwrap();
        assert!(r.verify());
    }

    #[test]
    fn mitm_and_dfs_agree_with_brute_force() {
        let sets: &[&[i64]] = &[
            &[1, 3, 9, 27, 81, 243, 729, 2187, 6561, 19683, 59049],
            &[1, 3, 9, 27, 81, 243, 729, 2187, 6561, 19683, 59048],
            &[5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
            &[2, 11, 57, 300, 1601, 8000, 41001, 200003, 999999, 5000011],
            &[4, 7, 19],
        ];
        for s in sets {
            let got = is_k_dissociated(s, 2).unwrap();
            assert_eq!(got.is_dissociated(), brute_2_dissociated(s), "{s:?}");
            if let Some(r) = got.relation() {
                assert!(r.verify(), "{r}");
            }
        }
    }

    #[test]
    fn modular_relations() {
        // 3 + 5 + 3 = 11 ≡ 0 (mod 11)
        let r = is_k_dissociated_mod(&[3, 5], 2, 11).unwrap();
        let r = r.relation().unwrap();
        assert!(r.verify_mod(11));
        assert!(is_k_dissociated_mod(&[1], 2, 7).unwrap().is_dissociated());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(
            dim2(&[1, 2, 3]).unwrap(),
            DimensionResult {
                dimension: 2,
                witness: vec![1, 3]
            }
        );
        assert_eq!(dim2(&[1, 2, 4]).unwrap().witness, vec![1, 4]);
        assert_eq!(dim2(&[7]).unwrap().witness, vec![7]);
        assert_eq!(dim2_minus(&[1, 3, 9]).unwrap().witness, vec![1, 3, 9]);
        assert_eq!(dim2_minus(&[7]).unwrap().witness, vec![7]);
        assert_eq!(dim2_minus(&[1, 2, 3]).unwrap().dimension, 2);
    }

    #[test]
    fn dim2_minus_can_be_smaller() {
        // {1,2,3,4,7}: {2,7}? 7 - 2·2 = 3 so 3 joins the span...
        let set = [1, 2, 3, 4, 5, 6, 7, 8];
        let lo = dim2_minus(&set).unwrap();
        let hi = dim2(&set).unwrap();
        assert!(lo.dimension <= hi.dimension);
        assert!(is_k_dissociated(&hi.witness, 2).unwrap().is_dissociated());
        assert!(is_k_dissociated(&lo.witness, 2).unwrap().is_dissociated());
    }

    #[test]
    fn span_examples() {
        assert_eq!(span2(&[1]).unwrap(), (-2..=2).collect());
        assert_eq!(span2(&[1, 3]).unwrap(), (-8..=8).collect());
        assert_eq!(span2(&[]).unwrap(), BTreeSet::from([0]));
        assert_eq!(span2_mod(&[1], 3).unwrap(), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn ek_examples() {
        let e1: Vec<i64> = enumerate_ek(&[1, 3], 1)
            .unwrap()
            .iter()
            .map(|s| s.value)
            .collect();
        assert_eq!(e1, vec![-3, -1, 1, 3]);
        let e2: Vec<i64> = enumerate_ek(&[1, 3], 2)
            .unwrap()
            .iter()
            .map(|s| s.value)
            .collect();
        assert_eq!(e2, vec![-4, -2, 2, 4]);
        let e0 = enumerate_ek(&[1, 3], 0).unwrap();
        assert_eq!(e0.len(), 1);
        assert_eq!(e0[0].value, 0);
        assert!(matches!(
            enumerate_ek(&[1, 2], 1),
            Err(DissociationError::NotDissociated(_))
        ));
    }

    #[test]
    fn budget_guards() {
        let big: Vec<i64> = (1..=30).map(|i| 1i64 << i).collect();
        assert!(matches!(
            is_k_dissociated(&big, 2),
            Err(DissociationError::BudgetExceeded { .. })
        ));
        let wide: Vec<i64> = (1..=21).collect();
        assert!(span2(&wide).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(8, 0), 1);
        assert_eq!(binomial(3, 4), 0);
    }
}
