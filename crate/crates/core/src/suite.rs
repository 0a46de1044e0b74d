//! Named property suites with a machine-readable pass/fail per property.

use crate::certificates::{
    certify_riesz_dissociated, direct_certificates, find_good_prime, certify_prime_discrete,
    prime_bound, prime_bound_closed_form, verify_certificate, CertifyOptions, Effort,
};
use crate::dissociation::{binomial, dim2, dim2_minus, enumerate_ek};
use crate::document::{verify_document, Document, Payload};
use crate::exact_ml::{ml_exact, ml_grid_oracle};
use crate::fourier::{
    fejer_weighted_sum, integrate_riesz, riesz_coefficients, riesz_density_f64, FejerWeights,
    PhiSpec, RieszSpec,
};
use crate::interval::PrecisionPolicy;
use crate::primes::{is_prime, primes_up_to};
use crate::rational::{int, ratio, to_f64, ExactRational};
use crate::reduction::{
    centered, dilate_model, rectify, rectify_exhaustive, reduce_model, within_rectification_bound,
    ReductionConfig, ResidueSet,
};
use crate::speeds::SpeedSet;
use crate::sunflower::{extract_dissociated_half, random_dissociated, random_sunflower};
use crate::dissociation::is_k_dissociated;
use itertools::Itertools;
use num_traits::One;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Invariants,
    Soundness,
    PaperChecks,
}

impl FromStr for SuiteName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "invariants" => Ok(SuiteName::Invariants),
            "soundness" => Ok(SuiteName::Soundness),
            "paper-checks" => Ok(SuiteName::PaperChecks),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteParams {
    pub n_max: usize,
    pub v_max: u64,
    pub seed: u64,
    /// Instances per randomized property.
    pub samples: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            n_max: 4,
            v_max: 25,
            seed: 42,
            samples: 100,
        }
    }
}

const MAX_REPORTED: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    /// The first few counterexamples.
    pub failures: Vec<String>,
}

impl PropertyResult {
    fn collect(name: &str, outcomes: Vec<Result<(), String>>) -> Self {
        let cases = outcomes.len() as u64;
        let failures: Vec<String> = outcomes.into_iter().filter_map(Result::err).collect();
        PropertyResult {
            name: name.to_string(),
            passed: failures.is_empty() && cases > 0,
            cases,
            failures: failures.into_iter().take(MAX_REPORTED).collect(),
        }
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: SuiteName,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }
}

pub fn run_suite(name: SuiteName, params: &SuiteParams) -> SuiteReport {
    let properties = match name {
        SuiteName::Invariants => invariants(params),
        SuiteName::Soundness => soundness(params),
        SuiteName::PaperChecks => paper_checks(params),
    };
    SuiteReport {
        name,
        seed: params.seed,
        properties,
    }
}

/// Every subset of `[1, v_max]` with at most `n_max` elements.
pub fn exhaustive_family(n_max: usize, v_max: u64) -> Vec<SpeedSet> {
    (1..=n_max)
        .flat_map(|n| (1..=v_max).combinations(n))
        .map(|c| SpeedSet::new(c).expect("distinct positive"))
        .collect()
}

pub fn random_speed_set<R: Rng>(rng: &mut R, n: usize, max: u64) -> SpeedSet {
    let picks = sample(rng, max as usize, n.min(max as usize));
    SpeedSet::new(picks.into_iter().map(|i| i as u64 + 1)).expect("distinct positive")
}

fn rng(params: &SuiteParams, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(params.seed);
    r.set_stream(stream);
    r
}

// ---------------------------------------------------------------------------

fn soundness(params: &SuiteParams) -> Vec<PropertyResult> {
    let family = exhaustive_family(params.n_max, params.v_max);
    let options = CertifyOptions {
        exact: false,
        reduction: None,
        ..CertifyOptions::from_effort(Effort::Standard)
    };
    let policy = PrecisionPolicy::default();
    let primes = primes_up_to(200);
    let one = ExactRational::one();
    let slack = ratio(1, 1_000_000_000u64);
    let rows: Vec<[Result<(), String>; 4]> = family
        .par_iter()
        .map(|s| {
            let n = s.len();
            let ml = match ml_exact(s) {
                Ok(m) => m.value,
                Err(e) => return std::array::from_fn(|_| Err(format!("{s}: {e}"))),
            };
            let floor = check(ml >= ratio(1, n as u64 + 1) && ml >= ratio(1, 2 * n as u64), || {
                format!("ML{s} = {ml}")
            });
            let certs = direct_certificates(s, &options).into_iter().try_for_each(|c| {
                check(c.bound <= ml, || {
                    format!("{} bound {} > ML{s} = {ml}", c.method.name(), c.bound)
                })?;
                verify_certificate(&c, &policy).map_err(|e| format!("{s}: {e}"))
            });
            let lemma = primes
                .iter()
                .filter(|&&p| s.iter().all(|v| v % p != 0))
                .try_for_each(|&p| {
                    check(ml >= prime_bound(n, p), || format!("{s} p={p}: ML = {ml}"))
                });
            let exclusion = (|| {
                let base = dim2(&s.as_i64()).map_err(|e| e.to_string())?;
                if base.dimension > 6 {
                    return Ok(());
                }
                let spec = PhiSpec::new(s.clone(), ml.clone()).map_err(|e| e.to_string())?;
                for w in [ratio(1, 2), int(1)] {
                    let riesz = RieszSpec::new(base.witness.clone(), w.clone())
                        .map_err(|e| e.to_string())?;
                    let upper = integrate_riesz(&spec, &riesz, policy.start).value.upper();
                    check(upper >= &one - &slack, || {
                        format!("{s} weight {w}: upper edge {upper} at δ = ML")
                    })?;
                }
                Ok(())
            })();
            [floor, certs, lemma, exclusion]
        })
        .collect();
    let names = ["ml-floors", "certificates-sound", "prime-lemma", "riesz-exclusion-at-ml"];
    let mut columns: Vec<Vec<Result<(), String>>> = vec![Vec::new(); 4];
    for row in rows {
        for (i, r) in row.into_iter().enumerate() {
            columns[i].push(r);
        }
    }
    names
        .iter()
        .zip(columns)
        .map(|(n, c)| PropertyResult::collect(n, c))
        .collect()
}

// ---------------------------------------------------------------------------

fn invariants(params: &SuiteParams) -> Vec<PropertyResult> {
    let k = params.samples.max(1);
    let mut r = rng(params, 1);
    let sets: Vec<SpeedSet> = (0..k)
        .map(|_| {
            let n = r.gen_range(1..=5);
            random_speed_set(&mut r, n, 40)
        })
        .collect();
    let mut out = vec![
        PropertyResult::collect("grid-oracle", sets.par_iter().map(grid_agreement).collect()),
        PropertyResult::collect("dilation-invariance", sets.par_iter().map(dilation_invariance).collect()),
        PropertyResult::collect(
            "certificate-round-trip",
            sets.par_iter().map(certificate_round_trip).collect(),
        ),
    ];
    let mut r = rng(params, 2);
    let bases: Vec<Vec<i64>> = (0..(k / 10).max(10))
        .map(|_| {
            let d = r.gen_range(1..=8);
            random_dissociated(&mut r, d, 1 << 20)
        })
        .collect();
    out.push(PropertyResult::collect("ek-combinatorics", bases.iter().map(|d| ek_counts(d)).collect()));
    out.push(PropertyResult::collect(
        "riesz-probability-measure",
        bases.par_iter().map(|d| riesz_measure(d)).collect(),
    ));
    let mut r = rng(params, 3);
    out.push(PropertyResult::collect(
        "rectification",
        (0..k).map(|_| rectification_case(&mut r)).collect(),
    ));
    let mut r = rng(params, 4);
    out.push(PropertyResult::collect(
        "dilation-transfer",
        (0..k).map(|_| dilation_transfer_case(&mut r)).collect(),
    ));
    let mut r = rng(params, 5);
    let sparse: Vec<SpeedSet> = (0..(k / 5).max(4)).map(|_| random_speed_set(&mut r, 3, 100_000)).collect();
    out.push(PropertyResult::collect(
        "reduction-end-to-end",
        sparse.par_iter().map(reduction_end_to_end).collect(),
    ));
    let mut r = rng(params, 6);
    out.push(PropertyResult::collect(
        "sunflower-extraction",
        (0..k).map(|_| sunflower_case(&mut r)).collect(),
    ));
    let again = certificate_round_trip_doc(&sets[0]);
    out.push(PropertyResult::collect(
        "determinism",
        vec![check(again == certificate_round_trip_doc(&sets[0]), || {
            "two runs disagree".into()
        })],
    ));
    out
}

pub fn grid_agreement(s: &SpeedSet) -> Result<(), String> {
    let grid = 100_000;
    let ml = ml_exact(s).map_err(|e| e.to_string())?.value;
    let g = ml_grid_oracle(s, grid);
    check(g <= ml && ml <= &g + ratio(s.max(), grid), || {
        format!("{s}: exact {ml}, grid {g}")
    })?;
    check(ml >= ratio(1, 2 * s.len() as u64), || format!("{s}: {ml} < 1/(2n)"))
}

fn dilation_invariance(s: &SpeedSet) -> Result<(), String> {
    let ml = ml_exact(s).map_err(|e| e.to_string())?.value;
    for k in [2, 3] {
        let d = s.dilate(k).map_err(|e| e.to_string())?;
        let mk = ml_exact(&d).map_err(|e| e.to_string())?.value;
        check(mk == ml, || format!("ML({k}·{s}) = {mk} != {ml}"))?;
    }
    Ok(())
}

fn certificate_round_trip_doc(s: &SpeedSet) -> String {
    let cert = crate::certificates::best_certificate(s, &CertifyOptions::from_effort(Effort::Quick));
    Document::new(Payload::Certificate(cert)).to_json()
}

fn certificate_round_trip(s: &SpeedSet) -> Result<(), String> {
    let policy = PrecisionPolicy::default();
    let doc = Document::parse(&certificate_round_trip_doc(s)).map_err(|e| e.to_string())?;
    let v = verify_document(&doc, &policy).map_err(|e| e.to_string())?;
    check(v.passed(), || format!("{s}: {:?}", v.failures))?;
    let ml = ml_exact(s).map_err(|e| e.to_string())?.value;
    let mut tampered = doc;
    if let Payload::Certificate(c) = &mut tampered.payload {
        c.bound = &ml + ratio(1, 100);
    }
    let v = verify_document(&tampered, &policy).map_err(|e| e.to_string())?;
    check(!v.passed(), || format!("{s}: raised bound still verifies"))
}

pub fn ek_counts(d: &[i64]) -> Result<(), String> {
    let mut seen = BTreeSet::new();
    for k in 0..=d.len() {
        let ek = enumerate_ek(d, k).map_err(|e| e.to_string())?;
        let expect = binomial(d.len() as u64, k as u64) << k;
        check(ek.len() as u128 == expect, || {
            format!("{d:?} k={k}: |E_k| = {} != {expect}", ek.len())
        })?;
        if k == 0 {
            check(ek.len() == 1 && ek[0].value == 0, || "E_0 != {0}".into())?;
        }
        for s in ek {
            check(seen.insert(s.value), || format!("{d:?}: {} repeats", s.value))?;
        }
    }
    Ok(())
}

pub fn riesz_measure(d: &[i64]) -> Result<(), String> {
    for w in [ratio(1, 4), ratio(1, 2), int(1)] {
        let riesz = RieszSpec::new(d.to_vec(), w.clone()).map_err(|e| e.to_string())?;
        let zero = riesz_coefficients(&riesz).get(&0).cloned().unwrap_or_default();
        check(zero == int(1), || format!("{d:?} w={w}: R̂(0) = {zero}"))?;
        let min = (0..10_000)
            .map(|i| riesz_density_f64(&riesz, i as f64 / 10_000.0))
            .fold(f64::INFINITY, f64::min);
        check(min >= -1e-9, || format!("{d:?} w={w}: R dips to {min}"))?;
    }
    Ok(())
}

/// A random residue set modulo a prime up to `10^4` with `dim₂⁻ <= 3`.
pub fn random_residue_set<R: Rng>(rng: &mut R) -> ResidueSet {
    loop {
        let p = loop {
            let p = rng.gen_range(11..10_000u64);
            if is_prime(p) {
                break p;
            }
        };
        let size = rng.gen_range(1..=4);
        let raw: Vec<i64> = (0..size).map(|_| rng.gen_range(1..p as i64)).collect();
        if let Ok(set) = ResidueSet::new(p, raw) {
            if set.dim2_minus().is_ok_and(|d| d <= 3) {
                return set;
            }
        }
    }
}

pub fn rectification_case<R: Rng>(rng: &mut R) -> Result<(), String> {
    let set = random_residue_set(rng);
    let p = set.modulus();
    let d = set.dim2_minus().map_err(|e| e.to_string())?;
    let pig = rectify(&set, d).map_err(|e| e.to_string())?;
    let ex = rectify_exhaustive(&set).map_err(|e| e.to_string())?;
    check(pig.verify(&set) && ex.verify(&set), || format!("{set:?}: unverifiable"))?;
    check(within_rectification_bound(pig.radius, d, p), || {
        format!("p={p} d={d}: radius {} above bound", pig.radius)
    })?;
    check(ex.radius <= pig.radius, || {
        format!("p={p}: exhaustive {} > pigeonhole {}", ex.radius, pig.radius)
    })
}

pub fn dilation_transfer_case<R: Rng>(rng: &mut R) -> Result<(), String> {
    loop {
        let p = loop {
            let p = rng.gen_range(5..200u64);
            if is_prime(p) {
                break p;
            }
        };
        let size = rng.gen_range(1..=4).min(p as usize - 1);
        let b = random_speed_set(rng, size, p - 1);
        let lambda = rng.gen_range(1..p);
        let q = b
            .iter()
            .map(|v| centered(v as i128 * lambda as i128, p).unsigned_abs())
            .max()
            .expect("nonempty");
        let scale = ratio(p, q);
        if scale < int(2) {
            continue;
        }
        let Ok(dil) = dilate_model(&b, p, lambda, &scale) else {
            continue;
        };
        let ml_b = ml_exact(&b).map_err(|e| e.to_string())?.value;
        let ml_d = ml_exact(&dil.model).map_err(|e| e.to_string())?.value;
        check(ml_b >= &ml_d - &dil.loss, || {
            format!("p={p} λ={lambda}: ML{b} = {ml_b}, ML{} = {ml_d}", dil.model)
        })?;
        if scale > int(2 * b.len() as u64) {
            let before = ResidueSet::from_speeds(p, &b)
                .and_then(|r| r.dim2_minus())
                .map_err(|e| e.to_string())?;
            let after = dim2_minus(&dil.model.as_i64()).map_err(|e| e.to_string())?.dimension;
            check(after <= before, || {
                format!("p={p} λ={lambda}: dim grew from {before} to {after}")
            })?;
        }
        return Ok(());
    }
}

pub fn reduction_end_to_end(s: &SpeedSet) -> Result<(), String> {
    let trace = reduce_model(s, 64, &ReductionConfig::default()).map_err(|e| e.to_string())?;
    let ml = ml_exact(s).map_err(|e| e.to_string())?.value;
    let model = ml_exact(&trace.final_model).map_err(|e| e.to_string())?.value;
    let err = trace.total_error();
    check(ml >= &model - &err, || {
        format!("{s}: ML = {ml}, model {} has {model}, error {err}", trace.final_model)
    })
}

pub fn sunflower_case<R: Rng>(rng: &mut R) -> Result<(), String> {
    let base = rng.gen_range(4..=9);
    let kernel = rng.gen_range(0..base - 2);
    let petal = rng.gen_range(1..=(base - kernel).min(3));
    let members = rng.gen_range(2..=6);
    let inst = random_sunflower(rng, base, kernel, petal, members);
    let e = extract_dissociated_half(&inst.elements(), &inst.supports, &inst.kernel)
        .map_err(|e| e.to_string())?;
    let total = inst.supports.len();
    check(e.kept.len() >= total.div_ceil(2), || {
        format!("kept {} of {total}", e.kept.len())
    })?;
    let ok = is_k_dissociated(&e.shifted(), 1).map_err(|e| e.to_string())?;
    check(ok.is_dissociated(), || format!("{:?} not 1-dissociated", e.shifted()))
}

// ---------------------------------------------------------------------------

fn paper_checks(params: &SuiteParams) -> Vec<PropertyResult> {
    let policy = PrecisionPolicy::default();
    let mut out = Vec::new();
    out.push(PropertyResult::collect(
        "extremal-family",
        (1..=8u64)
            .map(|n| {
                let ml = ml_exact(&SpeedSet::initial_segment(n)).map_err(|e| e.to_string())?.value;
                check(ml == ratio(1, n + 1), || format!("ML([{n}]) = {ml}"))
            })
            .collect(),
    ));
    let mut r = rng(params, 7);
    out.push(PropertyResult::collect(
        "ek-combinatorics",
        (0..10)
            .map(|_| {
                let d = r.gen_range(1..=8);
                ek_counts(&random_dissociated(&mut r, d, 1 << 20))
            })
            .collect(),
    ));
    out.push(PropertyResult::collect(
        "prime-bound-identity",
        primes_up_to(10_000)
            .into_iter()
            .flat_map(|p| (1..=100usize).map(move |n| (n, p)))
            .filter(|&(n, p)| p % (2 * n as u64) != 1)
            .map(|(n, p)| {
                check(prime_bound(n, p) == prime_bound_closed_form(n, p), || {
                    format!("n={n} p={p}")
                })
            })
            .collect(),
    ));
    let family = exhaustive_family(params.n_max.min(3), params.v_max.min(12));
    out.push(PropertyResult::collect(
        "prime-lemma",
        family
            .par_iter()
            .map(|s| {
                let ml = ml_exact(s).map_err(|e| e.to_string())?.value;
                primes_up_to(200)
                    .into_iter()
                    .filter(|&p| s.iter().all(|v| v % p != 0))
                    .try_for_each(|p| {
                        let c = certify_prime_discrete(s, p).map_err(|e| e.to_string())?;
                        check(c.bound <= ml, || format!("{s} p={p}"))
                    })
            })
            .collect(),
    ));
    out.push(PropertyResult::collect(
        "dissociated-riesz",
        geometric_families()
            .iter()
            .map(|s| {
                let c = certify_riesz_dissociated(s, &policy).map_err(|e| e.to_string())?;
                let ml = ml_exact(s).map_err(|e| e.to_string())?.value;
                check(c.bound <= ml, || format!("{s}: {} > {ml}", c.bound))?;
                let scaled = to_f64(&c.bound) * (s.len() as f64).sqrt();
                check((0.1..=0.5).contains(&scaled), || format!("{s}: bound·√n = {scaled}"))
            })
            .collect(),
    ));
    out.push(PropertyResult::collect(
        "fejer-inequality",
        (4..=8u64)
            .flat_map(|n| (1..=n).map(move |v| (n, v)))
            .map(|(n, v)| {
                let spec = PhiSpec::new(SpeedSet::initial_segment(n), ratio(1, n + 1))
                    .map_err(|e| e.to_string())?;
                let sum = fejer_weighted_sum(&spec, v, 100 * n, FejerWeights::Proof, policy.start);
                let floor = ratio(1, 50) - ratio(1, 1_000_000);
                check(sum.lower() >= floor, || format!("n={n} v={v}: {sum}"))
            })
            .collect(),
    ));
    let mut r = rng(params, 8);
    let mut tao = Vec::new();
    for n in [10usize, 20, 50] {
        for c in [2u64, 3, 4] {
            for _ in 0..20 {
                let s = random_speed_set(&mut r, n, c * n as u64);
                tao.push(tao_recovery(&s, c));
            }
        }
    }
    out.push(PropertyResult::collect("good-prime-recovery", tao));
    out
}

/// `{1, q, ..., q^(n-1)}` small enough for the exact solver.
pub fn geometric_families() -> Vec<SpeedSet> {
    let mut out = Vec::new();
    for q in [2u64, 3, 4, 5, 10] {
        for n in 1..=8u32 {
            if q.pow(n - 1) > 20_000 {
                break;
            }
            out.push(SpeedSet::new((0..n).map(|i| q.pow(i))).expect("distinct"));
        }
    }
    out
}

pub fn tao_recovery(s: &SpeedSet, c: u64) -> Result<(), String> {
    let n = s.len() as u64;
    let p = find_good_prime(s, &ratio(1, 2), 100_000).map_err(|e| format!("{s}: {e}"))?;
    check(p <= (c + 2) * n, || format!("{s}: prime {p} > {}", (c + 2) * n))?;
    let cert = certify_prime_discrete(s, p).map_err(|e| e.to_string())?;
    let target = ratio(1, 2 * n) + ratio(1, 2 * (c + 2) * n);
    check(cert.bound >= target, || format!("{s}: bound {} < {target}", cert.bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let params = SuiteParams {
            n_max: 3,
            v_max: 8,
            seed: 1,
            samples: 10,
        };
        for name in [SuiteName::Soundness, SuiteName::Invariants] {
            let report = run_suite(name, &params);
            assert!(report.passed(), "{report:#?}");
        }
    }

    #[test]
    fn family_sizes() {
        assert_eq!(exhaustive_family(2, 5).len(), 5 + 10);
        assert_eq!(geometric_families()[0], SpeedSet::new([1]).unwrap());
    }
}
