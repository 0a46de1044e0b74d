//! Lower-bound certificates for `ML(V)`.
//!
//! Each method exhibits a probability measure `μ` with `∫Φ dμ < 1` at some
//! width `δ`. Since `Φ >= 1` everywhere once `δ >= ML(V)`, that excludes
//! `δ`, and the certificate carries enough data to redo the check.

use crate::dissociation::{dim2, is_k_dissociated, Dissociation, DissociationError, Relation};
use crate::exact_ml::{loneliness_at, ml_exact_with, MlConfig, MlError};
use crate::fourier::{FourierError, PhiSpec, RieszExpansion, RieszSpec, RIESZ_MAX_FREQUENCIES};
use crate::interval::{cos_2pi, BoundedDoc, BoundedReal, PrecisionPolicy, Undecided};
use crate::primes::{is_prime, primes_up_to};
use crate::rational::{int, ratio, serde_rational, ExactRational};
use crate::reduction::{reduce_model, verify_trace, ReductionConfig, ReductionError, ReductionTrace};
use crate::speeds::SpeedSet;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {prime} divides speed {speed}")]
    PrimeDividesSpeed { prime: u64, speed: u64 },
    #[error("no prime up to {limit} divides no speed with residue in the window")]
    NoPrimeFound { limit: u64 },
    #[error("speed set is not 1-dissociated: {0}")]
    NotDissociated(Relation),
    #[error(transparent)]
    Dissociation(#[from] DissociationError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Ml(#[from] MlError),
    #[error(transparent)]
    Undecided(#[from] Undecided),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("{0}")]
    InvalidParameter(String),
}

/// Methods in tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    PrimeDiscrete,
    RieszDissociated,
    RieszGeneral,
    TrivialUnion,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::PrimeDiscrete => "prime-discrete",
            Method::RieszDissociated => "riesz-dissociated",
            Method::RieszGeneral => "riesz-general",
            Method::TrivialUnion => "trivial-union",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    TrivialUnion,
    Exact {
        #[serde(with = "serde_rational")]
        witness_time: ExactRational,
    },
    PrimeDiscrete {
        prime: u64,
        residue: u64,
        /// The constant `c` of the residue window `[2, (1-c)·2n]`, when the
        /// prime was chosen by a window search.
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
        window: Option<ExactRational>,
    },
    RieszDissociated,
    RieszGeneral {
        /// The 2-dissociated subset `D` of the speeds.
        base: Vec<i64>,
        /// The dilation `j` with `D' = j·D`.
        dilation: u64,
        riesz: RieszSpec,
        #[serde(with = "serde_rational")]
        trial_delta: ExactRational,
        integral: BoundedDoc,
        t2: BoundedDoc,
        t3: BoundedDoc,
    },
}

mod opt_rational {
    use crate::rational::{ExactRational, RationalDoc};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<ExactRational>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(RationalDoc::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<ExactRational>, D::Error> {
        Option::<RationalDoc>::deserialize(d)?
            .map(|doc| ExactRational::try_from(&doc).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// A certificate produced on a reduced model: the witness certifies
/// `model_bound` for `trace.final_model`, and the overall bound is
/// `model_bound - total_error`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedFrom {
    pub trace: ReductionTrace,
    #[serde(with = "serde_rational")]
    pub model_bound: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub speeds: SpeedSet,
    pub method: Method,
    #[serde(with = "serde_rational")]
    pub bound: ExactRational,
    /// Enclosure of the closed-form value when the rational bound rounds it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enclosure: Option<BoundedDoc>,
    pub witness: Witness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReducedFrom>,
}

impl Certificate {
    fn plain(speeds: &SpeedSet, method: Method, bound: ExactRational, witness: Witness) -> Self {
        Certificate {
            speeds: speeds.clone(),
            method,
            bound,
            enclosure: None,
            witness,
            reduction: None,
        }
    }

    /// The speed set the witness speaks about.
    pub fn model(&self) -> &SpeedSet {
        self.reduction
            .as_ref()
            .map_or(&self.speeds, |r| &r.trace.final_model)
    }

    /// Larger bound first, then method order.
    pub fn ranking(&self, other: &Certificate) -> Ordering {
        self.bound
            .cmp(&other.bound)
            .then_with(|| other.method.cmp(&self.method))
            .then_with(|| other.reduction.is_some().cmp(&self.reduction.is_some()))
    }
}

pub fn trivial_bound(n: usize) -> ExactRational {
    ratio(1, 2 * n as u64)
}

pub fn certify_trivial(speeds: &SpeedSet) -> Certificate {
    Certificate::plain(
        speeds,
        Method::TrivialUnion,
        trivial_bound(speeds.len()),
        Witness::TrivialUnion,
    )
}

pub fn certify_exact(speeds: &SpeedSet, config: &MlConfig) -> Result<Certificate, CertificateError> {
    let r = ml_exact_with(speeds, config)?;
    Ok(Certificate::plain(
        speeds,
        Method::Exact,
        r.value,
        Witness::Exact {
            witness_time: r.witness_time,
        },
    ))
}

/// `⌈(p-1)/(2n)⌉ / p`.
pub fn prime_bound(n: usize, p: u64) -> ExactRational {
    let two_n = 2 * n as u64;
    ratio((p - 1).div_ceil(two_n), p)
}

fn check_prime(speeds: &SpeedSet, p: u64) -> Result<(), CertificateError> {
    if !is_prime(p) {
        return Err(CertificateError::NotPrime(p));
    }
    if let Some(v) = speeds.iter().find(|v| v % p == 0) {
        return Err(CertificateError::PrimeDividesSpeed { prime: p, speed: v });
    }
    Ok(())
}

pub fn certify_prime_discrete(speeds: &SpeedSet, p: u64) -> Result<Certificate, CertificateError> {
    check_prime(speeds, p)?;
    let n = speeds.len();
    Ok(Certificate::plain(
        speeds,
        Method::PrimeDiscrete,
        prime_bound(n, p),
        Witness::PrimeDiscrete {
            prime: p,
            residue: p % (2 * n as u64),
            window: None,
        },
    ))
}

fn in_window(r: u64, n: usize, c: &ExactRational) -> bool {
    let two_n = int(2 * n as u64);
    r >= 2 && int(r) <= (ExactRational::one() - c) * two_n
}

/// Smallest prime `p <= limit` dividing no speed with `p mod 2n` in
/// `[2, (1-c)·2n]`.
pub fn find_good_prime(
    speeds: &SpeedSet,
    c: &ExactRational,
    limit: u64,
) -> Result<u64, CertificateError> {
    if !c.is_positive() || *c >= ExactRational::one() {
        return Err(CertificateError::InvalidParameter(format!(
            "c must lie in (0, 1), got {c}"
        )));
    }
    let two_n = 2 * speeds.len() as u64;
    primes_up_to(limit)
        .into_iter()
        .find(|&p| speeds.iter().all(|v| v % p != 0) && in_window(p % two_n, speeds.len(), c))
        .ok_or(CertificateError::NoPrimeFound { limit })
}

pub fn certify_good_prime(
    speeds: &SpeedSet,
    c: &ExactRational,
    limit: u64,
) -> Result<Certificate, CertificateError> {
    let p = find_good_prime(speeds, c, limit)?;
    let mut cert = certify_prime_discrete(speeds, p)?;
    if let Witness::PrimeDiscrete { window, .. } = &mut cert.witness {
        *window = Some(c.clone());
    }
    Ok(cert)
}

/// The prime `<= limit` dividing no speed with the largest bound; the
/// smallest such prime on ties.
pub fn certify_best_prime(speeds: &SpeedSet, limit: u64) -> Result<Certificate, CertificateError> {
    let n = speeds.len();
    let best = primes_up_to(limit)
        .into_iter()
        .filter(|&p| speeds.iter().all(|v| v % p != 0))
        .fold(None::<(ExactRational, u64)>, |acc, p| {
            let b = prime_bound(n, p);
            match acc {
                Some((ab, ap)) if ab >= b => Some((ab, ap)),
                _ => Some((b, p)),
            }
        });
    let (_, p) = best.ok_or(CertificateError::NoPrimeFound { limit })?;
    certify_prime_discrete(speeds, p)
}

/// Decides `cos(2πb) >= 1 - 1/n`, i.e. `b <= arccos(1 - 1/n)/(2π)` on
/// `[0, 1/2]`.
fn below_arccos(b: &ExactRational, n: usize, policy: &PrecisionPolicy) -> Option<bool> {
    let target = ExactRational::one() - ratio(1, n as u64);
    policy
        .decide::<bool, ()>(|prec| {
            let c = cos_2pi(b, prec);
            Ok(match c.cmp_rational(&target) {
                Some(Ordering::Less) => Some(false),
                Some(_) => Some(true),
                None => None,
            })
        })
        .expect("infallible")
        .ok()
}

/// Bits of the dyadic bisection for the closed-form bound.
const ARCCOS_BITS: u32 = 48;

/// `arccos(1 - 1/n)/(2π)` for 1-dissociated speeds, as the largest dyadic
/// `b` (at `2^-48` resolution) with a certified `cos 2πb >= 1 - 1/n`.
pub fn certify_riesz_dissociated(
    speeds: &SpeedSet,
    policy: &PrecisionPolicy,
) -> Result<Certificate, CertificateError> {
    if let Dissociation::Relation(r) = is_k_dissociated(&speeds.as_i64(), 1)? {
        return Err(CertificateError::NotDissociated(r));
    }
    let n = speeds.len();
    let scale = 1u64 << ARCCOS_BITS;
    let (mut lo, mut hi) = (0u64, scale / 2);
    if below_arccos(&ratio(hi, scale), n, policy) == Some(true) {
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match below_arccos(&ratio(mid, scale), n, policy) {
            Some(true) => lo = mid,
            _ => hi = mid,
        }
    }
    let bound = ratio(lo, scale);
    let enclosure = BoundedReal::from_bounds(&bound, &ratio(hi.max(lo), scale), policy.start);
    let mut cert = Certificate::plain(speeds, Method::RieszDissociated, bound, Witness::RieszDissociated);
    cert.enclosure = Some(BoundedDoc::from(&enclosure));
    Ok(cert)
}

/// How the Riesz weight is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightChoice {
    /// `d / (n (C' log n)^7)` clipped to `[0, 1]`.
    Schedule { c_prime: ExactRational },
    Fixed(ExactRational),
    /// Keep the best certified bound over several weights.
    Sweep(Vec<ExactRational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RieszOptions {
    pub weight: WeightChoice,
    pub policy: PrecisionPolicy,
    /// Width at which the dilation `j` is chosen; `1/(2n)` by default.
    pub trial_delta: Option<ExactRational>,
}

impl Default for RieszOptions {
    fn default() -> Self {
        RieszOptions {
            weight: WeightChoice::Schedule { c_prime: int(1) },
            policy: PrecisionPolicy::default(),
            trial_delta: None,
        }
    }
}

/// `d / (n (C' ln n)^7)` clipped to `[0, 1]`, as a rational with 2^-32
/// resolution (rounded down).
pub fn scheduled_weight(d: usize, n: usize, c_prime: &ExactRational) -> ExactRational {
    let log = crate::rational::to_f64(c_prime) * (n as f64).ln();
    if n <= 2 || log <= 0.0 {
        return int(1);
    }
    let w = d as f64 / (n as f64 * log.powi(7));
    if !w.is_finite() || w >= 1.0 {
        return int(1);
    }
    let scale = 1u64 << 32;
    ratio((w * scale as f64).floor() as u64, scale)
}

/// `Σ_{m∈D} Φ̂(jm)` at width `delta`, in floating point.
fn shell_mass_f64(speeds: &SpeedSet, base: &[i64], j: u64, delta: f64) -> f64 {
    let mut total = 0.0;
    for &m in base {
        let f = j * m as u64;
        for v in speeds.iter() {
            if f % v == 0 {
                let q = (f / v) as f64;
                total += (2.0 * std::f64::consts::PI * q * delta).sin() / (std::f64::consts::PI * q);
            }
        }
    }
    total
}

/// The `j ∈ [1, 100n]` maximizing `Σ_{m∈D} Φ̂(jm)`; smallest on ties.
pub fn choose_dilation(speeds: &SpeedSet, base: &[i64], delta: &ExactRational) -> u64 {
    let d = crate::rational::to_f64(delta);
    let mut best = (f64::NEG_INFINITY, 1u64);
    for j in 1..=100 * speeds.len() as u64 {
        let s = shell_mass_f64(speeds, base, j, d);
        if s > best.0 + 1e-12 {
            best = (s, j);
        }
    }
    best.1
}

/// Heuristic margin below 1 for floating-point exclusion during the search;
/// the final bound is always re-checked rigorously.
const SEARCH_MARGIN: f64 = 1e-9;

/// Largest searched `δ` whose exclusion `∫ΦR < 1` is certified.
fn riesz_search(
    speeds: &SpeedSet,
    expansion: &RieszExpansion,
    policy: &PrecisionPolicy,
) -> Option<(ExactRational, crate::fourier::RieszIntegral)> {
    let width = ratio(1, 16 * speeds.len() as u64 * speeds.max());
    let mut lo = ExactRational::zero();
    let mut hi = ratio(1, 2);
    let mut excluded = Vec::new();
    while &hi - &lo >= width {
        let mid = (&lo + &hi) / int(2);
        if expansion.integrate_f64(&mid) < 1.0 - SEARCH_MARGIN {
            excluded.push(mid.clone());
            lo = mid;
        } else {
            hi = mid;
        }
    }
    for delta in excluded.into_iter().rev() {
        let decided = policy
            .decide::<_, ()>(|prec| {
                let r = expansion.integrate(&delta, prec);
                Ok(match r.value.cmp_rational(&int(1)) {
                    Some(Ordering::Less) => Some(Some(r)),
                    Some(_) => Some(None),
                    None => None,
                })
            })
            .expect("infallible");
        if let Ok(Some(r)) = decided {
            return Some((delta, r));
        }
    }
    None
}

pub fn certify_riesz_general(
    speeds: &SpeedSet,
    options: &RieszOptions,
) -> Result<Certificate, CertificateError> {
    let n = speeds.len();
    let base = dim2(&speeds.as_i64())?.witness;
    if base.len() > RIESZ_MAX_FREQUENCIES {
        return Err(FourierError::BudgetExceeded {
            size: 3u128.pow(base.len() as u32),
            budget: 3u128.pow(RIESZ_MAX_FREQUENCIES as u32),
        }
        .into());
    }
    let trial = options.trial_delta.clone().unwrap_or_else(|| trivial_bound(n));
    let j = choose_dilation(speeds, &base, &trial);
    let frequencies: Vec<i64> = base.iter().map(|&m| m * j as i64).collect();
    let weights = match &options.weight {
        WeightChoice::Schedule { c_prime } => vec![scheduled_weight(base.len(), n, c_prime)],
        WeightChoice::Fixed(w) => vec![w.clone()],
        WeightChoice::Sweep(ws) => ws.clone(),
    };
    let mut best: Option<Certificate> = None;
    let mut undecided = false;
    for w in weights {
        let riesz = RieszSpec::new(frequencies.clone(), w)?;
        let expansion = RieszExpansion::new(speeds, &riesz);
        let Some((delta, integral)) = riesz_search(speeds, &expansion, &options.policy) else {
            undecided = true;
            continue;
        };
        if best.as_ref().is_some_and(|b| b.bound >= delta) {
            continue;
        }
        best = Some(Certificate::plain(
            speeds,
            Method::RieszGeneral,
            delta,
            Witness::RieszGeneral {
                base: base.clone(),
                dilation: j,
                riesz,
                trial_delta: trial.clone(),
                integral: BoundedDoc::from(&integral.value),
                t2: BoundedDoc::from(&integral.t2),
                t3: BoundedDoc::from(&integral.t3),
            },
        ));
    }
    match best {
        Some(c) => Ok(c),
        None if undecided => Err(Undecided {
            bits: options.policy.cap,
        }
        .into()),
        None => Err(CertificateError::InvalidParameter("no weights given".into())),
    }
}

/// Effort presets for [`best_certificate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Effort {
    Quick,
    #[default]
    Standard,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub ml: MlConfig,
    pub exact: bool,
    pub prime_limit: u64,
    pub c: ExactRational,
    pub riesz: Option<RieszOptions>,
    pub reduction: Option<(u64, ReductionConfig)>,
}

impl CertifyOptions {
    pub fn from_effort(effort: Effort) -> Self {
        let sweep = WeightChoice::Sweep(
            [ratio(1, 16), ratio(1, 8), ratio(1, 4), ratio(1, 2), int(1)].into(),
        );
        match effort {
            Effort::Quick => CertifyOptions {
                ml: MlConfig::default(),
                exact: false,
                prime_limit: 200,
                c: ratio(1, 2),
                riesz: None,
                reduction: None,
            },
            Effort::Standard => CertifyOptions {
                ml: MlConfig::default(),
                exact: true,
                prime_limit: 2000,
                c: ratio(1, 2),
                riesz: Some(RieszOptions::default()),
                reduction: Some((64, ReductionConfig::default())),
            },
            Effort::Exhaustive => CertifyOptions {
                ml: MlConfig::default(),
                exact: true,
                prime_limit: 20_000,
                c: ratio(1, 2),
                riesz: Some(RieszOptions {
                    weight: sweep,
                    ..RieszOptions::default()
                }),
                reduction: Some((
                    64,
                    ReductionConfig {
                        path: crate::reduction::RectifyPath::Exhaustive,
                        ..ReductionConfig::default()
                    },
                )),
            },
        }
    }
}

/// All certificates the options allow that do not go through reduction.
pub fn direct_certificates(speeds: &SpeedSet, options: &CertifyOptions) -> Vec<Certificate> {
    let mut out = vec![certify_trivial(speeds)];
    if options.exact {
        if let Ok(c) = certify_exact(speeds, &options.ml) {
            out.push(c);
        }
    }
    if let Ok(c) = certify_best_prime(speeds, options.prime_limit) {
        out.push(c);
    }
    if let Ok(c) = certify_riesz_dissociated(speeds, &PrecisionPolicy::default()) {
        out.push(c);
    }
    if let Some(riesz) = &options.riesz {
        if let Ok(c) = certify_riesz_general(speeds, riesz) {
            out.push(c);
        }
    }
    out
}

fn pick(certs: Vec<Certificate>) -> Certificate {
    certs
        .into_iter()
        .max_by(|a, b| a.ranking(b))
        .expect("the trivial certificate always exists")
}

/// Reduces first, certifies the final model, and subtracts the error.
pub fn certify_reduced(
    speeds: &SpeedSet,
    stop_radius: u64,
    config: &ReductionConfig,
    options: &CertifyOptions,
) -> Result<Certificate, CertificateError> {
    certify_reduced_with(speeds, stop_radius, config, |model| {
        Ok(pick(direct_certificates(model, options)))
    })
}

/// Like [`certify_reduced`] with a caller-chosen certifier for the final model.
pub fn certify_reduced_with(
    speeds: &SpeedSet,
    stop_radius: u64,
    config: &ReductionConfig,
    certify: impl FnOnce(&SpeedSet) -> Result<Certificate, CertificateError>,
) -> Result<Certificate, CertificateError> {
    let trace = reduce_model(speeds, stop_radius, config)?;
    let inner = certify(&trace.final_model)?;
    let bound = &inner.bound - trace.total_error();
    Ok(Certificate {
        speeds: speeds.clone(),
        method: inner.method,
        bound,
        enclosure: None,
        witness: inner.witness,
        reduction: Some(ReducedFrom {
            trace,
            model_bound: inner.bound,
        }),
    })
}

/// The strongest certificate among the applicable methods.
pub fn best_certificate(speeds: &SpeedSet, options: &CertifyOptions) -> Certificate {
    let mut certs = direct_certificates(speeds, options);
    if let Some((stop, config)) = &options.reduction {
        if let Ok(c) = certify_reduced(speeds, *stop, config, options) {
            if c.reduction.as_ref().is_some_and(|r| !r.trace.is_trivial()) {
                certs.push(c);
            }
        }
    }
    pick(certs)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("verification failed: {0}")]
pub struct VerificationFailure(pub String);

fn fail<T>(msg: impl Into<String>) -> Result<T, VerificationFailure> {
    Err(VerificationFailure(msg.into()))
}

/// Re-derives the bound from the witness alone; the stored bound is trusted
/// only as the claim being checked.
pub fn verify_certificate(cert: &Certificate, policy: &PrecisionPolicy) -> Result<(), VerificationFailure> {
    let (model, claim) = match &cert.reduction {
        None => (&cert.speeds, cert.bound.clone()),
        Some(r) => {
            if r.trace.original != cert.speeds {
                return fail("reduction trace starts from a different speed set");
            }
            verify_trace(&r.trace).map_err(VerificationFailure)?;
            if cert.bound != &r.model_bound - r.trace.total_error() {
                return fail("bound is not the model bound minus the reduction error");
            }
            (&r.trace.final_model, r.model_bound.clone())
        }
    };
    verify_witness(model, cert.method, &claim, &cert.witness, policy)
}

fn verify_witness(
    speeds: &SpeedSet,
    method: Method,
    claim: &ExactRational,
    witness: &Witness,
    policy: &PrecisionPolicy,
) -> Result<(), VerificationFailure> {
    let n = speeds.len();
    match (method, witness) {
        (Method::TrivialUnion, Witness::TrivialUnion) => {
            if *claim > trivial_bound(n) {
                return fail(format!("trivial bound is 1/{}, claimed {claim}", 2 * n));
            }
        }
        (Method::Exact, Witness::Exact { witness_time }) => {
            let value = loneliness_at(speeds, witness_time);
            if *claim > value {
                return fail(format!("loneliness at {witness_time} is {value}, claimed {claim}"));
            }
        }
        (
            Method::PrimeDiscrete,
            Witness::PrimeDiscrete {
                prime,
                residue,
                window,
            },
        ) => {
            let p = *prime;
            check_prime(speeds, p).map_err(|e| VerificationFailure(e.to_string()))?;
            if *residue != p % (2 * n as u64) {
                return fail("recorded residue does not match p mod 2n");
            }
            if let Some(c) = window {
                if !in_window(*residue, n, c) {
                    return fail("residue outside the window [2, (1-c)2n]");
                }
            }
            let b = prime_bound(n, p);
            if *claim > b {
                return fail(format!("prime {p} gives {b}, claimed {claim}"));
            }
        }
        (Method::RieszDissociated, Witness::RieszDissociated) => {
            match is_k_dissociated(&speeds.as_i64(), 1) {
                Ok(Dissociation::Dissociated) => {}
                Ok(Dissociation::Relation(r)) => return fail(format!("not 1-dissociated: {r}")),
                Err(e) => return fail(e.to_string()),
            }
            if claim.is_negative() || *claim > ratio(1, 2) {
                return fail("bound outside [0, 1/2]");
            }
            if below_arccos(claim, n, policy) != Some(true) {
                return fail("cos(2π·bound) is not certified to be at least 1 - 1/n");
            }
        }
        (Method::RieszGeneral, Witness::RieszGeneral { riesz, .. }) => {
            if !claim.is_positive() {
                return Ok(());
            }
            if *claim > ratio(1, 2) {
                return fail("bound above 1/2");
            }
            let spec = PhiSpec::new(speeds.clone(), claim.clone())
                .map_err(|e| VerificationFailure(e.to_string()))?;
            let expansion = RieszExpansion::new(spec.speeds(), riesz);
            let decided = policy
                .decide::<bool, ()>(|prec| {
                    let r = expansion.integrate(spec.delta(), prec);
                    Ok(r.value.cmp_rational(&int(1)).map(|o| o == Ordering::Less))
                })
                .expect("infallible");
            match decided {
                Ok(true) => {}
                Ok(false) => return fail("∫ΦR >= 1 at the claimed bound"),
                Err(u) => return fail(u.to_string()),
            }
        }
        _ => return fail("witness does not match the method"),
    }
    Ok(())
}

/// `1/(2n) + (1 - r/(2n))/p` for `r = p mod 2n` (taking `r = 2n` when
/// `2n | p`).
pub fn prime_bound_closed_form(n: usize, p: u64) -> ExactRational {
    let two_n = 2 * n as u64;
    let r = match p % two_n {
        0 => two_n,
        r => r,
    };
    ratio(1, two_n) + (ExactRational::one() - ratio(r, two_n)) / int(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_ml::ml_exact;
    use crate::speeds::validate_speed_set;

    fn set(v: &[i64]) -> SpeedSet {
        validate_speed_set(v).unwrap()
    }

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(certify_trivial(&set(&[1, 2, 3])).bound, ratio(1, 6));
        assert_eq!(certify_trivial(&set(&[5])).bound, ratio(1, 2));
        let ten: Vec<i64> = (1..=10).collect();
        assert_eq!(certify_trivial(&set(&ten)).bound, ratio(1, 20));
    }

    #[test]
    fn prime_examples() {
        let c = certify_prime_discrete(&set(&[1, 2, 3]), 5).unwrap();
        assert_eq!(c.bound, ratio(1, 5));
        assert!(c.bound <= ml_exact(&set(&[1, 2, 3])).unwrap().value);
        let c = certify_prime_discrete(&set(&[1, 2, 3, 4]), 11).unwrap();
        assert_eq!(c.bound, ratio(2, 11));
        assert!(matches!(
            certify_prime_discrete(&set(&[5, 10]), 5),
            Err(CertificateError::PrimeDividesSpeed { .. })
        ));
        assert!(matches!(
            certify_prime_discrete(&set(&[1]), 9),
            Err(CertificateError::NotPrime(9))
        ));
    }

    /// Brute-force oracle for the window search.
    fn brute_good_prime(v: &SpeedSet, c: &ExactRational, limit: u64) -> Option<u64> {
        let two_n = 2 * v.len() as u64;
        (2..=limit).find(|&p| {
            (2..p).all(|k| p % k != 0)
                && v.iter().all(|s| s % p != 0)
                && p % two_n >= 2
                && int(p % two_n) <= (int(1) - c) * int(two_n)
        })
    }

    #[test]
    fn good_prime_matches_brute_force() {
        let half = ratio(1, 2);
        // Every prime above 3 is ±1 mod 6, outside [2, 3].
        assert_eq!(brute_good_prime(&set(&[1, 2, 3]), &half, 100), None);
        assert!(matches!(
            find_good_prime(&set(&[1, 2, 3]), &half, 100),
            Err(CertificateError::NoPrimeFound { .. })
        ));
        for v in [&[1i64, 2, 3, 4][..], &[2, 9, 14], &[5, 6, 7, 8, 9]] {
            let s = set(v);
            assert_eq!(find_good_prime(&s, &half, 500).ok(), brute_good_prime(&s, &half, 500));
        }
        let evens: Vec<i64> = (1..=6).map(|k| 2 * k).collect();
        assert!(find_good_prime(&set(&evens), &ratio(99, 100), 50).is_err());
    }

    #[test]
    fn closed_form_identity() {
        for n in 1..=20usize {
            for p in primes_up_to(2000) {
                if p % (2 * n as u64) >= 2 || p % (2 * n as u64) == 0 {
                    assert_eq!(prime_bound(n, p), prime_bound_closed_form(n, p), "n={n} p={p}");
                }
            }
        }
    }

    #[test]
    fn riesz_dissociated_examples() {
        let one = certify_riesz_dissociated(&set(&[7]), &policy()).unwrap();
        assert_eq!(one.bound, ratio(1, 4));
        let geo = certify_riesz_dissociated(&set(&[1, 3, 9, 27]), &policy()).unwrap();
        let expected = (0.75f64).acos() / (2.0 * std::f64::consts::PI);
        assert!((crate::rational::to_f64(&geo.bound) - expected).abs() < 1e-12);
        assert!(geo.bound <= ratio(1, 2));
        let pair = certify_riesz_dissociated(&set(&[1, 2]), &policy()).unwrap();
        assert!(pair.bound <= ratio(1, 6) && ratio(1, 6) - &pair.bound < ratio(1u64, 1u64 << 40));
        assert!(matches!(
            certify_riesz_dissociated(&set(&[1, 2, 3]), &policy()),
            Err(CertificateError::NotDissociated(_))
        ));
        verify_certificate(&geo, &policy()).unwrap();
    }

    #[test]
    fn riesz_general_zero_weight_is_trivial() {
        let v = set(&[2, 5, 9]);
        let opts = RieszOptions {
            weight: WeightChoice::Fixed(int(0)),
            ..RieszOptions::default()
        };
        let c = certify_riesz_general(&v, &opts).unwrap();
        assert!(c.bound < ratio(1, 6));
        assert!(ratio(1, 6) - &c.bound <= ratio(1, 16 * 3 * 9));
        verify_certificate(&c, &policy()).unwrap();
    }

    #[test]
    fn riesz_general_is_sound_and_can_beat_trivial() {
        let v = set(&[1, 3, 9]);
        let opts = RieszOptions {
            weight: WeightChoice::Sweep(vec![ratio(1, 4), ratio(1, 2), int(1)]),
            ..RieszOptions::default()
        };
        let c = certify_riesz_general(&v, &opts).unwrap();
        assert!(c.bound <= ml_exact(&v).unwrap().value);
        assert!(c.bound > ratio(1, 6), "bound {}", c.bound);
        verify_certificate(&c, &policy()).unwrap();
    }

    #[test]
    fn best_certificate_prefers_exact() {
        let c = best_certificate(&set(&[1, 2, 3]), &CertifyOptions::from_effort(Effort::Standard));
        assert_eq!(c.method, Method::Exact);
        assert_eq!(c.bound, ratio(1, 4));
        verify_certificate(&c, &policy()).unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let mut c = certify_prime_discrete(&set(&[1, 2, 3]), 5).unwrap();
        verify_certificate(&c, &policy()).unwrap();
        c.bound += ratio(1, 1000);
        assert!(verify_certificate(&c, &policy()).is_err());
        let mut c = certify_prime_discrete(&set(&[1, 2, 3]), 5).unwrap();
        c.witness = Witness::PrimeDiscrete {
            prime: 9,
            residue: 3,
            window: None,
        };
        assert!(verify_certificate(&c, &policy()).is_err());
        let mut e = certify_exact(&set(&[1, 2, 3]), &MlConfig::default()).unwrap();
        e.bound = ratio(1, 3);
        assert!(verify_certificate(&e, &policy()).is_err());
    }

    #[test]
    fn reduced_certificate_verifies() {
        let v = set(&[1001, 2003]);
        let opts = CertifyOptions::from_effort(Effort::Exhaustive);
        let c = certify_reduced(&v, 8, &opts.reduction.as_ref().unwrap().1, &opts).unwrap();
        verify_certificate(&c, &policy()).unwrap();
        assert!(c.bound <= ml_exact(&v).unwrap().value);
    }
}
