//! Versioned structured documents (`runnerlab/1`) and their re-verification.

use crate::certificates::{verify_certificate, Certificate};
use crate::exact_ml::{ml_exact_with, ml_grid_oracle, MlConfig, MlError};
use crate::interval::PrecisionPolicy;
use crate::rational::{serde_rational, to_decimal, ExactRational};
use crate::reduction::{verify_trace, ReductionTrace};
use crate::speeds::SpeedSet;
use crate::suite::SuiteReport;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: &str = "runnerlab/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    pub version: String,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "body", rename_all = "kebab-case")]
pub enum Payload {
    Certificate(Certificate),
    Trace(ReductionTrace),
    Ml(Vec<MlRecord>),
    SpeedSets(Vec<SpeedSet>),
    Suite(SuiteReport),
}

impl Document {
    pub fn new(payload: Payload) -> Self {
        Document {
            schema: SCHEMA.to_string(),
            version: VERSION.to_string(),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: Document = serde_json::from_str(text).map_err(|e| DocumentError::Malformed {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if !doc.schema.starts_with("runnerlab/") {
            return Err(DocumentError::UnknownSchema(doc.schema));
        }
        Ok(doc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown schema {0:?}")]
    UnknownSchema(String),
    #[error("documents of kind {0} carry nothing to verify")]
    NotVerifiable(&'static str),
}

/// Exact `ML(V)` with its witness and a grid cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlRecord {
    pub speeds: SpeedSet,
    #[serde(with = "serde_rational")]
    pub value: ExactRational,
    #[serde(with = "serde_rational")]
    pub witness_time: ExactRational,
    pub decimal: String,
    pub oracle: OracleCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub grid: u64,
    #[serde(with = "serde_rational")]
    pub grid_value: ExactRational,
    /// `grid_value <= value <= grid_value + max V / grid`.
    pub consistent: bool,
}

pub fn ml_record(speeds: &SpeedSet, config: &MlConfig, grid: u64) -> Result<MlRecord, MlError> {
    let r = ml_exact_with(speeds, config)?;
    let grid_value = ml_grid_oracle(speeds, grid);
    let slack = crate::rational::ratio(speeds.max(), grid);
    let consistent = grid_value <= r.value && r.value <= &grid_value + slack;
    Ok(MlRecord {
        speeds: speeds.clone(),
        decimal: to_decimal(&r.value, 12),
        value: r.value,
        witness_time: r.witness_time,
        oracle: OracleCheck {
            grid,
            grid_value,
            consistent,
        },
    })
}

/// Outcome of [`verify_document`]: `failures` empty means pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub warnings: Vec<String>,
    pub failures: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes everything the document claims. Schema or version drift only
/// produces warnings.
pub fn verify_document(doc: &Document, policy: &PrecisionPolicy) -> Result<Verification, DocumentError> {
    let mut out = Verification::default();
    if doc.schema != SCHEMA {
        out.warnings.push(format!("schema {} differs from {SCHEMA}", doc.schema));
    }
    if doc.version != VERSION {
        out.warnings
            .push(format!("written by version {}, checking with {VERSION}", doc.version));
    }
    match &doc.payload {
        Payload::Certificate(cert) => {
            if let Err(e) = verify_certificate(cert, policy) {
                out.failures.push(e.0);
            }
        }
        Payload::Trace(trace) => {
            if let Err(e) = verify_trace(trace) {
                out.failures.push(e);
            }
        }
        Payload::Ml(records) => {
            for r in records {
                match ml_exact_with(&r.speeds, &MlConfig::default()) {
                    Ok(m) if m.value == r.value && m.witness_time == r.witness_time => {}
                    Ok(m) => out.failures.push(format!(
                        "ML{} is {} at {}, document says {} at {}",
                        r.speeds, m.value, m.witness_time, r.value, r.witness_time
                    )),
                    Err(e) => out.failures.push(format!("{}: {e}", r.speeds)),
                }
            }
        }
        Payload::SpeedSets(_) => return Err(DocumentError::NotVerifiable("speed-sets")),
        Payload::Suite(_) => return Err(DocumentError::NotVerifiable("suite")),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::certify_prime_discrete;
    use crate::rational::ratio;

    #[test]
    fn round_trip_and_tamper() {
        let s = SpeedSet::new([1, 2, 3]).unwrap();
        let doc = Document::new(Payload::Certificate(certify_prime_discrete(&s, 5).unwrap()));
        let back = Document::parse(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let policy = PrecisionPolicy::default();
        assert!(verify_document(&back, &policy).unwrap().passed());

        let mut tampered = back.clone();
        if let Payload::Certificate(c) = &mut tampered.payload {
            c.bound = ratio(1, 4);
        }
        assert!(!verify_document(&tampered, &policy).unwrap().passed());

        let mut old = back;
        old.version = "0.0.1".into();
        let v = verify_document(&old, &policy).unwrap();
        assert!(v.passed());
        assert_eq!(v.warnings.len(), 1);
    }

    #[test]
    fn malformed_reports_position() {
        let err = Document::parse("{\n  \"schema\": 3\n}").unwrap_err();
        assert!(matches!(err, DocumentError::Malformed { line: 2, .. }), "{err:?}");
        let wrong = r#"{"schema":"other/1","version":"1","kind":"speed-sets","body":[[1]]}"#;
        assert!(matches!(Document::parse(wrong), Err(DocumentError::UnknownSchema(_))));
    }

    #[test]
    fn ml_record_checks_oracle() {
        let r = ml_record(&SpeedSet::new([1, 2, 3]).unwrap(), &MlConfig::default(), 1000).unwrap();
        assert_eq!(r.value, ratio(1, 4));
        assert!(r.oracle.consistent);
    }
}
