//! Run configuration shared by the command-line entry points.

use crate::certificates::{CertifyOptions, Effort, WeightChoice};
use crate::exact_ml::DEFAULT_CANDIDATE_BUDGET;
use crate::interval::{PrecisionPolicy, DEFAULT_PRECISION, PRECISION_CAP};
use crate::rational::{parse_rational, ExactRational};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Names the default config file when no path is given explicitly.
pub const CONFIG_ENV: &str = "RUNNERLAB_CONFIG";

/// Recognized keys of [`RunConfig::constants`].
pub const CONSTANT_KEYS: [&str; 3] = ["c", "c_prime", "c1"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub candidate_budget: u64,
    pub rng_seed: u64,
    pub effort: Effort,
    /// Rationals written as `"a/b"` or decimals.
    pub constants: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: DEFAULT_PRECISION,
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
            rng_seed: 42,
            effort: Effort::Standard,
            constants: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    /// An explicit path, else the file named by [`CONFIG_ENV`], else defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        match path {
            Some(p) => Self::from_file(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.precision_bits == 0 || self.precision_bits > PRECISION_CAP {
            return Err(ConfigError::Invalid(format!(
                "precision_bits must be in [1, {PRECISION_CAP}]"
            )));
        }
        if self.candidate_budget == 0 {
            return Err(ConfigError::Invalid("candidate_budget must be positive".into()));
        }
        for key in self.constants.keys() {
            if !CONSTANT_KEYS.contains(&key.as_str()) {
                return Err(ConfigError::Invalid(format!("unknown constant {key:?}")));
            }
            let value = self.constant(key)?.expect("key present");
            if !value.is_positive() {
                return Err(ConfigError::Invalid(format!("constant {key} must be positive")));
            }
        }
        Ok(())
    }

    pub fn constant(&self, key: &str) -> Result<Option<ExactRational>, ConfigError> {
        self.constants
            .get(key)
            .map(|s| parse_rational(s).map_err(|e| ConfigError::Invalid(format!("{key}: {e}"))))
            .transpose()
    }

    pub fn policy(&self) -> PrecisionPolicy {
        PrecisionPolicy::new(self.precision_bits, PRECISION_CAP)
    }

    pub fn certify_options(&self) -> Result<CertifyOptions, ConfigError> {
        let mut options = CertifyOptions::from_effort(self.effort);
        options.ml.candidate_budget = self.candidate_budget;
        if let Some(c) = self.constant("c")? {
            options.c = c;
        }
        if let Some(riesz) = &mut options.riesz {
            riesz.policy = self.policy();
            if let (Some(c_prime), WeightChoice::Schedule { .. }) =
                (self.constant("c_prime")?, &riesz.weight)
            {
                riesz.weight = WeightChoice::Schedule { c_prime };
            }
        }
        Ok(options)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn parses_and_validates() {
        let c = RunConfig::from_json(
            r#"{"precision_bits": 256, "effort": "quick", "constants": {"c": "1/3"}}"#,
        )
        .unwrap();
        assert_eq!(c.precision_bits, 256);
        assert_eq!(c.rng_seed, 42);
        assert_eq!(c.certify_options().unwrap().c, ratio(1, 3));
        assert!(RunConfig::from_json(r#"{"candidate_budget": 0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"precision_bits": 5000}"#).is_err());
        assert!(RunConfig::from_json(r#"{"constants": {"zeta": "1"}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"constants": {"c": "-1"}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"seed": 1}"#).is_err());
    }

    #[test]
    fn c_prime_overrides_schedule() {
        let c = RunConfig::from_json(r#"{"constants": {"c_prime": "2"}}"#).unwrap();
        let riesz = c.certify_options().unwrap().riesz.unwrap();
        assert_eq!(riesz.weight, WeightChoice::Schedule { c_prime: ratio(2, 1) });
    }
}
