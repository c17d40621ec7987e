//! JSON operator definitions.

use cso_core::{AffineCso, Complex, Error as CoreError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

fn default_mu() -> f64 {
    0.999
}

fn default_truncation() -> usize {
    128
}

/// One term `a f(s (z - fix) + fix)`, complex numbers as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub a: [f64; 2],
    pub s: [f64; 2],
    pub fix: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    pub terms: Vec<TermConfig>,
    pub radius: f64,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("invalid config field {field}: {message}")]
    Field { field: String, message: String },
}

fn field(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: field.into(), message: message.into() }
}

pub fn complex(pair: [f64; 2]) -> Complex {
    Complex::new(pair[0], pair[1])
}

pub fn parse_config(text: &str) -> Result<OperatorConfig, ConfigError> {
    let config: OperatorConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

impl OperatorConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(field("radius", format!("must be finite and positive, got {}", self.radius)));
        }
        if !(self.mu.is_finite() && self.mu > 0.0 && self.mu <= 1.0) {
            return Err(field("mu", format!("must lie in (0, 1], got {}", self.mu)));
        }
        if self.truncation == 0 {
            return Err(field("truncation", "must be at least 1"));
        }
        if self.terms.is_empty() {
            return Err(field("terms", "at least one term is required"));
        }
        for (i, t) in self.terms.iter().enumerate() {
            for (name, v) in [("a", t.a), ("s", t.s), ("fix", t.fix)] {
                if !(v[0].is_finite() && v[1].is_finite()) {
                    return Err(field(format!("terms[{i}].{name}"), "non-finite value"));
                }
            }
            if complex(t.a).norm() == 0.0 {
                return Err(field(format!("terms[{i}].a"), "coefficient is zero"));
            }
            let rate = complex(t.s).norm();
            if rate >= 1.0 {
                return Err(field(format!("terms[{i}].s"), format!("rate modulus {rate} is not below 1")));
            }
        }
        self.operator().map(|_| ())
    }

    pub fn operator(&self) -> Result<AffineCso, ConfigError> {
        let triples: Vec<_> = self.terms.iter().map(|t| (complex(t.a), complex(t.s), complex(t.fix))).collect();
        AffineCso::from_triples(&triples).map_err(|e| match e {
            CoreError::DuplicateMap { first, second } => {
                field(format!("terms[{second}]"), format!("same map as terms[{first}]"))
            }
            CoreError::ZeroCoefficient { index } => field(format!("terms[{index}].a"), "coefficient is zero"),
            CoreError::NotContractingMap { index, modulus } => {
                field(format!("terms[{index}].s"), format!("rate modulus {modulus} is not below 1"))
            }
            other => field("terms", other.to_string()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
