use dixmier_core::catalog::DomainFamily;
use dixmier_core::models::ModelKind;
use dixmier_core::SymbolPolynomial;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Catalog,
    Norms,
    Dims,
    SequenceFit,
    Spectrum,
    Dixmier,
    Rhs,
    VerifyAll,
}

impl Pipeline {
    pub fn is_stochastic(self) -> bool {
        matches!(self, Pipeline::Rhs | Pipeline::VerifyAll)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMode {
    #[default]
    Singular,
    Hermitian,
}

/// A single experiment. Symbols are JSON term lists; pairs are `[f, g]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub pipeline: Option<Pipeline>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<Vec<(u64, u64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(Value, Value)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<SpectrumMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    /// Relative tolerance against `reference`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
#[error("invalid configuration at {pointer}: {message}")]
pub struct ConfigError {
    /// JSON pointer into the configuration document.
    pub pointer: String,
    pub message: String,
}

impl ConfigError {
    pub fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { pointer: pointer.into(), message: message.into() }
    }
}

/// Parse a configuration document, reporting schema errors by JSON pointer.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        use serde_path_to_error::Segment;
        let pointer: String = e
            .path()
            .iter()
            .filter_map(|seg| match seg {
                Segment::Seq { index } => Some(format!("/{index}")),
                Segment::Map { key } | Segment::Enum { variant: key } => {
                    Some(format!("/{}", key.replace('~', "~0").replace('/', "~1")))
                }
                Segment::Unknown => None,
            })
            .collect();
        ConfigError::at(pointer, e.inner().to_string())
    })
}

impl ExperimentConfig {
    pub fn pipeline(&self) -> Result<Pipeline, ConfigError> {
        self.pipeline.ok_or_else(|| ConfigError::at("/pipeline", "missing pipeline"))
    }

    pub fn domain(&self) -> Result<DomainFamily, ConfigError> {
        let s = self.domain.as_deref().ok_or_else(|| ConfigError::at("/domain", "missing domain"))?;
        s.parse().map_err(|e: dixmier_core::Error| ConfigError::at("/domain", e.to_string()))
    }

    pub fn model(&self) -> Result<ModelKind, ConfigError> {
        let s = self.model.as_deref().ok_or_else(|| ConfigError::at("/model", "missing model"))?;
        s.parse().map_err(|e: dixmier_core::Error| ConfigError::at("/model", e.to_string()))
    }

    pub fn truncation(&self) -> Result<u32, ConfigError> {
        self.truncation.ok_or_else(|| ConfigError::at("/truncation", "missing truncation"))
    }

    pub fn seed(&self) -> Result<u64, ConfigError> {
        self.seed.ok_or_else(|| ConfigError::at("/seed", "a seed is required for stochastic runs"))
    }

    pub fn symbol(&self, nvars: usize) -> Result<SymbolPolynomial, ConfigError> {
        let v = self.symbol.as_ref().ok_or_else(|| ConfigError::at("/symbol", "missing symbol"))?;
        SymbolPolynomial::from_json(v, nvars).map_err(|e| ConfigError::at(format!("/symbol{}", e.pointer), e.message))
    }

    pub fn pairs(&self, nvars: usize) -> Result<Vec<(SymbolPolynomial, SymbolPolynomial)>, ConfigError> {
        let pairs = self.pairs.as_ref().ok_or_else(|| ConfigError::at("/pairs", "missing pairs"))?;
        pairs
            .iter()
            .enumerate()
            .map(|(i, (f, g))| {
                let parse = |v: &Value, j: usize| {
                    SymbolPolynomial::from_json(v, nvars)
                        .map_err(|e| ConfigError::at(format!("/pairs/{i}/{j}{}", e.pointer), e.message))
                };
                Ok((parse(f, 0)?, parse(g, 1)?))
            })
            .collect()
    }

    /// Semantic validation beyond the schema.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = self.pipeline()?;
        if p.is_stochastic() {
            self.seed()?;
        }
        match p {
            Pipeline::Catalog => {
                if self.domain.is_some() {
                    self.domain()?;
                }
            }
            Pipeline::Norms | Pipeline::Dims | Pipeline::SequenceFit | Pipeline::Rhs => {
                self.domain()?;
            }
            Pipeline::Spectrum | Pipeline::Dixmier => {
                self.model()?;
                self.truncation()?;
            }
            Pipeline::VerifyAll => {}
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return Err(ConfigError::at("/tolerance", "tolerance must be a nonnegative number"));
            }
        }
        if self.samples == Some(0) {
            return Err(ConfigError::at("/samples", "need at least one sample"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        let cfg = parse_config(r#"{"pipeline": "sequence-fit", "domain": "I:2:3", "k": 2, "windows": [[10, 100]]}"#).unwrap();
        assert_eq!(cfg.pipeline, Some(Pipeline::SequenceFit));
        let again = parse_config(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn stochastic_pipelines_need_a_seed() {
        assert!(Pipeline::Rhs.is_stochastic() && Pipeline::VerifyAll.is_stochastic());
        assert!(!Pipeline::Dixmier.is_stochastic());
        let cfg = ExperimentConfig { pipeline: Some(Pipeline::Rhs), domain: Some("ball:2".into()), ..Default::default() };
        assert_eq!(cfg.validate().unwrap_err().pointer, "/seed");
    }

    #[test]
    fn top_level_errors_have_empty_pointer() {
        assert_eq!(parse_config("true").unwrap_err().pointer, "");
    }

    #[test]
    fn negative_tolerance_rejected() {
        let cfg = parse_config(r#"{"pipeline": "catalog", "tolerance": -1}"#).unwrap();
        assert_eq!(cfg.validate().unwrap_err().pointer, "/tolerance");
    }
}
