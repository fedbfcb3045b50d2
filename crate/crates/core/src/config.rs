//! Model files. The format follows the extension: `.json` is JSON, anything
//! else is TOML.
//!
//! ```toml
//! n = 6
//! r = 5
//! lifetime = { kind = "exponential", rate = 1.0 }
//! power = { kind = "exponential", rate = 1.0 }
//! copula = { kind = "fgm", alpha = 1.0 }
//! decay = { kind = "exp", theta = 1.0 }
//!
//! [quadrature]   # optional
//! rel_tol = 1e-10
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::copula::CopulaSpec;
use crate::decay::DecaySpec;
use crate::distributions::DistributionSpec;
use crate::quadrature::QuadratureConfig;
use crate::reliability::SystemModel;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Invalid(#[from] crate::Error),
}

/// Contents of a model file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub n: u32,
    pub r: u32,
    pub lifetime: DistributionSpec,
    pub power: DistributionSpec,
    pub copula: CopulaSpec,
    pub decay: DecaySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig>,
}

impl ModelFile {
    pub fn from_model(model: &SystemModel, quadrature: Option<QuadratureConfig>) -> Self {
        Self {
            n: model.n,
            r: model.r,
            lifetime: model.lifetime,
            power: model.power,
            copula: model.copula,
            decay: model.decay,
            quadrature,
        }
    }

    /// The validated model.
    pub fn model(&self) -> Result<SystemModel, ConfigError> {
        Ok(SystemModel::new(self.n, self.r, self.lifetime, self.power, self.copula, self.decay)?)
    }

    /// Quadrature settings from the file, or the defaults.
    pub fn quadrature(&self) -> Result<QuadratureConfig, ConfigError> {
        let q = self.quadrature.unwrap_or_default();
        q.validate()?;
        Ok(q)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn from_json_str(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("model files always serialize")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialize")
    }

    /// Reads and validates a model file.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let file = if is_json { Self::from_json_str(&text) } else { Self::from_toml_str(&text) }
            .map_err(|message| ConfigError::Parse { path: path.to_owned(), message })?;
        file.model()?;
        file.quadrature()?;
        Ok(file)
    }
}
