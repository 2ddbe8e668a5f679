//! Effective configuration, loadable from a TOML file:
//!
//! ```toml
//! [expansion]
//! pos_set = ["noun"]
//! hypernym_depth = 1
//!
//! [weighting]
//! alpha = 0.5
//! beta = 0.25
//! query_weighting = "idf"
//!
//! [criteria]
//! parasite_threshold = 0.7
//! parasite_min_text = 200
//!
//! [providers]
//! top_n = 20
//! timeout_ms = 10000
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::providers::ProviderConfig;
use crate::ranking::CriteriaConfig;
use crate::vsm::WeightingConfig;
use crate::wordnet::ExpansionConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SemrankConfig {
    pub expansion: ExpansionConfig,
    pub weighting: WeightingConfig,
    pub criteria: CriteriaConfig,
    pub providers: ProviderConfig,
}

impl SemrankConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let config: SemrankConfig = toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.weighting
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.providers.validate().map_err(ConfigError::Invalid)?;
        if self.expansion.pos_set.is_empty() {
            return Err(ConfigError::Invalid("expansion.pos_set is empty".into()));
        }
        if !(0.0..=1.0).contains(&self.criteria.parasite_threshold) {
            return Err(ConfigError::Invalid(
                "criteria.parasite_threshold must be within [0, 1]".into(),
            ));
        }
        Ok(())
    }
}
