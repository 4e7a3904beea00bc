//! Run configuration: alphabet, base vocabulary, caps, and seed.

use std::path::Path;

use serde::{Deserialize, Serialize};

use sequitur::word::{Alphabet, DEFAULT_BLANK};

/// Limits the configuration must respect.
pub const MAX_DEPTH_CAP: u32 = 12;
pub const MAX_EXHAUSTIVE_CAP: usize = 16;
pub const MAX_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Invalid { field: String, message: String },
    Unreadable { path: String, message: String },
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Invalid { field, message } => {
                write!(f, "config field `{field}`: {message}")
            }
            ConfigError::Unreadable { path, message } => {
                write!(f, "cannot read config {path}: {message}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Ordered glyph list; must contain the blank glyph exactly once.
    pub alphabet: Vec<String>,
    /// Rendering of the blank glyph.
    pub blank: String,
    /// Qualifiable base vocabulary for pattern engines.
    pub base: Vec<String>,
    /// Intensity cap for generated languages.
    pub depth_cap: u32,
    /// Largest universe audited exhaustively.
    pub exhaustive_cap: usize,
    /// Sample count for sampled audits.
    pub samples: usize,
    /// Primitive-index and atom-count bound for truth tables.
    pub table_bound: u32,
    /// Seed for sampled audits.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut alphabet: Vec<String> = ('a'..='z').map(|c| c.to_string()).collect();
        alphabet.push(",".to_string());
        alphabet.push(DEFAULT_BLANK.to_string());
        RunConfig {
            alphabet,
            blank: DEFAULT_BLANK.to_string(),
            base: vec!["bold".to_string(), "kind".to_string()],
            depth_cap: 3,
            exhaustive_cap: 12,
            samples: 512,
            table_bound: 20,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |field: &str, message: String| ConfigError::Invalid {
            field: field.to_string(),
            message,
        };
        Alphabet::new(self.alphabet.clone(), self.blank.clone())
            .map_err(|e| invalid("alphabet", e.to_string()))?;
        if self.base.is_empty() {
            return Err(invalid("base", "base vocabulary must be nonempty".into()));
        }
        for term in &self.base {
            if term.is_empty() || term == "V" || term == "c" || term == "perfect" {
                return Err(invalid(
                    "base",
                    format!("term {term:?} is empty or reserved"),
                ));
            }
        }
        if self.depth_cap > MAX_DEPTH_CAP {
            return Err(invalid(
                "depth_cap",
                format!("{} exceeds the module limit {MAX_DEPTH_CAP}", self.depth_cap),
            ));
        }
        if self.exhaustive_cap > MAX_EXHAUSTIVE_CAP {
            return Err(invalid(
                "exhaustive_cap",
                format!(
                    "{} exceeds the module limit {MAX_EXHAUSTIVE_CAP}",
                    self.exhaustive_cap
                ),
            ));
        }
        if self.samples == 0 || self.samples > MAX_SAMPLES {
            return Err(invalid(
                "samples",
                format!("{} is outside 1..={MAX_SAMPLES}", self.samples),
            ));
        }
        if self.table_bound == 0 || self.table_bound > 24 {
            return Err(invalid(
                "table_bound",
                format!("{} is outside 1..=24", self.table_bound),
            ));
        }
        Ok(())
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.alphabet.clone(), self.blank.clone())
            .expect("validated configuration")
    }
}

/// Loads and validates a config file; missing fields take defaults.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let config: RunConfig =
        serde_json::from_str(&text).map_err(|e| ConfigError::Invalid {
            field: "(root)".to_string(),
            message: e.to_string(),
        })?;
    config.validate()?;
    Ok(config)
}
