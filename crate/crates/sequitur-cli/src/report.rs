//! The JSON report envelope every subcommand emits.
//!
//! Reports are deterministic for a fixed (argv, config, seed): sets are
//! serialized as arrays sorted under canonical printing, and wall-clock
//! timing is only included on request.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub seed: u64,
    pub results: serde_json::Value,
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(
        argv: &[String],
        config: &RunConfig,
        results: serde_json::Value,
        timing_ms: Option<u128>,
    ) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: argv.to_vec(),
            inputs_digest: digest(argv, config),
            seed: config.seed,
            results,
            timing_ms,
        }
    }

    pub fn render(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("reports are plain data");
        text.push('\n');
        text
    }
}

fn digest(argv: &[String], config: &RunConfig) -> String {
    let canonical = serde_json::json!({
        "argv": argv,
        "config": config,
    });
    let bytes = serde_json::to_vec(&canonical).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    format!("sha256:{}", hex::encode(hasher.finalize()))
}
