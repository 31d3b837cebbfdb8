use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Writes one CSV row per item, with a header named after the fields.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Campaign-level JSON summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub command: String,
    /// Effective configuration, keyed `section.key`.
    pub config: BTreeMap<String, String>,
    pub code_version: String,
    pub seed: u64,
    pub threads: Option<usize>,
    pub wall_time_s: f64,
    pub results: serde_json::Value,
}

impl CampaignSummary {
    pub fn new(command: &str, config: BTreeMap<String, String>, seed: u64, threads: Option<usize>) -> Self {
        Self {
            command: command.to_string(),
            config,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            threads,
            wall_time_s: 0.0,
            results: serde_json::Value::Null,
        }
    }
}
