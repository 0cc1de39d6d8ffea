//! Result tables and the files a run writes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Format, Job, JobConfig};
use crate::error::{CliError, Result};

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Shortest round-trip decimal form, so equal values always print equally.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Column-ordered records; every header names its units or normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.headers.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| CliError::Io { path: RESULTS_FILE.into(), source: e.into_error() })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub job: Job,
    pub seed: u64,
    pub workers: usize,
    /// Every RNG seed the run consumed, in order of use.
    pub seeds: &'a [u64],
    pub required_memory_bytes: u64,
    pub outputs: Vec<&'static str>,
    /// Fully resolved configuration; feeding it back with `--config` reruns the job.
    pub config: &'a JobConfig,
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::Io { path: path.clone(), source: e })?;
    Ok(path)
}

fn pretty_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the declared formats plus the manifest; returns the paths written.
pub fn write_run(
    dir: &Path,
    table: &Table,
    summary: &serde_json::Value,
    manifest: &Manifest<'_>,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.into(), source: e })?;
    let formats = &manifest.config.output.formats;
    let mut written = Vec::new();
    if formats.contains(&Format::Csv) {
        written.push(write(dir, RESULTS_FILE, &table.to_csv()?)?);
    }
    if formats.contains(&Format::Json) {
        written.push(write(dir, SUMMARY_FILE, &pretty_json(summary)?)?);
    }
    written.push(write(dir, MANIFEST_FILE, &pretty_json(manifest)?)?);
    Ok(written)
}
