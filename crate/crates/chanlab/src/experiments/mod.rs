//! Config-driven experiment runners behind the `chanlab` CLI.
//!
//! Every experiment is a deterministic function of `(config, seed)`: samples
//! own the stream whose index is their ordinal (grid points and correlation
//! modes shift the upper stream bits), results are reduced in sample order,
//! and the BLAS pool is pinned to one thread, so the emitted files do not
//! depend on the worker count.

pub mod config;
pub mod emit;
pub mod stats;

mod histogram;
mod oracle_check;
mod ppt2;
mod ppt_scan;
mod spectral;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde_json::Value;
use thiserror::Error;

pub use config::{
    ConfigError, CorrelationMode, ExperimentConfig, GridPoint, HistogramConfig, LambdaIndex,
    OracleCheckConfig,
    OracleQuery, Ppt2Config, PptScanConfig, ScanFamily, SDim, SpectralConfig, SpectralScaling,
    SRule,
};

use crate::families::FamiliesError;
use crate::linalg;
use crate::quantum::QuantumError;
use crate::sampling::SamplingError;
use crate::twirl::TwirlError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Twirl(#[from] TwirlError),
    #[error(transparent)]
    Families(#[from] FamiliesError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error(transparent)]
    Emit(#[from] emit::EmitError),
}

/// What a runner hands back before anything is written to disk.
pub struct RunOutcome {
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub summary_body: Value,
    /// A statistical gate failed; the CLI exits with code 3.
    pub gate_failed: bool,
}

/// Files written plus the gate verdict.
pub struct RunReport {
    pub out_dir: PathBuf,
    pub samples_csv: PathBuf,
    pub summary_json: PathBuf,
    pub gate_failed: bool,
    pub elapsed_seconds: f64,
}

/// Runs an experiment and writes `samples.csv` / `summary.json` into
/// `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunReport, ExperimentError> {
    // One BLAS thread: sample-level parallelism happens in rayon, and the
    // output must not depend on the machine's core count.
    linalg::set_blas_threads(1);
    let start = Instant::now();
    let outcome = match cfg {
        ExperimentConfig::Histogram(c) => histogram::run(c)?,
        ExperimentConfig::OracleCheck(c) => oracle_check::run(c)?,
        ExperimentConfig::Spectral(c) => spectral::run(c)?,
        ExperimentConfig::PptScan(c) => ppt_scan::run(c)?,
        ExperimentConfig::Ppt2(c) => ppt2::run(c)?,
    };
    let elapsed = start.elapsed().as_secs_f64();
    let samples_csv = emit::write_samples_csv(out_dir, &outcome.csv_header, outcome.csv_rows)?;
    let summary_json = emit::write_summary(
        out_dir,
        serde_json::to_value(cfg).expect("configs serialize"),
        cfg.seed(),
        elapsed,
        outcome.summary_body,
    )?;
    Ok(RunReport {
        out_dir: out_dir.to_path_buf(),
        samples_csv,
        summary_json,
        gate_failed: outcome.gate_failed,
        elapsed_seconds: elapsed,
    })
}

/// Maps sample ordinals `0..n` in parallel, collecting in ordinal order so
/// parallel and serial runs agree.
pub(crate) fn par_samples<T: Send>(n: usize, f: impl Fn(u64) -> T + Send + Sync) -> Vec<T> {
    (0..n as u64).into_par_iter().map(f).collect()
}
