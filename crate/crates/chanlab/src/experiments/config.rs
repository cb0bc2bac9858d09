//! Experiment configuration: one self-describing TOML document per run.
//!
//! Every config carries the experiment kind, the dimension schedule, the
//! sample count, and the master seed; the seed is echoed verbatim into every
//! output file. The environment dimension may be given as a plain integer or
//! as a rule evaluated against `d`:
//!
//! ```toml
//! kind = "spectral"
//! d = 200
//! s = { rule = "c*d", c = 4.0 }   # or s = 5, or { rule = "d^t", t = 1.3 }
//! scaling = "s"
//! n_samples = 100
//! seed = 7
//! ```

use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use thiserror::Error;

use crate::weingarten::MomentTarget;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("config kind `{found}` does not match the `{expected}` subcommand")]
    KindMismatch { expected: String, found: String },
}

/// Environment dimension: fixed, proportional (`⌈c·d⌉`), or polynomial
/// (`⌈d^t⌉`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SDim {
    Fixed(u32),
    Rule(SRule),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum SRule {
    #[serde(rename = "c*d")]
    TimesD { c: f64 },
    #[serde(rename = "d^t")]
    PowD { t: f64 },
}

impl SDim {
    pub fn resolve(&self, d: usize) -> usize {
        match self {
            SDim::Fixed(s) => *s as usize,
            SDim::Rule(SRule::TimesD { c }) => (c * d as f64).ceil().max(1.0) as usize,
            SDim::Rule(SRule::PowD { t }) => (d as f64).powf(*t).ceil().max(1.0) as usize,
        }
    }
}

/// Which scalar a histogram collects.
pub use crate::weingarten::LambdaIndex;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramConfig {
    pub which: LambdaIndex,
    pub d: usize,
    pub s: SDim,
    pub n_samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleQuery {
    pub target: MomentTarget,
    pub d: u32,
    pub s: u32,
    pub p: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheckConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub queries: Vec<OracleQuery>,
    /// Gate on `max |z|`; exceeding it makes the run exit with code 3.
    #[serde(default = "default_z_gate")]
    pub z_gate: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_z_gate() -> f64 {
    4.0
}

/// Which rescaling of the `C` matrix the spectral experiment studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralScaling {
    /// `(ds)^{1/2} C` — semicircle of mean 0, variance 1 when `s ≪ d`.
    #[serde(rename = "sqrt-ds")]
    SqrtDs,
    /// `s C` — semicircle of mean and variance `c` when `s ≈ c·d`.
    #[serde(rename = "s")]
    S,
    /// `d C` — concentrates on 1 when `s ≫ d`.
    #[serde(rename = "d")]
    D,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralConfig {
    pub d: usize,
    pub s: SDim,
    pub scaling: SpectralScaling,
    pub n_samples: usize,
    pub seed: u64,
    /// Write the per-sample spectra (sample, index, eigenvalue) CSV; the
    /// summary always carries the pooled moments.
    #[serde(default = "default_true")]
    pub emit_spectra: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_true() -> bool {
    true
}

/// Channel family scanned for the PPT fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanFamily {
    Uu,
    Uubar,
    Oo,
    Hh,
    Duc,
    Cduc,
    Doc,
    /// The untwirled Stinespring channel itself (dense PPT test); kept as an
    /// optional demonstration, capped at small `d`.
    Unstructured,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPoint {
    pub d: usize,
    pub s: SDim,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PptScanConfig {
    pub family: ScanFamily,
    pub n_samples: usize,
    pub seed: u64,
    pub grid: Vec<GridPoint>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// Correlation between the two channels of a composition sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMode {
    Independent,
    Equal,
    Conjugate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ppt2Config {
    pub d: usize,
    pub s1: SDim,
    pub s2: SDim,
    pub n_pairs: usize,
    pub seed: u64,
    pub modes: Vec<CorrelationMode>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// A parsed experiment configuration of any kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Histogram(HistogramConfig),
    OracleCheck(OracleCheckConfig),
    Spectral(SpectralConfig),
    PptScan(PptScanConfig),
    Ppt2(Ppt2Config),
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ExperimentConfig::Histogram(_) => "histogram",
            ExperimentConfig::OracleCheck(_) => "oracle-check",
            ExperimentConfig::Spectral(_) => "spectral",
            ExperimentConfig::PptScan(_) => "ppt-scan",
            ExperimentConfig::Ppt2(_) => "ppt2",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            ExperimentConfig::Histogram(c) => c.seed,
            ExperimentConfig::OracleCheck(c) => c.seed,
            ExperimentConfig::Spectral(c) => c.seed,
            ExperimentConfig::PptScan(c) => c.seed,
            ExperimentConfig::Ppt2(c) => c.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            ExperimentConfig::Histogram(c) => c.seed = seed,
            ExperimentConfig::OracleCheck(c) => c.seed = seed,
            ExperimentConfig::Spectral(c) => c.seed = seed,
            ExperimentConfig::PptScan(c) => c.seed = seed,
            ExperimentConfig::Ppt2(c) => c.seed = seed,
        }
    }

    pub fn out(&self) -> Option<&PathBuf> {
        match self {
            ExperimentConfig::Histogram(c) => c.out.as_ref(),
            ExperimentConfig::OracleCheck(c) => c.out.as_ref(),
            ExperimentConfig::Spectral(c) => c.out.as_ref(),
            ExperimentConfig::PptScan(c) => c.out.as_ref(),
            ExperimentConfig::Ppt2(c) => c.out.as_ref(),
        }
    }

    pub fn set_out(&mut self, out: PathBuf) {
        match self {
            ExperimentConfig::Histogram(c) => c.out = Some(out),
            ExperimentConfig::OracleCheck(c) => c.out = Some(out),
            ExperimentConfig::Spectral(c) => c.out = Some(out),
            ExperimentConfig::PptScan(c) => c.out = Some(out),
            ExperimentConfig::Ppt2(c) => c.out = Some(out),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        match self {
            ExperimentConfig::Histogram(c) => {
                if c.d < 2 {
                    return bad(format!("histogram needs d ≥ 2, got {}", c.d));
                }
                if c.n_samples == 0 {
                    return bad("n_samples must be ≥ 1".into());
                }
                if c.s.resolve(c.d) == 0 {
                    return bad("environment dimension resolves to 0".into());
                }
            }
            ExperimentConfig::OracleCheck(c) => {
                if c.n_samples == 0 {
                    return bad("n_samples must be ≥ 1".into());
                }
                if c.queries.is_empty() {
                    return bad("oracle-check needs at least one [[queries]] entry".into());
                }
                for q in &c.queries {
                    if q.d < 2 {
                        return bad(format!("query {:?}: need d ≥ 2", q.target));
                    }
                    if q.s == 0 || q.p == 0 {
                        return bad(format!("query {:?}: s and p must be ≥ 1", q.target));
                    }
                }
                if c.z_gate <= 0.0 || c.z_gate.is_nan() {
                    return bad("z_gate must be positive".into());
                }
            }
            ExperimentConfig::Spectral(c) => {
                if c.d < 2 || c.n_samples == 0 || c.s.resolve(c.d) == 0 {
                    return bad("spectral needs d ≥ 2, n_samples ≥ 1, s ≥ 1".into());
                }
            }
            ExperimentConfig::PptScan(c) => {
                if c.grid.is_empty() {
                    return bad("ppt-scan needs at least one [[grid]] entry".into());
                }
                if c.n_samples == 0 {
                    return bad("n_samples must be ≥ 1".into());
                }
                for g in &c.grid {
                    if g.d < 2 || g.s.resolve(g.d) == 0 {
                        return bad(format!("grid point d={} invalid", g.d));
                    }
                    if c.family == ScanFamily::Unstructured && g.d > 40 {
                        return bad(format!(
                            "unstructured scans are capped at d ≤ 40 (dense d²×d² eigensolves), got d={}",
                            g.d
                        ));
                    }
                }
            }
            ExperimentConfig::Ppt2(c) => {
                if c.d < 2 || c.n_pairs == 0 {
                    return bad("ppt2 needs d ≥ 2 and n_pairs ≥ 1".into());
                }
                if c.modes.is_empty() {
                    return bad("ppt2 needs at least one correlation mode".into());
                }
                if c.s1.resolve(c.d) == 0 || c.s2.resolve(c.d) == 0 {
                    return bad("environment dimensions must resolve to ≥ 1".into());
                }
            }
        }
        Ok(())
    }
}
