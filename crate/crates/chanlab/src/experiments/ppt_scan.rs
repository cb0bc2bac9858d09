//! PPT-fraction scans over `(d, s)` grids, one channel family at a time.
//!
//! For the group families the PPT decision is the closed-form inequality
//! test on `(λ₁, λ₂, λ₃)`; for the diagonal families it is the structured
//! entrywise/spectral test on `(A, B, C)`; the optional unstructured family
//! tests the dense partial transpose of the sampled Choi matrix itself.

use serde_json::json;

use super::config::{PptScanConfig, ScanFamily, SDim};
use super::emit::fmt_f64;
use super::stats::{self, fraction_se, normal_cdf, wilson_interval};
use super::{par_samples, ExperimentError, RunOutcome};
use crate::families::{ppt_eb_test, DocChannel, DocClass, TwirlFamily};
use crate::quantum::{self, PSD_TOL};
use crate::sampling::{sample_haar_isometry, stinespring_channel, stream_kraus_blocks, RngStream};
use crate::twirl::{AbcAccumulator, LambdaAccumulator};

#[derive(Debug, Clone, serde::Serialize)]
pub struct ScanPoint {
    pub d: usize,
    pub s: usize,
    pub n: usize,
    pub ppt_fraction: f64,
    pub fraction_se: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub mean_margin: f64,
    pub margin_se: f64,
    /// Limit-law reference `Φ(√s)` for the fixed-`s` conjugate-unitary,
    /// orthogonal, and hyperoctahedral families.
    pub reference: Option<f64>,
}

pub fn run(cfg: &PptScanConfig) -> Result<RunOutcome, ExperimentError> {
    let mut points = Vec::with_capacity(cfg.grid.len());
    for (g, point) in cfg.grid.iter().enumerate() {
        let d = point.d;
        let s = point.s.resolve(d);
        let outcomes: Vec<(bool, f64)> = par_samples(cfg.n_samples, |i| {
            let stream = RngStream::new(cfg.seed, ((g as u64) << 32) | i);
            sample_outcome(cfg.family, d, s, stream)
        })
        .into_iter()
        .collect::<Result<_, ExperimentError>>()?;

        let passes = outcomes.iter().filter(|(p, _)| *p).count();
        let fraction = passes as f64 / cfg.n_samples as f64;
        let margins: Vec<f64> = outcomes.iter().map(|(_, m)| *m).collect();
        let margin_stats = stats::summarize(&margins);
        let (lo, hi) = wilson_interval(passes, cfg.n_samples, 1.96);
        let reference = match (cfg.family, point.s) {
            (ScanFamily::Uubar | ScanFamily::Oo | ScanFamily::Hh, SDim::Fixed(sv)) => {
                Some(normal_cdf((sv as f64).sqrt()))
            }
            _ => None,
        };
        points.push(ScanPoint {
            d,
            s,
            n: cfg.n_samples,
            ppt_fraction: fraction,
            fraction_se: fraction_se(fraction, cfg.n_samples),
            wilson_low: lo,
            wilson_high: hi,
            mean_margin: margin_stats.mean,
            margin_se: margin_stats.moment_ses[0],
            reference,
        });
    }

    let csv_rows = points
        .iter()
        .map(|p| {
            vec![
                format!("{:?}", cfg.family).to_lowercase(),
                p.d.to_string(),
                p.s.to_string(),
                p.n.to_string(),
                fmt_f64(p.ppt_fraction),
                fmt_f64(p.wilson_low),
                fmt_f64(p.wilson_high),
                fmt_f64(p.mean_margin),
                fmt_f64(p.margin_se),
                p.reference.map(fmt_f64).unwrap_or_default(),
            ]
        })
        .collect();

    Ok(RunOutcome {
        csv_header: vec![
            "family", "d", "s", "n", "ppt_fraction", "wilson_low", "wilson_high", "mean_margin",
            "margin_se", "reference",
        ],
        csv_rows,
        summary_body: json!({
            "family": cfg.family,
            "points": points,
        }),
        gate_failed: false,
    })
}

/// Draws one channel and returns `(ppt, margin)` for the family.
fn sample_outcome(
    family: ScanFamily,
    d: usize,
    s: usize,
    stream: RngStream,
) -> Result<(bool, f64), ExperimentError> {
    let df = d as f64;
    match family {
        ScanFamily::Uu | ScanFamily::Uubar | ScanFamily::Oo | ScanFamily::Hh => {
            let mut acc = LambdaAccumulator::new(d);
            stream_kraus_blocks(d, s, stream, |_, b| acc.visit(b))?;
            let p = acc.finish()?;
            let (l1, l2, l3) = (p.lambda1, p.lambda2, p.lambda3);
            let (tw, margin) = match family {
                ScanFamily::Uu => (TwirlFamily::UU, l1.min(df - l1)),
                ScanFamily::Uubar => (TwirlFamily::UUbar, l2.min(df - l2)),
                ScanFamily::Oo => {
                    (TwirlFamily::OO, [l1, df - l1, l2, df - l2].into_iter().fold(f64::INFINITY, f64::min))
                }
                ScanFamily::Hh => {
                    let slacks = [
                        l3,
                        df - l3,
                        l1,
                        df * l3 - l1,
                        l2,
                        df * l3 - l2,
                        l1 - (2.0 * l3 - df),
                        df - l1,
                        l2 - (2.0 * l3 - df),
                        df - l2,
                    ];
                    (TwirlFamily::HH, slacks.into_iter().fold(f64::INFINITY, f64::min))
                }
                _ => unreachable!(),
            };
            Ok((ppt_eb_test(tw, d, l1, l2, l3, 1e-9), margin))
        }
        ScanFamily::Duc | ScanFamily::Cduc | ScanFamily::Doc => {
            let class = match family {
                ScanFamily::Duc => DocClass::Duc,
                ScanFamily::Cduc => DocClass::Cduc,
                _ => DocClass::Doc,
            };
            let mut acc = AbcAccumulator::new(d);
            stream_kraus_blocks(d, s, stream, |_, b| acc.visit(b))?;
            let channel = DocChannel::new(acc.finish()?, class);
            let report = channel.ppt_test(PSD_TOL);
            let margin = match (report.min_pair_margin, report.lambda_min_c) {
                (Some(pair), Some(spec)) => pair.min(spec),
                (Some(pair), None) => pair,
                (None, Some(spec)) => spec,
                (None, None) => 0.0,
            };
            Ok((report.pass, margin))
        }
        ScanFamily::Unstructured => {
            let iso = sample_haar_isometry(d, s, &mut stream.rng())?;
            let choi = stinespring_channel(&iso)?.choi();
            let margin = quantum::ppt_margin(&choi)?;
            Ok((quantum::is_ppt(&choi, PSD_TOL)?, margin))
        }
    }
}
