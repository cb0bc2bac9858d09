//! Composition sweeps: certificate rates for products of two random
//! diagonal-covariant channels.
//!
//! The two channels of a pair may be independent, equal, or complex
//! conjugates of one another — the certificate needs no independence. Each
//! pair reports whether the entrywise composition conditions hold and
//! whether the composed triple earns the factor-width-2 certificate.

use serde_json::json;

use super::config::{CorrelationMode, Ppt2Config};
use super::emit::fmt_f64;
use super::{par_samples, ExperimentError, RunOutcome};
use crate::families::{ppt2_conditions, DocChannel, DocClass, DocTriple, EbVerdict};
use crate::quantum::PSD_TOL;
use crate::sampling::{stream_kraus_blocks, RngStream};
use crate::twirl::AbcAccumulator;

#[derive(Debug, Clone, serde::Serialize)]
struct PairRecord {
    mode: CorrelationMode,
    pair: usize,
    conditions_pass: bool,
    verdict: EbVerdict,
    margin_blocks: f64,
    margin_products: f64,
    factor1_ppt: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
struct ModeSummary {
    mode: CorrelationMode,
    n_pairs: usize,
    conditions_rate: f64,
    certified_rate: f64,
    factor1_ppt_rate: f64,
    worst_margin_blocks: f64,
    worst_margin_products: f64,
}

pub fn run(cfg: &Ppt2Config) -> Result<RunOutcome, ExperimentError> {
    let d = cfg.d;
    let s1 = cfg.s1.resolve(d);
    let s2 = cfg.s2.resolve(d);

    let mut records: Vec<PairRecord> = Vec::new();
    let mut summaries: Vec<ModeSummary> = Vec::new();
    for (mode_idx, &mode) in cfg.modes.iter().enumerate() {
        let mode_records: Vec<PairRecord> = par_samples(cfg.n_pairs, |i| {
            let base = (mode_idx as u64) << 32;
            let t1 = sample_triple(d, s1, RngStream::new(cfg.seed, base | (2 * i)))?;
            let t2 = match mode {
                CorrelationMode::Independent => {
                    sample_triple(d, s2, RngStream::new(cfg.seed, base | (2 * i + 1)))?
                }
                CorrelationMode::Equal => t1.clone(),
                CorrelationMode::Conjugate => conjugate_triple(&t1)?,
            };
            let report = ppt2_conditions(&t1, &t2)?;
            let composed = t1.compose(&t2)?;
            let cert = DocChannel::new(composed, DocClass::Doc).eb_certificate();
            let factor1_ppt = DocChannel::new(t1, DocClass::Doc).ppt_test(PSD_TOL).pass;
            Ok(PairRecord {
                mode,
                pair: i as usize,
                conditions_pass: report.pass,
                verdict: cert.verdict,
                margin_blocks: report.min_margin_blocks,
                margin_products: report.min_margin_products,
                factor1_ppt,
            })
        })
        .into_iter()
        .collect::<Result<_, ExperimentError>>()?;

        let n = mode_records.len();
        let count = |f: &dyn Fn(&PairRecord) -> bool| {
            mode_records.iter().filter(|r| f(r)).count() as f64 / n as f64
        };
        summaries.push(ModeSummary {
            mode,
            n_pairs: n,
            conditions_rate: count(&|r| r.conditions_pass),
            certified_rate: count(&|r| r.verdict == EbVerdict::Certified),
            factor1_ppt_rate: count(&|r| r.factor1_ppt),
            worst_margin_blocks: mode_records.iter().map(|r| r.margin_blocks).fold(f64::INFINITY, f64::min),
            worst_margin_products: mode_records.iter().map(|r| r.margin_products).fold(f64::INFINITY, f64::min),
        });
        records.extend(mode_records);
    }

    let csv_rows = records
        .iter()
        .map(|r| {
            vec![
                format!("{:?}", r.mode).to_lowercase(),
                r.pair.to_string(),
                r.conditions_pass.to_string(),
                format!("{:?}", r.verdict).to_lowercase(),
                fmt_f64(r.margin_blocks),
                fmt_f64(r.margin_products),
                r.factor1_ppt.to_string(),
            ]
        })
        .collect();

    Ok(RunOutcome {
        csv_header: vec![
            "mode", "pair", "conditions_pass", "verdict", "margin_blocks", "margin_products",
            "factor1_ppt",
        ],
        csv_rows,
        summary_body: json!({
            "d": d,
            "s1": s1,
            "s2": s2,
            "modes": summaries,
        }),
        gate_failed: false,
    })
}

fn sample_triple(d: usize, s: usize, stream: RngStream) -> Result<DocTriple, ExperimentError> {
    let mut acc = AbcAccumulator::new(d);
    stream_kraus_blocks(d, s, stream, |_, b| acc.visit(b))?;
    Ok(acc.finish()?)
}

/// Triple of the complex-conjugate channel: `A` unchanged, `B` and `C`
/// conjugated entrywise.
fn conjugate_triple(t: &DocTriple) -> Result<DocTriple, ExperimentError> {
    let conj = |m: &crate::linalg::CMat| m.map(|z| z.conj());
    Ok(DocTriple::new(t.a().clone(), conj(t.b()), conj(t.c()))
        .expect("conjugation preserves the shared diagonal"))
}
