//! Spectral regimes of the C matrix beyond the acceptance thresholds: the
//! sparse-environment semicircle and the dense-environment concentration.

use chanlab::experiments::{
    run_experiment, ExperimentConfig, SDim, SpectralConfig, SpectralScaling, SRule,
};

fn run(cfg: SpectralConfig) -> serde_json::Value {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&ExperimentConfig::Spectral(cfg), dir.path()).unwrap();
    serde_json::from_str(&std::fs::read_to_string(report.summary_json).unwrap()).unwrap()
}

/// `s ≪ d`: the spectrum of `(ds)^{1/2} C` follows the centered semicircle,
/// whose even moments are Catalan numbers.
#[test]
fn sqrt_ds_scaling_gives_centered_semicircle() {
    let summary = run(SpectralConfig {
        d: 200,
        s: SDim::Fixed(2),
        scaling: SpectralScaling::SqrtDs,
        n_samples: 40,
        seed: 21,
        emit_spectra: false,
        out: None,
    });
    let pooled = &summary["results"]["pooled"];
    let mean = pooled["mean"].as_f64().unwrap();
    let m2 = pooled["moments"][1].as_f64().unwrap();
    let m4 = pooled["moments"][3].as_f64().unwrap();
    assert!(mean.abs() < 0.05, "mean {mean}");
    assert!((m2 - 1.0).abs() < 0.1, "second moment {m2}");
    assert!((m4 - 2.0).abs() < 0.3, "fourth moment {m4} (Catalan limit 2)");
    let reference = summary["results"]["reference_moments"].as_array().unwrap();
    assert_eq!(reference[3].as_f64().unwrap(), 2.0);
}

/// `s ≳ d^{1.3}`: `dC` concentrates at the identity; every eigenvalue of a
/// `d = 300` draw stays within 0.3 of 1.
#[test]
fn d_scaling_concentrates_at_identity() {
    let summary = run(SpectralConfig {
        d: 300,
        s: SDim::Rule(SRule::PowD { t: 1.3 }),
        scaling: SpectralScaling::D,
        n_samples: 2,
        seed: 22,
        emit_spectra: false,
        out: None,
    });
    assert_eq!(summary["results"]["s"], 1666);
    let min = summary["results"]["min_eigenvalue"]["min"].as_f64().unwrap();
    let max = summary["results"]["max_eigenvalue"]["max"].as_f64().unwrap();
    assert!(
        (min - 1.0).abs() < 0.3 && (max - 1.0).abs() < 0.3,
        "spectrum of dC in [{min:.3}, {max:.3}] should be within 1 ± 0.3"
    );
}
