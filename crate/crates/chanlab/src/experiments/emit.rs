//! Output files: `samples.csv` and `summary.json`.
//!
//! Reruns with the same config and seed produce byte-identical files: rows
//! are written in sample-index order, floats in shortest round-trip form,
//! JSON keys sorted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> EmitError + '_ {
    move |source| EmitError::Io { path: path.to_path_buf(), source }
}

/// Writes `samples.csv` with the given header and pre-formatted rows.
pub fn write_samples_csv(
    dir: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<PathBuf, EmitError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join("samples.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| EmitError::Io {
        path: path.clone(),
        source: std::io::Error::other(e),
    })?;
    w.write_record(header).map_err(|e| EmitError::Io {
        path: path.clone(),
        source: std::io::Error::other(e),
    })?;
    for row in rows {
        w.write_record(&row).map_err(|e| EmitError::Io {
            path: path.clone(),
            source: std::io::Error::other(e),
        })?;
    }
    w.flush().map_err(io_err(&path))?;
    Ok(path)
}

/// Writes `summary.json`. The caller passes the experiment-specific body;
/// the envelope (schema version, seed, config echo, elapsed seconds) is
/// added here.
pub fn write_summary(
    dir: &Path,
    config_echo: Value,
    seed: u64,
    elapsed_seconds: f64,
    body: Value,
) -> Result<PathBuf, EmitError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join("summary.json");
    let doc = serde_json::json!({
        "schema": SCHEMA_VERSION,
        "seed": seed,
        "config": config_echo,
        "elapsed_seconds": elapsed_seconds,
        "results": body,
    });
    let mut file = fs::File::create(&path).map_err(io_err(&path))?;
    serde_json::to_writer_pretty(&mut file, &doc).map_err(|e| EmitError::Io {
        path: path.clone(),
        source: std::io::Error::other(e),
    })?;
    file.write_all(b"\n").map_err(io_err(&path))?;
    Ok(path)
}

/// Shortest-round-trip decimal form (stable across runs).
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_summary_round() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![
            vec!["0".to_string(), fmt_f64(1.5)],
            vec!["1".to_string(), fmt_f64(0.1 + 0.2)],
        ];
        let csv_path = write_samples_csv(dir.path(), &["sample", "value"], rows.clone()).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        assert!(text.starts_with("sample,value\n"));
        assert!(text.contains("0.30000000000000004"));

        // byte-identical rerun
        write_samples_csv(dir.path(), &["sample", "value"], rows).unwrap();
        assert_eq!(std::fs::read_to_string(&csv_path).unwrap(), text);

        let path = write_summary(
            dir.path(),
            serde_json::json!({"kind": "test"}),
            99,
            0.5,
            serde_json::json!({"n": 2}),
        )
        .unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(parsed["schema"], 1);
        assert_eq!(parsed["seed"], 99);
        assert_eq!(parsed["results"]["n"], 2);
    }

    #[test]
    fn header_only_for_empty_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_samples_csv(dir.path(), &["a", "b"], Vec::new()).unwrap();
        assert_eq!(std::fs::read_to_string(path).unwrap(), "a,b\n");
    }
}
