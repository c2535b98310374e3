//! Writing run results to disk.
//!
//! A run lands in its output directory as exactly two files:
//!
//! * `results.csv` — one row per sweep point with the fixed column set
//!   [`CSV_HEADER`].  Floats are printed with Rust's shortest round-trip
//!   formatting, so the file is byte-identical across reruns of the same
//!   config (wall-clock data deliberately stays out of this file).
//! * `meta.json` — the full config echo plus run metadata: master seed,
//!   fitted slope (`null` when the sweep has fewer than three points), start
//!   time, duration, and crate version.

use super::ExperimentResult;
use crate::error::{Error, Result};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Column order of `results.csv`.
pub const CSV_HEADER: &str = "scenario,sweep_name,sweep_value,seed_count,lhs_mean,lhs_stderr,rhs_mean,rhs_stderr,ratio_mean,ratio_stderr";

/// Write `results.csv` and `meta.json` under `dir`, creating it if needed.
/// Returns the two paths written.
pub fn persist(result: &ExperimentResult, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).map_err(|e| io_at(dir, e))?;

    let csv_path = dir.join("results.csv");
    let mut csv = String::with_capacity(256 + result.records.len() * 128);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    let scenario = result.config.scenario.as_str();
    for r in &result.records {
        csv.push_str(&format!(
            "{scenario},{},{},{},{},{},{},{},{},{}\n",
            result.sweep_name,
            r.sweep_value,
            r.seed_count,
            r.lhs_mean,
            r.lhs_stderr,
            r.rhs_mean,
            r.rhs_stderr,
            r.ratio_mean,
            r.ratio_stderr,
        ));
    }
    write_atomic(&csv_path, csv.as_bytes())?;

    let meta = serde_json::json!({
        "scenario": scenario,
        "config": result.config,
        "seed": result.config.seed,
        "slope": result.slope.as_ref().map(|s| s.slope),
        "slope_r2": result.slope.as_ref().map(|s| s.r_squared),
        "started_at": result.started_at,
        "duration_s": result.duration_s,
        "version": result.version,
    });
    let meta_path = dir.join("meta.json");
    let mut body = serde_json::to_string_pretty(&meta)
        .map_err(|e| Error::config(format!("could not encode run metadata: {e}")))?;
    body.push('\n');
    write_atomic(&meta_path, body.as_bytes())?;

    Ok((csv_path, meta_path))
}

/// Write through a temporary file and rename, so a crashed run never leaves
/// a half-written artifact behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp).map_err(|e| io_at(&tmp, e))?;
        f.write_all(bytes).map_err(|e| io_at(&tmp, e))?;
        f.sync_all().map_err(|e| io_at(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| io_at(path, e))
}

/// Attach the offending path to an IO error.
fn io_at(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run, ExperimentConfig, Scenario, SweepRecord};

    fn tiny_deterministic() -> ExperimentConfig {
        ExperimentConfig {
            grid_exp: 10,
            sweep_lo: 2,
            sweep_hi: 4,
            ..ExperimentConfig::defaults_for(Scenario::Deterministic)
        }
    }

    #[test]
    fn rerunning_the_same_config_writes_identical_csv_bytes() {
        let cfg = tiny_deterministic();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let (csv_a, meta_a) = persist(&run(&cfg).unwrap(), dir_a.path()).unwrap();
        let (csv_b, _) = persist(&run(&cfg).unwrap(), dir_b.path()).unwrap();
        let a = fs::read(&csv_a).unwrap();
        let b = fs::read(&csv_b).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
        assert!(meta_a.exists());
        assert!(!csv_a.with_extension("tmp").exists());
    }

    #[test]
    fn csv_has_the_fixed_header_and_one_row_per_sweep_point() {
        let cfg = tiny_deterministic();
        let dir = tempfile::tempdir().unwrap();
        let (csv, _) = persist(&run(&cfg).unwrap(), dir.path()).unwrap();
        let text = fs::read_to_string(csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + 3);
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), 10, "{line}");
            assert!(line.starts_with("deterministic,sparsity_exp,"), "{line}");
        }
    }

    #[test]
    fn empty_sweep_produces_a_header_only_csv() {
        // Build the result directly: an empty record set is representable
        // even though the runners always produce at least one point.
        let cfg = tiny_deterministic();
        let result = crate::experiments::ExperimentResult {
            config: cfg,
            sweep_name: "sparsity_exp",
            records: Vec::new(),
            slope: None,
            started_at: 0.0,
            duration_s: 0.0,
            version: env!("CARGO_PKG_VERSION"),
        };
        let dir = tempfile::tempdir().unwrap();
        let (csv, _) = persist(&result, dir.path()).unwrap();
        let text = fs::read_to_string(csv).unwrap();
        assert_eq!(text, format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn meta_echoes_the_config_and_carries_the_expected_keys() {
        let cfg = tiny_deterministic();
        let dir = tempfile::tempdir().unwrap();
        let (_, meta) = persist(&run(&cfg).unwrap(), dir.path()).unwrap();
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(meta).unwrap()).unwrap();
        for key in [
            "scenario",
            "config",
            "seed",
            "slope",
            "slope_r2",
            "started_at",
            "duration_s",
            "version",
        ] {
            assert!(doc.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(doc["scenario"], "deterministic");
        assert_eq!(doc["config"]["grid_exp"], 10);
        assert_eq!(doc["config"]["scenario"], "deterministic");
        assert_eq!(doc["seed"], 1);
        // Three sweep points: the slope must be present and finite.
        assert!(doc["slope"].is_f64());
        assert!(doc["slope_r2"].is_f64());
        assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn sweep_records_serialize_floats_round_trip() {
        let rec = SweepRecord::from_samples(3.0, &[(1.5, 0.5), (2.5, 0.5)]);
        assert_eq!(rec.ratio_mean, (3.0 + 5.0) / 2.0);
        assert_eq!(rec.seed_count, 2);
        // The exact spread: ratios {3, 5}, sample variance 2, stderr 1.
        assert_eq!(rec.ratio_stderr, 1.0);
    }

    #[test]
    fn io_failures_name_the_offending_path() {
        let cfg = tiny_deterministic();
        let result = crate::experiments::ExperimentResult {
            config: cfg,
            sweep_name: "sparsity_exp",
            records: Vec::new(),
            slope: None,
            started_at: 0.0,
            duration_s: 0.0,
            version: "0",
        };
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("occupied");
        fs::write(&blocker, b"x").unwrap();
        let err = persist(&result, &blocker).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("occupied"), "{err}");
    }
}
