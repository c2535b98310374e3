//! End-to-end tests of the `sharplab` binary: flag/file resolution, dry
//! runs, output files, exit codes, and the verify battery.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sharplab(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sharplab"));
    cmd.args(args);
    // Keep runs hermetic regardless of the invoking shell's environment.
    cmd.env_remove("SHARPLAB_FAULT");
    cmd.env_remove("SHARPLAB_THREADS");
    cmd
}

fn run_ok(args: &[&str]) -> Output {
    let out = sharplab(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn dry_run_prints_the_resolved_config_and_touches_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("would-be-output");
    let out = run_ok(&[
        "peetre",
        "--dry-run",
        "--seed",
        "77",
        "--grid-exp",
        "9",
        "--sweep",
        "2..4",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("scenario = peetre"), "{text}");
    assert!(text.contains("seed = 77"), "{text}");
    assert!(text.contains("grid_exp = 9"), "{text}");
    assert!(text.contains("sweep_lo = 2") && text.contains("sweep_hi = 4"), "{text}");
    assert!(!out_dir.exists(), "dry run must not create the output dir");
}

#[test]
fn dry_run_output_round_trips_as_a_config_file() {
    let first = run_ok(&["sobolev", "--dry-run", "--seed", "5"]);
    let rendered = stdout_of(&first);
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("sobolev.conf");
    fs::write(&cfg_path, &rendered).unwrap();
    let second = run_ok(&["sobolev", "--dry-run", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(rendered, stdout_of(&second));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("base.conf");
    fs::write(&cfg_path, "seed = 5\ngrid_exp = 8\n").unwrap();
    let out = run_ok(&[
        "peetre",
        "--dry-run",
        "--config",
        cfg_path.to_str().unwrap(),
        "--seed",
        "9",
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("seed = 9"), "flag must win: {text}");
    assert!(text.contains("grid_exp = 8"), "file value must survive: {text}");
}

#[test]
fn invalid_parameters_exit_2_naming_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.conf");
    fs::write(&cfg_path, "p = 1\nq = 2\n").unwrap();
    let out = sharplab(&["peetre", "--dry-run", "--config", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("q <= p"), "{}", stderr_of(&out));
}

#[test]
fn unknown_config_keys_exit_2_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("typo.conf");
    fs::write(&cfg_path, "grid_exponent = 9\n").unwrap();
    let out = sharplab(&["window", "--dry-run", "--config", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("grid_exponent") && err.contains("valid keys"), "{err}");
}

#[test]
fn oversized_sweeps_exit_2_naming_the_required_resolution() {
    let out = sharplab(&["oscillatory", "--dry-run", "--sweep", "2..5", "--grid-exp", "20"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("grid exponent >= 34"), "{err}");
}

fn read_csv(dir: &Path) -> String {
    fs::read_to_string(dir.join("results.csv")).expect("results.csv written")
}

#[test]
fn a_run_writes_table_csv_and_meta_and_reruns_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let args = |out: &Path| {
        vec![
            "deterministic".to_string(),
            "--grid-exp".into(),
            "10".into(),
            "--sweep".into(),
            "2..4".into(),
            "--seed".into(),
            "3".into(),
            "--out".into(),
            out.to_str().unwrap().to_string(),
        ]
    };
    let first = run_ok(&args(&out_a).iter().map(String::as_str).collect::<Vec<_>>());
    let table = stdout_of(&first);
    assert!(table.contains("sparsity_exp"), "{table}");
    assert!(table.contains("slope"), "{table}");
    assert!(table.lines().count() >= 5, "header + 3 rows + slope: {table}");
    // Diagnostics stay on stderr, the table stays on stdout.
    assert!(stderr_of(&first).contains("wrote"));
    assert!(!table.contains("wrote"));

    let csv = read_csv(&out_a);
    assert!(csv.starts_with(
        "scenario,sweep_name,sweep_value,seed_count,lhs_mean,lhs_stderr,rhs_mean,rhs_stderr,ratio_mean,ratio_stderr\n"
    ));
    assert_eq!(csv.lines().count(), 4, "{csv}");

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["scenario"], "deterministic");
    assert_eq!(meta["seed"], 3);
    assert_eq!(meta["config"]["seed"], 3);
    assert_eq!(meta["config"]["grid_exp"], 10);
    assert!(meta["slope"].is_f64());

    run_ok(&args(&out_b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(read_csv(&out_a), read_csv(&out_b), "reruns must be byte-identical");
}

#[test]
fn verify_reports_every_group_and_exits_zero() {
    let out = run_ok(&["verify"]);
    let text = stdout_of(&out);
    for group in [
        "grid",
        "moments",
        "mollifier",
        "families",
        "maximal",
        "multiplier",
        "differences",
        "norms",
        "determinism",
    ] {
        assert!(
            text.lines().any(|l| l.starts_with(group) && l.ends_with("pass")),
            "missing pass line for {group}: {text}"
        );
    }
}

#[test]
fn verify_group_filter_runs_only_that_group() {
    let out = run_ok(&["verify", "--group", "norms"]);
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 1, "{text}");
    assert!(text.starts_with("norms"), "{text}");
}

#[test]
fn verify_rejects_unknown_groups_with_exit_2() {
    let out = sharplab(&["verify", "--group", "cubes"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("valid groups"), "{}", stderr_of(&out));
}

#[test]
fn an_injected_kernel_fault_fails_exactly_the_mollifier_group() {
    let out = sharplab(&["verify"])
        .env("SHARPLAB_FAULT", "mollifier-profile")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(
        text.lines().any(|l| l.starts_with("mollifier") && l.ends_with("FAIL")),
        "{text}"
    );
    let err = stderr_of(&out);
    assert!(err.contains("verification failed in group: mollifier"), "{err}");
    // Groups that never build the smoothing kernel still pass.
    assert!(
        text.lines().any(|l| l.starts_with("grid") && l.ends_with("pass")),
        "{text}"
    );
}
