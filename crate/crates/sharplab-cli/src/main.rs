//! `sharplab` — command-line driver for the numerical laboratory.
//!
//! One subcommand per measurement scenario plus `verify`.  A scenario run
//! resolves its configuration in three layers (built-in defaults, then an
//! optional `--config` file, then explicit flags), validates it, runs the
//! sweep, prints a summary table to stdout, and writes `results.csv` and
//! `meta.json` to the output directory.  Diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 runtime failure (construction/IO, failed
//! verification), 2 invalid parameters or configuration.

mod config_file;
mod verify;

use clap::{Args, Parser, Subcommand};
use sharplab_core::error::{Error, Result};
use sharplab_core::experiments::{persist, run, ExperimentConfig, ExperimentResult, Scenario};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "sharplab",
    version,
    about = "Vector-valued inequality laboratory on the discrete torus",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weighted pointwise maximal function on sparse random families.
    Peetre(RunArgs),
    /// Same maximal function on deterministic nested-cube families.
    Deterministic(RunArgs),
    /// Windowed maximal operator on a streamed sparse-spike corpus.
    Window(RunArgs),
    /// Smoothness-modulus norm against the block-decomposition norm.
    Sobolev(RunArgs),
    /// Truncated radial-multiplier kernels against the family constant.
    #[command(name = "bochner-riesz")]
    BochnerRiesz(RunArgs),
    /// Oscillating-phase multiplier on spike-train families.
    Oscillatory(RunArgs),
    /// Run the numerical invariant battery and report per-group pass/fail.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Plain-text `key = value` config file (see --dry-run for the keys).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory for results.csv and meta.json
    /// (default: runs/<scenario>).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Corpus-size override for scenarios that maximize over families.
    #[arg(long)]
    trials: Option<u32>,
    /// Grid exponent override (2^exp samples per axis).
    #[arg(long = "grid-exp")]
    grid_exp: Option<u32>,
    /// Sweep range override, inclusive on both ends, e.g. 2..5.
    #[arg(long, value_name = "LO..HI")]
    sweep: Option<String>,
    /// Print the fully resolved configuration and exit without computing
    /// or touching any files.
    #[arg(long = "dry-run")]
    dry_run: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check only this group (see the table for group names).
    #[arg(long, value_name = "NAME")]
    group: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Peetre(a) => run_scenario(Scenario::Peetre, a),
        Cmd::Deterministic(a) => run_scenario(Scenario::Deterministic, a),
        Cmd::Window(a) => run_scenario(Scenario::Window, a),
        Cmd::Sobolev(a) => run_scenario(Scenario::Sobolev, a),
        Cmd::BochnerRiesz(a) => run_scenario(Scenario::BochnerRiesz, a),
        Cmd::Oscillatory(a) => run_scenario(Scenario::Oscillatory, a),
        Cmd::Verify(a) => match verify::run_battery(a.group.as_deref())? {
            None => Ok(()),
            Some(group) => Err(Error::construction(format!(
                "verification failed in group: {group}"
            ))),
        },
    }
}

fn run_scenario(scenario: Scenario, args: RunArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::defaults_for(scenario);
    if let Some(path) = &args.config {
        config_file::load_into(path, &mut cfg)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(grid_exp) = args.grid_exp {
        cfg.grid_exp = grid_exp;
    }
    if let Some(sweep) = &args.sweep {
        let (lo, hi) = config_file::parse_sweep(sweep)?;
        cfg.sweep_lo = lo;
        cfg.sweep_hi = hi;
    }

    if args.dry_run {
        print!("{}", config_file::render(&cfg));
        cfg.validate()?;
        eprintln!("configuration valid; dry run, nothing executed");
        return Ok(());
    }

    let result = run(&cfg)?;
    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from("runs").join(scenario.as_str()));
    let (csv, meta) = persist(&result, &out)?;
    print_table(&result);
    eprintln!(
        "completed in {:.1}s; wrote {} and {}",
        result.duration_s,
        csv.display(),
        meta.display()
    );
    Ok(())
}

fn print_table(result: &ExperimentResult) {
    println!(
        "{:<13} {:>13} {:>6} {:>13} {:>13} {:>13} {:>13}",
        "scenario", result.sweep_name, "seeds", "lhs_mean", "rhs_mean", "ratio_mean", "ratio_se"
    );
    let name = result.config.scenario.as_str();
    for r in &result.records {
        println!(
            "{:<13} {:>13} {:>6} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e}",
            name, r.sweep_value, r.seed_count, r.lhs_mean, r.rhs_mean, r.ratio_mean, r.ratio_stderr
        );
    }
    match &result.slope {
        Some(fit) => println!(
            "slope {:+.4} (r^2 {:.4}, {} points)",
            fit.slope,
            fit.r_squared,
            fit.points.len()
        ),
        None => println!("slope n/a (fewer than 3 sweep points)"),
    }
}
