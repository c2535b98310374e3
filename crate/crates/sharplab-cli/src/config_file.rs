//! Plain-text `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Keys mirror the [`ExperimentConfig`] fields one-to-one, so the output of
//! `--dry-run` can be fed back through `--config` unchanged.  Unknown keys
//! are rejected outright — a typo must never become a silently ignored
//! parameter.  When the same key appears twice the later assignment wins.

use sharplab_core::error::{Error, Result};
use sharplab_core::experiments::ExperimentConfig;
use std::fmt::Write as _;
use std::path::Path;

/// All recognized keys, in the order `render` prints them.
const KEYS: [&str; 17] = [
    "scenario",
    "d",
    "grid_exp",
    "p",
    "q",
    "sigma",
    "gamma",
    "lambda",
    "modulus_order",
    "mollifier_m",
    "level_stride",
    "k_cap",
    "sweep_lo",
    "sweep_hi",
    "seed",
    "seed_count",
    "trials",
];

/// Read `path` and fold its assignments into `cfg`.
pub fn load_into(path: &Path, cfg: &mut ExperimentConfig) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::config(format!("cannot read config file {}: {e}", path.display()))
    })?;
    apply(&text, cfg).map_err(|e| Error::config(format!("{}: {e}", path.display())))
}

/// Fold the assignments in `text` into `cfg`.
pub fn apply(text: &str, cfg: &mut ExperimentConfig) -> Result<()> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config(format!(
                "line {}: expected `key = value`, got {raw:?}",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        set(cfg, key, value).map_err(|e| {
            Error::config(format!("line {}: {e}", lineno + 1))
        })?;
    }
    Ok(())
}

/// Assign one key.  The `scenario` key is accepted only when it agrees with
/// the scenario already in `cfg` (which always comes from the subcommand).
fn set(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<()> {
    fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        value.parse::<T>().map_err(|e| {
            Error::config(format!("invalid value {value:?} for key {key}: {e}"))
        })
    }
    match key {
        "scenario" => {
            let requested = sharplab_core::experiments::Scenario::parse(value)?;
            if requested != cfg.scenario {
                return Err(Error::config(format!(
                    "config file names scenario {value:?} but the {} subcommand \
                     was invoked; drop the key or run the matching subcommand",
                    cfg.scenario.as_str()
                )));
            }
        }
        "d" => cfg.d = num(key, value)?,
        "grid_exp" => cfg.grid_exp = num(key, value)?,
        "p" => cfg.p = num(key, value)?,
        "q" => cfg.q = num(key, value)?,
        "sigma" => cfg.sigma = num(key, value)?,
        "gamma" => cfg.gamma = num(key, value)?,
        "lambda" => cfg.lambda = num(key, value)?,
        "modulus_order" => cfg.modulus_order = num(key, value)?,
        "mollifier_m" => cfg.mollifier_m = num(key, value)?,
        "level_stride" => cfg.level_stride = num(key, value)?,
        "k_cap" => cfg.k_cap = num(key, value)?,
        "sweep_lo" => cfg.sweep_lo = num(key, value)?,
        "sweep_hi" => cfg.sweep_hi = num(key, value)?,
        "seed" => cfg.seed = num(key, value)?,
        "seed_count" => cfg.seed_count = num(key, value)?,
        "trials" => cfg.trials = num(key, value)?,
        other => {
            return Err(Error::config(format!(
                "unknown config key {other:?}; valid keys: {}",
                KEYS.join(", ")
            )));
        }
    }
    Ok(())
}

/// Render `cfg` in config-file syntax (what `--dry-run` prints).
pub fn render(cfg: &ExperimentConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario = {}", cfg.scenario.as_str());
    let _ = writeln!(out, "d = {}", cfg.d);
    let _ = writeln!(out, "grid_exp = {}", cfg.grid_exp);
    let _ = writeln!(out, "p = {}", cfg.p);
    let _ = writeln!(out, "q = {}", cfg.q);
    let _ = writeln!(out, "sigma = {}", cfg.sigma);
    let _ = writeln!(out, "gamma = {}", cfg.gamma);
    let _ = writeln!(out, "lambda = {}", cfg.lambda);
    let _ = writeln!(out, "modulus_order = {}", cfg.modulus_order);
    let _ = writeln!(out, "mollifier_m = {}", cfg.mollifier_m);
    let _ = writeln!(out, "level_stride = {}", cfg.level_stride);
    let _ = writeln!(out, "k_cap = {}", cfg.k_cap);
    let _ = writeln!(out, "sweep_lo = {}", cfg.sweep_lo);
    let _ = writeln!(out, "sweep_hi = {}", cfg.sweep_hi);
    let _ = writeln!(out, "seed = {}", cfg.seed);
    let _ = writeln!(out, "seed_count = {}", cfg.seed_count);
    let _ = writeln!(out, "trials = {}", cfg.trials);
    out
}

/// Parse the `--sweep a..b` flag (both endpoints inclusive).
pub fn parse_sweep(text: &str) -> Result<(u32, u32)> {
    let parse = |s: &str| -> Result<u32> {
        s.trim().parse::<u32>().map_err(|e| {
            Error::config(format!("invalid sweep endpoint {s:?}: {e}"))
        })
    };
    let Some((lo, hi)) = text.split_once("..") else {
        return Err(Error::config(format!(
            "invalid sweep {text:?}; expected the form `lo..hi` (inclusive)"
        )));
    };
    Ok((parse(lo)?, parse(hi.trim_start_matches('='))?))
}
