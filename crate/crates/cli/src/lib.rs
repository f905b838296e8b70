//! Configuration-driven experiment runner. Every experiment writes
//! `<name>.csv` and `<name>.txt` under the output directory.

pub mod config;
pub mod experiments;
pub mod registry;
pub mod report;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

pub use config::{parse_config, parse_config_str, Config, ConfigError};
pub use registry::{find, Experiment, REGISTRY};
pub use report::{Check, Report, SCHEMA};

pub const OUT_ENV: &str = "KKINDEX_OUT";

/// The output directory: `KKINDEX_OUT` if set, else `--out`, else the config.
pub fn resolve_out(cli: Option<&Path>, cfg: &Config) -> PathBuf {
    match std::env::var_os(OUT_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => cli.map(Path::to_path_buf).unwrap_or_else(|| cfg.out.clone()),
    }
}

pub fn run_experiment(name: &str, cfg: &Config) -> Result<Report> {
    let Some(e) = find(name) else {
        bail!("unregistered experiment `{name}`; see `kkindex list`");
    };
    (e.run)(cfg).with_context(|| format!("experiment `{name}`"))
}

pub fn write_report(dir: &Path, report: &Report) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv = dir.join(format!("{}.csv", report.experiment));
    std::fs::write(&csv, report.to_csv()).with_context(|| format!("writing {}", csv.display()))?;
    let txt = dir.join(format!("{}.txt", report.experiment));
    std::fs::write(&txt, report.summary()).with_context(|| format!("writing {}", txt.display()))?;
    Ok(())
}

/// Names to run for `target`: one experiment, or the configured list for `all`.
pub fn selection(target: &str, cfg: &Config) -> Result<Vec<String>> {
    if target == "all" {
        Ok(cfg.experiments.clone())
    } else if find(target).is_some() {
        Ok(vec![target.to_string()])
    } else {
        bail!("unregistered experiment `{target}`; see `kkindex list`")
    }
}
