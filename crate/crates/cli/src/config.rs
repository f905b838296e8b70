//! Line-based `key = value` configuration with `#` comments.

use std::path::{Path, PathBuf};

use kkindex_core::limitspace::SigmaSequence;
use thiserror::Error;

use crate::registry::REGISTRY;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {msg}")]
    BadValue { line: usize, key: String, msg: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    /// `N_max` for the Fock and Dirac experiments.
    pub modes: u32,
    /// `E_max` for the Fock and Dirac experiments.
    pub energy_cut: u32,
    /// Per-mode Hermite degree cap on the active prefix.
    pub hermite_cut: u32,
    pub active_modes: usize,
    /// `N_max`, `E_max` of the j-cycle.
    pub cycle_modes: u32,
    pub cycle_energy: u32,
    pub sigma: SigmaSequence,
    pub tolerance: f64,
    pub seed: u64,
    pub trials: usize,
    pub experiments: Vec<String>,
    pub out: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            modes: 4,
            energy_cut: 8,
            hermite_cut: 2,
            active_modes: 3,
            cycle_modes: 3,
            cycle_energy: 8,
            sigma: SigmaSequence::Pow2,
            tolerance: 1e-10,
            seed: 20240917,
            trials: 100,
            experiments: REGISTRY.iter().map(|e| e.name.to_string()).collect(),
            out: PathBuf::from("out"),
        }
    }
}

const KEYS: &[&str] = &[
    "modes",
    "energy_cut",
    "hermite_cut",
    "active_modes",
    "cycle_modes",
    "cycle_energy",
    "sigma",
    "tolerance",
    "seed",
    "trials",
    "experiments",
    "out",
];

fn positive<T: std::str::FromStr + PartialOrd + Default>(line: usize, key: &str, v: &str) -> Result<T, ConfigError> {
    let bad = |msg: &str| ConfigError::BadValue { line, key: key.into(), msg: msg.into() };
    let x: T = v.parse().map_err(|_| bad(&format!("expected a positive number, got `{v}`")))?;
    if x <= T::default() {
        return Err(bad(&format!("must be positive, got `{v}`")));
    }
    Ok(x)
}

pub fn parse_config_str(text: &str) -> Result<Config, ConfigError> {
    let mut cfg = Config::default();
    let mut seen: Vec<&str> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let (k, v) = (k.trim(), v.trim());
        let key = *KEYS
            .iter()
            .find(|&&x| x == k)
            .ok_or_else(|| ConfigError::UnknownKey { line, key: k.into() })?;
        if seen.contains(&key) {
            return Err(ConfigError::Duplicate { line, key: k.into() });
        }
        seen.push(key);
        let bad = |msg: String| ConfigError::BadValue { line, key: key.into(), msg };
        match key {
            "modes" => cfg.modes = positive(line, key, v)?,
            "energy_cut" => cfg.energy_cut = positive(line, key, v)?,
            "hermite_cut" => cfg.hermite_cut = positive(line, key, v)?,
            "active_modes" => cfg.active_modes = positive(line, key, v)?,
            "cycle_modes" => cfg.cycle_modes = positive(line, key, v)?,
            "cycle_energy" => cfg.cycle_energy = positive(line, key, v)?,
            "tolerance" => cfg.tolerance = positive(line, key, v)?,
            "seed" => cfg.seed = positive(line, key, v)?,
            "trials" => cfg.trials = positive(line, key, v)?,
            "sigma" => cfg.sigma = SigmaSequence::parse(v).map_err(|e| bad(e.to_string()))?,
            "out" => {
                if v.is_empty() {
                    return Err(bad("empty path".into()));
                }
                cfg.out = PathBuf::from(v);
            }
            "experiments" => {
                let names: Vec<String> = v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if names.is_empty() {
                    return Err(bad("empty list".into()));
                }
                let mut list = Vec::new();
                for n in names {
                    if n == "all" {
                        list.extend(REGISTRY.iter().map(|e| e.name.to_string()));
                    } else if REGISTRY.iter().any(|e| e.name == n) {
                        list.push(n);
                    } else {
                        return Err(bad(format!("unregistered experiment `{n}`")));
                    }
                }
                cfg.experiments = list;
            }
            _ => unreachable!(),
        }
    }
    if cfg.active_modes > cfg.cycle_modes as usize {
        return Err(ConfigError::BadValue {
            line: 0,
            key: "active_modes".into(),
            msg: format!("{} exceeds cycle_modes = {}", cfg.active_modes, cfg.cycle_modes),
        });
    }
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = parse_config_str("# nothing\n\n").unwrap();
        assert_eq!((c.modes, c.energy_cut), (4, 8));
        assert_eq!(c.sigma, SigmaSequence::Pow2);
        assert_eq!(c.experiments.len(), 12);
    }

    #[test]
    fn explicit_sigma() {
        let c = parse_config_str("sigma = list:0.5,0.25").unwrap();
        assert_eq!(c.sigma, SigmaSequence::Explicit(vec![0.5, 0.25]));
    }

    #[test]
    fn rejects() {
        let e = parse_config_str("modes = -1").unwrap_err();
        assert!(e.to_string().contains("`modes`"), "{e}");
        assert!(matches!(parse_config_str("colour = red"), Err(ConfigError::UnknownKey { line: 1, .. })));
        assert!(matches!(parse_config_str("modes 3"), Err(ConfigError::Syntax { line: 1 })));
        assert!(matches!(parse_config_str("seed = 1\nseed = 2"), Err(ConfigError::Duplicate { line: 2, .. })));
        assert!(parse_config_str("experiments = weitzenbock, nope").is_err());
        assert!(parse_config_str("energy_cut = 0").is_err());
    }
}
