//! Plain `key = value` configuration files.
//!
//! Precedence is strict: command-line flags override config values, which
//! override built-in defaults. Unknown keys are rejected so a typo cannot
//! silently fall back to a default.

use crate::error::{CliError, Result};
use std::collections::HashMap;
use std::path::Path;

const KNOWN_KEYS: &[&str] = &[
    "t",
    "x",
    "hbar",
    "mass",
    "rel_tol",
    "abs_tol",
    "u_cut",
    "max_steps",
    "quad_rel_tol",
    "quad_abs_tol",
    "fd_step",
    "t_list",
    "x_list",
    "out_dir",
];

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|msg| CliError::Validation(format!("{}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key `{key}`", lineno + 1));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Flag value if given, else config value, else default.
    pub fn resolve_f64(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(s) => s.parse::<f64>().map_err(|_| {
                CliError::Validation(format!("config key `{key}`: `{s}` is not a number"))
            }),
            None => Ok(default),
        }
    }

    pub fn resolve_opt_f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            Some(s) => s.parse::<f64>().map(Some).map_err(|_| {
                CliError::Validation(format!("config key `{key}`: `{s}` is not a number"))
            }),
            None => Ok(None),
        }
    }

    pub fn resolve_usize(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(s) => s.parse::<usize>().map_err(|_| {
                CliError::Validation(format!("config key `{key}`: `{s}` is not an integer"))
            }),
            None => Ok(default),
        }
    }

    pub fn resolve_string(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.get(key).map(str::to_string))
    }
}

/// Parse a comma-separated list of positive numbers.
pub fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    let vals: std::result::Result<Vec<f64>, _> =
        s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match vals {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Validation(format!(
            "{what}: expected a comma-separated list of numbers, got `{s}`"
        ))),
    }
}

/// Parse `lo:hi:n` into `n` logarithmically spaced values.
pub fn parse_logspace(s: &str, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || {
        CliError::Validation(format!(
            "{what}: expected `lo:hi:n` with positive lo, hi and n >= 2, got `{s}`"
        ))
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(bad());
    }
    Ok((0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect())
}

/// Parse a `lo:hi` window.
pub fn parse_window(s: &str, what: &str) -> Result<(f64, f64)> {
    let bad = || CliError::Validation(format!("{what}: expected `lo:hi`, got `{s}`"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi > lo) {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves_with_precedence() {
        let cfg = Config::parse("# comment\nt = 2.5\nrel_tol = 1e-8\n").unwrap();
        // Flag wins over config.
        assert_eq!(cfg.resolve_f64(Some(1.0), "t", 9.0).unwrap(), 1.0);
        // Config wins over default.
        assert_eq!(cfg.resolve_f64(None, "t", 9.0).unwrap(), 2.5);
        // Default when neither is present.
        assert_eq!(cfg.resolve_f64(None, "x", 9.0).unwrap(), 9.0);
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = Config::parse("tt = 1\n").unwrap_err();
        assert!(err.contains("unknown key"), "{err}");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(Config::parse("just words\n").is_err());
    }

    #[test]
    fn list_and_window_parsing() {
        assert_eq!(parse_list("1, 2,3", "t").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_list("1,,2", "t").is_err());
        assert_eq!(parse_window("10:100", "w").unwrap(), (10.0, 100.0));
        assert!(parse_window("100:10", "w").is_err());
        let ls = parse_logspace("1:100:3", "t").unwrap();
        assert!((ls[1] - 10.0).abs() < 1e-12);
    }
}
