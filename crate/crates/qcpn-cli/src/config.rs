//! `key = value` configuration files and the merged settings.

use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}: {msg}")]
    Syntax { path: String, line: usize, msg: String },
}

pub const KEYS: [&str; 5] = ["q", "M", "L", "tol", "threads"];

/// Parsed `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str, path: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| ConfigError::Syntax { path: path.to_string(), line: i + 1, msg };
        let (k, v) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(err(format!("unknown key '{k}', expected one of {}", KEYS.join(", "))));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: p.clone(), source })?;
    parse_config(&text, &p)
}

/// Numeric defaults after merging built-ins, the config file and flags
/// (flags win).
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub q0: f64,
    pub m_max: u32,
    pub l_max: f64,
    /// None means the per-command default.
    pub tol: Option<f64>,
    pub threads: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { q0: 0.5, m_max: 40, l_max: 12.0, tol: None, threads: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub q0: Option<f64>,
    pub m_max: Option<u32>,
    pub l_max: Option<f64>,
    pub tol: Option<f64>,
    pub threads: Option<usize>,
}

fn value<T: std::str::FromStr>(map: &BTreeMap<String, String>, k: &str) -> Result<Option<T>, String> {
    match map.get(k) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| format!("config value {k} = {v} is not valid")),
    }
}

impl Settings {
    pub fn merge(file: &BTreeMap<String, String>, flags: &Overrides) -> Result<Self, String> {
        let d = Settings::default();
        Ok(Settings {
            q0: flags.q0.or(value(file, "q")?).unwrap_or(d.q0),
            m_max: flags.m_max.or(value(file, "M")?).unwrap_or(d.m_max),
            l_max: flags.l_max.or(value(file, "L")?).unwrap_or(d.l_max),
            tol: flags.tol.or(value(file, "tol")?),
            threads: flags.threads.or(value(file, "threads")?),
        })
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = parse_config("# defaults\nq = 0.3\nM=20\n\nL = 10 # window\n", "t").unwrap();
        let s = Settings::merge(&file, &Overrides { q0: Some(0.8), ..Default::default() }).unwrap();
        assert_eq!(s, Settings { q0: 0.8, m_max: 20, l_max: 10.0, tol: None, threads: None });
    }

    #[test]
    fn bad_lines_are_reported() {
        let e = parse_config("q = 0.5\nfoo = 1\n", "c.conf").unwrap_err();
        assert_eq!(e.to_string(), "c.conf:2: unknown key 'foo', expected one of q, M, L, tol, threads");
        assert!(parse_config("q 0.5", "c").is_err());
        let file = parse_config("M = x", "c").unwrap();
        assert!(Settings::merge(&file, &Overrides::default()).is_err());
    }
}
