//! Run configuration from a key-value file with command-line overrides.
//!
//! File syntax: one `key = value` per line, `#` starts a comment. Keys are
//! `algo`, `func`, `trials`, `seed`, `budget`, `format`, `out`, or any
//! algorithm parameter accepted by [`SearchParams::set`].

use std::path::{Path, PathBuf};

use super::report::Format;
use crate::error::{Error, Result};
use crate::objectives::Benchmark;
use crate::search::{Algorithm, SearchParams};

pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_SEED: u64 = 1995;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub algorithms: Vec<Algorithm>,
    pub functions: Vec<Benchmark>,
    pub trials: usize,
    pub master_seed: u64,
    pub params: SearchParams,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algorithms: Algorithm::ALL.to_vec(),
            functions: Benchmark::ALL.to_vec(),
            trials: DEFAULT_TRIALS,
            master_seed: DEFAULT_SEED,
            params: SearchParams::default(),
            format: Format::Csv,
            out: None,
        }
    }
}

/// Parses `all` or a comma-separated id list.
pub fn parse_list<T: std::str::FromStr<Err = Error> + Clone>(s: &str, all: &[T]) -> Result<Vec<T>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    let items: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::InvalidParam("empty id list".into()));
    }
    Ok(items)
}

/// Splits `key=value`.
pub fn split_pair(s: &str) -> Result<(&str, &str)> {
    s.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| Error::InvalidParam(format!("expected key=value, got `{s}`")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidParam(format!("{what}: cannot parse `{value}`"));
        match key {
            "algo" | "algorithm" => self.algorithms = parse_list(value, &Algorithm::ALL)?,
            "func" | "function" => self.functions = parse_list(value, &Benchmark::ALL)?,
            "trials" => {
                self.trials = value.parse().map_err(|_| bad("trials"))?;
                if self.trials == 0 {
                    return Err(Error::InvalidParam("trials must be >= 1".into()));
                }
            }
            "seed" => self.master_seed = value.parse().map_err(|_| bad("seed"))?,
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => self.params.set(other, value)?,
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = split_pair(line)
                .map_err(|e| Error::InvalidParam(format!("line {}: {e}", n + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::InvalidParam(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParam(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_overrides() {
        let mut c = RunConfig::default();
        c.apply_text("# demo\nalgo = kls,hill\nfunc=f2\ntrials = 5 # few\ntemp_factor=0.9\n")
            .unwrap();
        assert_eq!(c.algorithms, vec![Algorithm::Kls, Algorithm::Hill]);
        assert_eq!(c.functions, vec![Benchmark::F2]);
        assert_eq!(c.trials, 5);
        assert_eq!(c.params.sa.temp_factor, 0.9);
        c.set("trials", "7").unwrap();
        assert_eq!(c.trials, 7);
    }

    #[test]
    fn bad_lines_are_reported() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("trials\n").is_err());
        assert!(c.apply_text("func = f9\n").is_err());
        assert!(c.apply_text("trials = 0\n").is_err());
        assert!(c.apply_text("mystery = 1\n").is_err());
    }

    #[test]
    fn all_expands() {
        assert_eq!(parse_list("all", &Benchmark::ALL).unwrap().len(), 7);
        assert!(parse_list::<Benchmark>(" , ", &Benchmark::ALL).is_err());
    }
}
