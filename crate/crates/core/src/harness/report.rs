//! CSV, JSON and markdown renderings of benchmark results.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rank::{rank_table, RankTable};
use super::stats::{CellResult, TrialStats};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::search::SearchParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Md,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Md),
            other => Err(Error::InvalidParam(format!("unknown format `{other}`"))),
        }
    }
}

pub const CSV_HEADER: &str =
    "algo,func,cost_avg,cost_std,cost_min,cost_max,time_avg,time_std,trials";

/// A full benchmark run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub master_seed: u64,
    pub trials: usize,
    pub params: SearchParams,
    pub cells: Vec<CellResult>,
    pub ranks: RankTable,
}

/// Ranking score: average cost, or its distance from the expected minimum
/// for noisy objectives.
pub fn quality(stats: &TrialStats, objective: &dyn Objective) -> f64 {
    match (objective.is_deterministic(), objective.known_min()) {
        (false, Some(m)) => (stats.cost_avg - m).abs(),
        _ => stats.cost_avg,
    }
}

impl Report {
    /// Assembles cells into a report and ranks algorithms per function.
    pub fn new(
        master_seed: u64,
        trials: usize,
        params: SearchParams,
        cells: Vec<CellResult>,
        objectives: &[&dyn Objective],
    ) -> Self {
        let mut algorithms: Vec<_> = cells.iter().map(|c| c.algorithm).collect();
        algorithms.sort();
        algorithms.dedup();
        let functions: Vec<String> = objectives.iter().map(|o| o.name().to_string()).collect();
        let scores: Vec<Vec<Option<f64>>> = algorithms
            .iter()
            .map(|a| {
                objectives
                    .iter()
                    .map(|o| {
                        cells
                            .iter()
                            .find(|c| c.algorithm == *a && c.function == o.name())
                            .map(|c| quality(&c.stats, *o))
                    })
                    .collect()
            })
            .collect();
        let labels: Vec<String> = algorithms.iter().map(|a| a.label().to_string()).collect();
        let ranks = rank_table(&labels, &functions, &scores);
        Self {
            master_seed,
            trials,
            params,
            cells,
            ranks,
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json()?,
            Format::Md => self.to_markdown(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            let s = &c.stats;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                c.algorithm,
                c.function,
                s.cost_avg,
                s.cost_std,
                s.cost_min,
                s.cost_max,
                s.time_avg,
                s.time_std,
                s.trials
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// One cost/time table per function, algorithms best first, then the
    /// rank table. Numbers carry two decimals.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        for func in &self.ranks.functions {
            let mut cells: Vec<&CellResult> =
                self.cells.iter().filter(|c| &c.function == func).collect();
            if cells.is_empty() {
                continue;
            }
            let col = self.ranks.functions.iter().position(|f| f == func).unwrap();
            let rank_of = |c: &CellResult| {
                self.ranks
                    .rows
                    .iter()
                    .find(|r| r.algorithm == c.algorithm.label())
                    .map(|r| r.ranks[col])
                    .unwrap_or(usize::MAX)
            };
            cells.sort_by(|a, b| {
                rank_of(a)
                    .cmp(&rank_of(b))
                    .then(a.stats.cost_avg.total_cmp(&b.stats.cost_avg))
            });
            let _ = writeln!(out, "### Results on {}\n", func.to_uppercase());
            out.push_str("| Algorithm | Cost Avr | Cost Std | Cost Min | Cost Max | Time Avr (s) | Time Std (s) |\n");
            out.push_str("|---|---:|---:|---:|---:|---:|---:|\n");
            for c in cells {
                let s = &c.stats;
                let _ = writeln!(
                    out,
                    "| {} | {:.2} | {:.2} | {:.2} | {:.2} | {:.2} | {:.2} |",
                    c.algorithm.label(),
                    s.cost_avg,
                    s.cost_std,
                    s.cost_min,
                    s.cost_max,
                    s.time_avg,
                    s.time_std
                );
            }
            out.push('\n');
        }
        out.push_str("### Solution quality ranks\n\n| Algorithm |");
        for f in &self.ranks.functions {
            let _ = write!(out, " {} |", f.to_uppercase());
        }
        out.push_str(" Arithmetic | Geometric |\n|---|");
        for _ in &self.ranks.functions {
            out.push_str("---:|");
        }
        out.push_str("---:|---:|\n");
        for row in &self.ranks.rows {
            let _ = write!(out, "| {} |", row.algorithm);
            for r in &row.ranks {
                let _ = write!(out, " {r} |");
            }
            let _ = writeln!(out, " {:.2} | {:.2} |", row.arithmetic, row.geometric);
        }
        out
    }
}
