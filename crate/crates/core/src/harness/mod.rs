//! Batch benchmark driver: repeated trials per (algorithm, function),
//! statistics, rank aggregation, reports and surface grids.

pub mod config;
pub mod grid;
pub mod rank;
pub mod report;
pub mod stats;

pub use config::RunConfig;
pub use grid::surface_grid;
pub use rank::{rank_means, rank_table, RankTable};
pub use report::{Format, Report};
pub use stats::{run_trial, run_trials, CellResult, TrialRecord, TrialStats};

use crate::error::Result;
use crate::objectives::Objective;

/// Runs every configured (algorithm, function) cell in order.
pub fn bench(config: &RunConfig) -> Result<Report> {
    config.params.validate()?;
    let mut cells = Vec::new();
    for &func in &config.functions {
        for &algo in &config.algorithms {
            cells.push(run_trials(
                algo,
                &func,
                config.trials,
                config.master_seed,
                &config.params,
            )?);
        }
    }
    let objectives: Vec<&dyn Objective> = config
        .functions
        .iter()
        .map(|f| f as &dyn Objective)
        .collect();
    Ok(Report::new(
        config.master_seed,
        config.trials,
        config.params.clone(),
        cells,
        &objectives,
    ))
}
