//! Repeated seeded trials and their summary statistics.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::rng::derive_stream;
use crate::search::{Algorithm, SearchParams, StopReason};

/// Avg/std/min/max of cost and avg/std of wall time over the successful trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub cost_avg: f64,
    pub cost_std: f64,
    pub cost_min: f64,
    pub cost_max: f64,
    pub time_avg: f64,
    pub time_std: f64,
    pub trials: usize,
    pub failures: usize,
}

/// Mean and sample (n - 1) standard deviation; std is 0 for one sample.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl TrialStats {
    pub fn from_samples(costs: &[f64], times: &[f64], failures: usize) -> Result<Self> {
        if costs.is_empty() || costs.len() != times.len() {
            return Err(Error::InvalidParam(
                "statistics need at least one successful trial".into(),
            ));
        }
        let (cost_avg, cost_std) = mean_std(costs);
        let (time_avg, time_std) = mean_std(times);
        Ok(Self {
            cost_avg,
            cost_std,
            cost_min: costs.iter().copied().fold(f64::INFINITY, f64::min),
            cost_max: costs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            time_avg,
            time_std,
            trials: costs.len(),
            failures,
        })
    }
}

/// One trial's outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// Reported cost: the best cost for deterministic objectives, one fresh
    /// evaluation of the final solution otherwise.
    pub cost: f64,
    /// Best cost as seen by the searcher.
    pub search_cost: f64,
    pub wall_time: f64,
    pub evaluations: u64,
    pub passes: usize,
    pub stop: StopReason,
    /// Hex (bit genotypes) or comma-separated integers (KLS1).
    pub genotype: String,
    pub coefficients: Vec<f64>,
    /// Committed depth `k` -> number of passes.
    pub k_histogram: BTreeMap<usize, usize>,
}

/// Statistics and records for one (algorithm, function) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub algorithm: Algorithm,
    pub function: String,
    pub stats: TrialStats,
    pub records: Vec<TrialRecord>,
    /// Error messages of failed trials.
    pub errors: Vec<String>,
}

/// Runs one trial with the stream of `(master_seed, trial)`.
pub fn run_trial(
    algorithm: Algorithm,
    objective: &dyn Objective,
    master_seed: u64,
    trial: u64,
    params: &SearchParams,
) -> Result<TrialRecord> {
    let mut rng = derive_stream(master_seed, trial);
    let result = algorithm.run(objective, &mut rng, params)?;
    let cost = if objective.is_deterministic() {
        result.best_cost
    } else {
        objective.evaluate(&result.best_coefficients, &mut rng)?
    };
    let mut k_histogram = BTreeMap::new();
    for &k in &result.committed_depths {
        *k_histogram.entry(k).or_insert(0) += 1;
    }
    Ok(TrialRecord {
        trial,
        cost,
        search_cost: result.best_cost,
        wall_time: result.wall_time,
        evaluations: result.evaluations,
        passes: result.passes,
        stop: result.stop,
        genotype: result.best_genotype.render(),
        coefficients: result.best_coefficients,
        k_histogram,
    })
}

/// Runs `trials` independent trials in parallel; records are in trial order.
pub fn run_trials(
    algorithm: Algorithm,
    objective: &dyn Objective,
    trials: usize,
    master_seed: u64,
    params: &SearchParams,
) -> Result<CellResult> {
    if trials == 0 {
        return Err(Error::InvalidParam("trials must be >= 1".into()));
    }
    params.validate()?;
    let outcomes: Vec<Result<TrialRecord>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(algorithm, objective, master_seed, t, params))
        .collect();
    let mut records = Vec::with_capacity(trials);
    let mut errors = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => errors.push(e.to_string()),
        }
    }
    if records.is_empty() {
        return Err(Error::InvalidParam(format!(
            "every trial of {algorithm} on {} failed: {}",
            objective.name(),
            errors.join("; ")
        )));
    }
    let costs: Vec<f64> = records.iter().map(|r| r.cost).collect();
    let times: Vec<f64> = records.iter().map(|r| r.wall_time).collect();
    let stats = TrialStats::from_samples(&costs, &times, errors.len())?;
    Ok(CellResult {
        algorithm,
        function: objective.name().to_string(),
        stats,
        records,
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::Benchmark;

    #[test]
    fn constant_sample() {
        let s = TrialStats::from_samples(&[0.0; 5], &[1.0; 5], 0).unwrap();
        assert_eq!(
            (s.cost_avg, s.cost_std, s.cost_min, s.cost_max),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn two_point_sample() {
        let s = TrialStats::from_samples(&[0.0, 2.0], &[0.0, 0.0], 0).unwrap();
        assert_eq!(s.cost_avg, 1.0);
        assert!((s.cost_std - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!((s.cost_min, s.cost_max), (0.0, 2.0));
    }

    #[test]
    fn empty_sample_rejected() {
        assert!(TrialStats::from_samples(&[], &[], 0).is_err());
    }

    #[test]
    fn trials_are_reproducible() {
        let p = SearchParams::default();
        let a = run_trials(Algorithm::Kls, &Benchmark::F2, 6, 9, &p).unwrap();
        let b = run_trials(Algorithm::Kls, &Benchmark::F2, 6, 9, &p).unwrap();
        let ca: Vec<f64> = a.records.iter().map(|r| r.cost).collect();
        let cb: Vec<f64> = b.records.iter().map(|r| r.cost).collect();
        assert_eq!(ca, cb);
        assert_eq!(
            a.records.iter().map(|r| r.trial).collect::<Vec<_>>(),
            (0..6).collect::<Vec<_>>()
        );
        let single = run_trial(Algorithm::Kls, &Benchmark::F2, 9, 4, &p).unwrap();
        assert_eq!(single.cost, ca[4]);
        assert!(a.stats.cost_min <= a.stats.cost_avg && a.stats.cost_avg <= a.stats.cost_max);
    }

    #[test]
    fn budget_limited_trials_are_kept() {
        let p = SearchParams {
            budget: 50,
            ..SearchParams::default()
        };
        let c = run_trials(Algorithm::Hill, &Benchmark::F4, 3, 1, &p).unwrap();
        assert_eq!(c.records.len(), 3);
        assert!(c.records.iter().all(|r| r.stop == StopReason::Budget));
    }
}
