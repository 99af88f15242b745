//! Types shared by every searcher: the evaluation budget, run results and
//! the algorithm registry used by the harness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::annealing::{self, SaParams};
use crate::encoding::BitVector;
use crate::error::{Error, Result};
use crate::genetic::{self, GaParams};
use crate::local_search::{self, HillStrategy};
use crate::objectives::Objective;
use crate::rng::RngStream;

/// Default cap on objective evaluations per trial.
pub const DEFAULT_BUDGET: u64 = 200_000;

/// Counts objective evaluations against a fixed cap.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    rng: &'a mut RngStream,
    count: u64,
    budget: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Objective, rng: &'a mut RngStream, budget: u64) -> Self {
        Self {
            objective,
            rng,
            count: 0,
            budget,
        }
    }

    pub fn objective(&self) -> &'a dyn Objective {
        self.objective
    }

    pub fn rng(&mut self) -> &mut RngStream {
        self.rng
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn remaining(&self) -> u64 {
        self.budget.saturating_sub(self.count)
    }

    pub fn is_exhausted(&self) -> bool {
        self.count >= self.budget
    }

    /// Evaluates `x`, or returns `None` once the budget is spent.
    pub fn try_evaluate(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.is_exhausted() {
            return Ok(None);
        }
        self.evaluate(x).map(Some)
    }

    /// Evaluates `x` regardless of the budget; still counted.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        self.count += 1;
        self.objective.evaluate(x, self.rng)
    }
}

/// The representation a searcher works in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Genotype {
    Bits(BitVector),
    Integers(Vec<i64>),
}

impl Genotype {
    /// Hex string for bit genotypes, comma-separated values for integers.
    pub fn render(&self) -> String {
        match self {
            Genotype::Bits(b) => b.to_hex(),
            Genotype::Integers(v) => v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    /// No improving pass remained (local searchers).
    Converged,
    /// Annealing froze.
    Frozen,
    /// The evaluation budget ran out.
    Budget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub algorithm: Algorithm,
    pub best_genotype: Genotype,
    pub best_coefficients: Vec<f64>,
    pub initial_cost: f64,
    pub best_cost: f64,
    /// KLS passes, hill-climbing passes, annealing temperatures or GA generations.
    pub passes: usize,
    pub evaluations: u64,
    /// Seconds, monotonic clock.
    pub wall_time: f64,
    /// Committed depth `k` of every improving KLS pass; moves accepted per
    /// pass for hill climbing; empty otherwise.
    pub committed_depths: Vec<usize>,
    pub stop: StopReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Hill,
    Kls,
    Kls1,
    Kls2,
    Sa,
    Ga,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Hill,
        Algorithm::Kls,
        Algorithm::Kls1,
        Algorithm::Kls2,
        Algorithm::Sa,
        Algorithm::Ga,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Hill => "hill",
            Algorithm::Kls => "kls",
            Algorithm::Kls1 => "kls1",
            Algorithm::Kls2 => "kls2",
            Algorithm::Sa => "sa",
            Algorithm::Ga => "ga",
        }
    }

    /// Table label as conventionally printed.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Hill => "Hill",
            Algorithm::Kls => "KLS",
            Algorithm::Kls1 => "KLS1",
            Algorithm::Kls2 => "KLS2",
            Algorithm::Sa => "SA",
            Algorithm::Ga => "GA",
        }
    }

    /// Runs one trial of this algorithm.
    pub fn run(
        self,
        objective: &dyn Objective,
        rng: &mut RngStream,
        params: &SearchParams,
    ) -> Result<SearchResult> {
        let spec = params.local_spec(objective)?;
        match self {
            Algorithm::Hill => {
                local_search::hill_climb(objective, &spec, rng, params.budget, params.hill_strategy)
            }
            Algorithm::Kls => local_search::kls(objective, &spec, rng, params.budget),
            Algorithm::Kls1 => local_search::kls1(objective, &spec, rng, params.budget),
            Algorithm::Kls2 => local_search::kls2(objective, &spec, rng, params.budget),
            Algorithm::Sa => {
                let sa = SaParams {
                    budget: params.budget,
                    ..params.sa
                };
                annealing::simulated_annealing(objective, &spec, rng, &sa).map(|(r, _)| r)
            }
            Algorithm::Ga => genetic::genetic_algorithm(
                objective,
                &spec.with_coding(params.ga.coding),
                rng,
                &params.ga,
            ),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Every tunable knob, with defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    /// Evaluation cap for hill climbing, the KLS family and annealing. The
    /// GA is bounded by `ga.total_trials` instead.
    pub budget: u64,
    pub hill_strategy: HillStrategy,
    /// Coding used by hill climbing, KLS, KLS2 and annealing.
    pub coding: crate::encoding::Coding,
    pub sa: SaParams,
    pub ga: GaParams,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            hill_strategy: HillStrategy::Steepest,
            coding: crate::encoding::Coding::Binary,
            sa: SaParams::default(),
            ga: GaParams::default(),
        }
    }
}

impl SearchParams {
    fn local_spec(&self, objective: &dyn Objective) -> Result<crate::encoding::EncodingSpec> {
        crate::encoding::EncodingSpec::for_objective(objective, self.coding)
    }

    /// Applies a `key=value` override. Keys are the field names, with
    /// annealing and GA fields available bare or as `sa.`/`ga.` paths.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParam(format!("{key}: cannot parse `{value}`")))
        }
        let bare = key
            .trim()
            .trim_start_matches("sa.")
            .trim_start_matches("ga.");
        match bare {
            "budget" => self.budget = num(key, value)?,
            "hill_strategy" | "hill" => self.hill_strategy = value.parse()?,
            "coding" => self.coding = value.parse()?,
            "init_accept_prob" => self.sa.init_accept_prob = num(key, value)?,
            "temp_factor" => self.sa.temp_factor = num(key, value)?,
            "size_factor" => self.sa.size_factor = num(key, value)?,
            "min_percent" => self.sa.min_percent = num(key, value)?,
            "freeze_limit" => self.sa.freeze_limit = num(key, value)?,
            "temperature_samples" => self.sa.temperature_samples = num(key, value)?,
            "population_size" => self.ga.population_size = num(key, value)?,
            "total_trials" => self.ga.total_trials = num(key, value)?,
            "crossover_rate" => self.ga.crossover_rate = num(key, value)?,
            "mutation_rate" => self.ga.mutation_rate = num(key, value)?,
            "generation_gap" => self.ga.generation_gap = num(key, value)?,
            "sigma_scaling" | "sigma_scaling_factor" => {
                self.ga.sigma_scaling_factor = num(key, value)?
            }
            "elitism" | "elitism_count" => self.ga.elitism_count = num(key, value)?,
            "ga_coding" => self.ga.coding = value.parse()?,
            _ => return Err(Error::InvalidParam(format!("unknown parameter `{key}`"))),
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidParam("budget must be >= 1".into()));
        }
        self.sa.validate()?;
        self.ga.validate()
    }
}
