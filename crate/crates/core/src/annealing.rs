//! Simulated annealing over single bit flips with a geometric cooling
//! schedule, in the style of Johnson, Aragon, McGeoch and Schevon.
//!
//! At each temperature `size_factor * nl` random flips are proposed. The
//! run freezes after `freeze_limit` consecutive temperatures whose
//! acceptance ratio is below `min_percent` and that found no new best.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::encoding::EncodingSpec;
use crate::error::{Error, Result};
use crate::local_search::{random_bit_state, BitState, Neighborhood};
use crate::objectives::Objective;
use crate::rng::RngStream;
use crate::search::{Algorithm, Evaluator, Genotype, SearchResult, StopReason, DEFAULT_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaParams {
    /// Target probability of accepting an average uphill move at `T0`.
    pub init_accept_prob: f64,
    /// Cooling ratio `T_{t+1} / T_t`.
    pub temp_factor: f64,
    /// Proposals per temperature, in units of the neighborhood size.
    pub size_factor: usize,
    pub min_percent: f64,
    pub freeze_limit: usize,
    pub budget: u64,
    /// Random (state, flip) pairs sampled to estimate `T0`.
    pub temperature_samples: usize,
    /// Fixed starting temperature; skips the estimate when set.
    pub initial_temperature: Option<f64>,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            init_accept_prob: 0.4,
            temp_factor: 0.95,
            size_factor: 16,
            min_percent: 0.02,
            freeze_limit: 5,
            budget: DEFAULT_BUDGET,
            temperature_samples: 100,
            initial_temperature: None,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.init_accept_prob) {
            return Err(Error::InvalidParam(
                "init_accept_prob must be in (0, 1)".into(),
            ));
        }
        if !open_unit(self.temp_factor) {
            return Err(Error::InvalidParam("temp_factor must be in (0, 1)".into()));
        }
        if !open_unit(self.min_percent) {
            return Err(Error::InvalidParam("min_percent must be in (0, 1)".into()));
        }
        if self.size_factor == 0 || self.freeze_limit == 0 || self.budget == 0 {
            return Err(Error::InvalidParam(
                "size_factor, freeze_limit and budget must be >= 1".into(),
            ));
        }
        if let Some(t) = self.initial_temperature {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidParam(
                    "initial_temperature must be > 0".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Metropolis test: downhill and neutral moves always pass, uphill moves
/// pass with probability `exp(gain / T)`.
pub fn sa_accept(gain: f64, temperature: f64, rng: &mut RngStream) -> bool {
    debug_assert!(temperature > 0.0);
    gain >= 0.0 || rng.uniform_real() < (gain / temperature).exp()
}

/// `T0` at which an uphill move of size `mean_uphill` is accepted with
/// probability `accept_prob`.
pub fn temperature_for(mean_uphill: f64, accept_prob: f64) -> f64 {
    mean_uphill / (1.0 / accept_prob).ln()
}

fn estimate_temperature(
    spec: &EncodingSpec,
    eval: &mut Evaluator<'_>,
    params: &SaParams,
) -> Result<f64> {
    let mut sum = 0.0;
    let mut uphill = 0usize;
    for _ in 0..params.temperature_samples {
        if eval.remaining() < 2 {
            break;
        }
        let mut state = random_bit_state(spec, eval.rng())?;
        let j = eval.rng().uniform_index(spec.total_bits());
        let before = eval.evaluate(state.coefficients())?;
        state.apply(crate::encoding::Move::BitFlip(j));
        let after = eval.evaluate(state.coefficients())?;
        if after > before {
            sum += after - before;
            uphill += 1;
        }
    }
    Ok(if uphill == 0 {
        1.0
    } else {
        temperature_for(sum / uphill as f64, params.init_accept_prob)
    })
}

/// Estimates the starting temperature from random uphill moves; falls back
/// to 1 when no uphill move is seen.
pub fn initial_temperature(
    objective: &dyn Objective,
    spec: &EncodingSpec,
    rng: &mut RngStream,
    params: &SaParams,
) -> Result<f64> {
    let mut eval = Evaluator::new(objective, rng, u64::MAX);
    estimate_temperature(spec, &mut eval, params)
}

/// Per-temperature record of an annealing run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SaTrace {
    pub temperatures: Vec<f64>,
    pub acceptance_ratios: Vec<f64>,
    /// Best cost at the end of each temperature.
    pub best_costs: Vec<f64>,
    pub uphill_accepted: u64,
    pub proposals: u64,
}

/// Anneals from a random start and returns the best solution seen.
pub fn simulated_annealing(
    objective: &dyn Objective,
    spec: &EncodingSpec,
    rng: &mut RngStream,
    params: &SaParams,
) -> Result<(SearchResult, SaTrace)> {
    params.validate()?;
    if spec.coefficients() != objective.arity() {
        return Err(Error::ArityMismatch {
            expected: objective.arity(),
            got: spec.coefficients(),
        });
    }
    let started = Instant::now();
    let mut eval = Evaluator::new(objective, rng, params.budget);
    let mut temperature = match params.initial_temperature {
        Some(t) => t,
        None => estimate_temperature(spec, &mut eval, params)?,
    };

    let mut state: BitState = random_bit_state(spec, eval.rng())?;
    let initial = eval.evaluate(state.coefficients())?;
    state.set_cost(initial);
    let mut best = (state.bits().clone(), state.coefficients().to_vec(), initial);

    let nl = spec.total_bits();
    let per_temperature = params.size_factor * nl;
    let mut trace = SaTrace::default();
    let mut frozen = 0;

    let stop = 'anneal: loop {
        let mut accepted = 0usize;
        let mut proposed = 0usize;
        let mut improved = false;
        for _ in 0..per_temperature {
            let j = eval.rng().uniform_index(nl);
            let mv = crate::encoding::Move::BitFlip(j);
            state.apply(mv);
            let Some(cost) = eval.try_evaluate(state.coefficients())? else {
                state.revert(mv);
                trace.proposals += proposed as u64;
                trace.temperatures.push(temperature);
                trace.acceptance_ratios.push(ratio(accepted, proposed));
                trace.best_costs.push(best.2);
                break 'anneal StopReason::Budget;
            };
            proposed += 1;
            let gain = state.cost() - cost;
            if sa_accept(gain, temperature, eval.rng()) {
                accepted += 1;
                if gain < 0.0 {
                    trace.uphill_accepted += 1;
                }
                state.set_cost(cost);
                if cost < best.2 {
                    best = (state.bits().clone(), state.coefficients().to_vec(), cost);
                    improved = true;
                }
            } else {
                state.revert(mv);
            }
        }
        trace.proposals += proposed as u64;
        let r = ratio(accepted, proposed);
        trace.temperatures.push(temperature);
        trace.acceptance_ratios.push(r);
        trace.best_costs.push(best.2);
        if r < params.min_percent && !improved {
            frozen += 1;
        } else {
            frozen = 0;
        }
        if frozen >= params.freeze_limit {
            break StopReason::Frozen;
        }
        temperature *= params.temp_factor;
    };

    let result = SearchResult {
        algorithm: Algorithm::Sa,
        best_genotype: Genotype::Bits(best.0),
        best_coefficients: best.1,
        initial_cost: initial,
        best_cost: best.2,
        passes: trace.temperatures.len(),
        evaluations: eval.count(),
        wall_time: started.elapsed().as_secs_f64(),
        committed_depths: Vec::new(),
        stop,
    };
    Ok((result, trace))
}

fn ratio(accepted: usize, proposed: usize) -> f64 {
    if proposed == 0 {
        0.0
    } else {
        accepted as f64 / proposed as f64
    }
}
