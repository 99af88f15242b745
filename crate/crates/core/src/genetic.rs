//! A generational genetic algorithm configured after the GAucsd settings:
//! population 30, 60000 trials, crossover 0.85, mutation 0.005, generation
//! gap 1.0, sigma scaling 1 and Gray-coded genotypes.
//!
//! Selection is roulette-wheel on sigma-scaled expected values, crossover
//! is single-point, mutation flips bits independently, and the best
//! `elitism_count` individuals survive each generation unchanged.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::encoding::{BitVector, Coding, EncodingSpec};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::rng::RngStream;
use crate::search::{Algorithm, Evaluator, Genotype, SearchResult, StopReason};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub population_size: usize,
    /// Total objective evaluations.
    pub total_trials: u64,
    pub crossover_rate: f64,
    /// Per-bit flip probability.
    pub mutation_rate: f64,
    /// Fraction of the population replaced per generation.
    pub generation_gap: f64,
    pub coding: Coding,
    pub sigma_scaling_factor: f64,
    pub elitism_count: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 30,
            total_trials: 60_000,
            crossover_rate: 0.85,
            mutation_rate: 0.005,
            generation_gap: 1.0,
            coding: Coding::Gray,
            sigma_scaling_factor: 1.0,
            elitism_count: 1,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if self.population_size < 2 {
            return Err(Error::InvalidParam("population_size must be >= 2".into()));
        }
        if self.total_trials < self.population_size as u64 {
            return Err(Error::InvalidParam(
                "total_trials must cover the initial population".into(),
            ));
        }
        if !unit(self.crossover_rate) || !unit(self.mutation_rate) {
            return Err(Error::InvalidParam("rates must lie in [0, 1]".into()));
        }
        if !(self.generation_gap > 0.0 && self.generation_gap <= 1.0) {
            return Err(Error::InvalidParam(
                "generation_gap must be in (0, 1]".into(),
            ));
        }
        if self.sigma_scaling_factor.is_nan() || self.sigma_scaling_factor <= 0.0 {
            return Err(Error::InvalidParam(
                "sigma_scaling_factor must be > 0".into(),
            ));
        }
        if self.elitism_count > self.population_size {
            return Err(Error::InvalidParam(
                "elitism_count exceeds population".into(),
            ));
        }
        Ok(())
    }

    /// Old individuals kept per generation: the elite, or more when the
    /// generation gap is below 1.
    pub fn survivors(&self) -> usize {
        let replaced = (self.generation_gap * self.population_size as f64).round() as usize;
        self.elitism_count
            .max(self.population_size.saturating_sub(replaced))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genotype: BitVector,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub individuals: Vec<Individual>,
    pub generation: usize,
}

impl Population {
    pub fn best(&self) -> &Individual {
        self.individuals
            .iter()
            .min_by(|a, b| a.cost.total_cmp(&b.cost))
            .expect("empty population")
    }
}

/// Sigma-scaled expected values for minimization:
/// `max(0, 1 + (mean - cost) / (2 c sigma))`, or all ones when `sigma = 0`.
pub fn ga_fitness(costs: &[f64], sigma_scaling_factor: f64) -> Vec<f64> {
    let n = costs.len() as f64;
    let mean = costs.iter().sum::<f64>() / n;
    let sigma = (costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n).sqrt();
    if sigma == 0.0 || !sigma.is_finite() {
        return vec![1.0; costs.len()];
    }
    costs
        .iter()
        .map(|c| (1.0 + (mean - c) / (sigma_scaling_factor * 2.0 * sigma)).max(0.0))
        .collect()
}

/// Fitness-proportionate pick.
pub fn roulette(fitness: &[f64], total: f64, rng: &mut RngStream) -> usize {
    let mut target = rng.uniform_real() * total;
    for (i, f) in fitness.iter().enumerate() {
        if target < *f {
            return i;
        }
        target -= f;
    }
    // rounding fallthrough: last individual with positive fitness
    fitness
        .iter()
        .rposition(|&f| f > 0.0)
        .unwrap_or(fitness.len() - 1)
}

/// Children `a[..cut] + b[cut..]` and `b[..cut] + a[cut..]`.
pub fn single_point_crossover(a: &BitVector, b: &BitVector, cut: usize) -> (BitVector, BitVector) {
    let (a, b) = (a.as_slice(), b.as_slice());
    let child = |p: &[bool], q: &[bool]| {
        BitVector::from_bits(p[..cut].iter().chain(&q[cut..]).copied().collect())
    };
    (child(a, b), child(b, a))
}

/// Flips every bit with probability `rate`; returns the number flipped.
pub fn mutate(bits: &mut BitVector, rate: f64, rng: &mut RngStream) -> usize {
    if rate <= 0.0 {
        return 0;
    }
    let mut flips = 0;
    for j in 0..bits.len() {
        if rng.uniform_real() < rate {
            bits.flip(j);
            flips += 1;
        }
    }
    flips
}

fn evaluate(spec: &EncodingSpec, bits: &BitVector, eval: &mut Evaluator<'_>) -> Result<f64> {
    eval.evaluate(&spec.decode_solution(bits)?)
}

/// One generation: survivors carried over, the rest bred by roulette
/// selection, crossover and mutation, then evaluated.
pub fn ga_generation(
    pop: &Population,
    params: &GaParams,
    spec: &EncodingSpec,
    eval: &mut Evaluator<'_>,
) -> Result<Population> {
    let size = params.population_size;
    let mut ranked: Vec<&Individual> = pop.individuals.iter().collect();
    ranked.sort_by(|a, b| a.cost.total_cmp(&b.cost));
    let survivors = params.survivors();
    let mut next: Vec<Individual> = ranked[..survivors].iter().map(|&i| i.clone()).collect();

    let costs: Vec<f64> = pop.individuals.iter().map(|i| i.cost).collect();
    let fitness = ga_fitness(&costs, params.sigma_scaling_factor);
    let total: f64 = fitness.iter().sum();
    let nl = spec.total_bits();

    let mut offspring = Vec::with_capacity(size - survivors + 1);
    while offspring.len() < size - survivors {
        let rng = eval.rng();
        let a = &pop.individuals[roulette(&fitness, total, rng)].genotype;
        let b = &pop.individuals[roulette(&fitness, total, rng)].genotype;
        let (mut c, mut d) = if nl > 1 && rng.uniform_real() < params.crossover_rate {
            let cut = 1 + rng.uniform_index(nl - 1);
            single_point_crossover(a, b, cut)
        } else {
            (a.clone(), b.clone())
        };
        mutate(&mut c, params.mutation_rate, rng);
        mutate(&mut d, params.mutation_rate, rng);
        offspring.push(c);
        offspring.push(d);
    }
    offspring.truncate(size - survivors);
    for genotype in offspring {
        let cost = evaluate(spec, &genotype, eval)?;
        next.push(Individual { genotype, cost });
    }
    Ok(Population {
        individuals: next,
        generation: pop.generation + 1,
    })
}

/// Per-generation best costs of a GA run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GaTrace {
    pub best_costs: Vec<f64>,
    pub population_sizes: Vec<usize>,
}

/// Runs generations until the next one would exceed `total_trials`.
pub fn genetic_algorithm(
    objective: &dyn Objective,
    spec: &EncodingSpec,
    rng: &mut RngStream,
    params: &GaParams,
) -> Result<SearchResult> {
    genetic_algorithm_traced(objective, spec, rng, params).map(|(r, _)| r)
}

pub fn genetic_algorithm_traced(
    objective: &dyn Objective,
    spec: &EncodingSpec,
    rng: &mut RngStream,
    params: &GaParams,
) -> Result<(SearchResult, GaTrace)> {
    params.validate()?;
    if spec.coefficients() != objective.arity() {
        return Err(Error::ArityMismatch {
            expected: objective.arity(),
            got: spec.coefficients(),
        });
    }
    let started = Instant::now();
    let mut eval = Evaluator::new(objective, rng, params.total_trials);
    let mut individuals = Vec::with_capacity(params.population_size);
    for _ in 0..params.population_size {
        let genotype = spec.random(eval.rng());
        let cost = evaluate(spec, &genotype, &mut eval)?;
        individuals.push(Individual { genotype, cost });
    }
    let mut pop = Population {
        individuals,
        generation: 0,
    };
    let initial_cost = pop.best().cost;
    let mut best = pop.best().clone();
    let mut trace = GaTrace::default();
    trace.best_costs.push(best.cost);
    trace.population_sizes.push(pop.individuals.len());

    let per_generation = (params.population_size - params.survivors()) as u64;
    while per_generation > 0 && eval.remaining() >= per_generation {
        pop = ga_generation(&pop, params, spec, &mut eval)?;
        let gen_best = pop.best();
        if gen_best.cost < best.cost {
            best = gen_best.clone();
        }
        trace.best_costs.push(best.cost);
        trace.population_sizes.push(pop.individuals.len());
    }

    let result = SearchResult {
        algorithm: Algorithm::Ga,
        best_coefficients: spec.decode_solution(&best.genotype)?,
        best_genotype: Genotype::Bits(best.genotype),
        initial_cost,
        best_cost: best.cost,
        passes: pop.generation,
        evaluations: eval.count(),
        wall_time: started.elapsed().as_secs_f64(),
        committed_depths: Vec::new(),
        stop: StopReason::Budget,
    };
    Ok((result, trace))
}
