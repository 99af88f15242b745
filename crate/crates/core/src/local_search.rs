//! Hill climbing and variable depth (Kernighan-Lin) search.
//!
//! Both work in passes over a neighborhood of lockable move slots. Within a
//! pass every slot is used at most once. Hill climbing applies the best
//! unlocked move while it improves. A KLS pass instead applies the best
//! unlocked move even when it is uphill, until every slot is locked, then
//! keeps only the prefix of moves with the largest cumulative gain.
//!
//! Three neighborhoods are provided:
//! - [`BitState`]: single bit flips over the full genotype (hill, KLS);
//! - [`BitState::replicated`]: bit flips over the first coefficient only,
//!   copied to every coefficient (KLS2);
//! - [`IntState`]: +1/-1 steps of integer-valued coefficients (KLS1).

use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::encoding::{BitVector, EncodingSpec, Move, Step};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::rng::RngStream;
use crate::search::{Algorithm, Evaluator, Genotype, SearchResult, StopReason};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HillStrategy {
    /// Take the best unlocked improving move.
    #[default]
    Steepest,
    /// Take the lowest-index unlocked improving move.
    FirstDescent,
}

impl FromStr for HillStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "steepest" => Ok(HillStrategy::Steepest),
            "first" | "first_descent" => Ok(HillStrategy::FirstDescent),
            other => Err(Error::InvalidParam(format!(
                "unknown hill strategy `{other}`"
            ))),
        }
    }
}

/// Outcome of probing one slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Probe {
    /// The slot has no feasible move.
    Infeasible,
    /// The budget ran out before the probe completed.
    Exhausted,
    Gain {
        mv: Move,
        gain: f64,
        cost: f64,
    },
}

/// A state with a fixed set of lockable move slots.
pub trait Neighborhood {
    /// Number of slots.
    fn size(&self) -> usize;

    fn cost(&self) -> f64;

    fn set_cost(&mut self, cost: f64);

    /// Evaluates the best move in `slot` without changing the state.
    fn probe(&mut self, slot: usize, eval: &mut Evaluator<'_>) -> Result<Probe>;

    /// Applies `mv` (the cost is set separately).
    fn apply(&mut self, mv: Move);

    /// Undoes `mv`.
    fn revert(&mut self, mv: Move);

    fn coefficients(&self) -> &[f64];

    fn genotype(&self) -> Genotype;
}

/// Bit-string state with cached decoded coefficients.
#[derive(Clone, Debug)]
pub struct BitState {
    spec: EncodingSpec,
    bits: BitVector,
    coeffs: Vec<f64>,
    /// Objective arity when every coefficient copies group 0.
    replicate: Option<usize>,
    cost: f64,
}

impl BitState {
    /// State over the genotype `bits` of `spec`. The cost is not evaluated.
    pub fn new(spec: EncodingSpec, bits: BitVector) -> Result<Self> {
        let coeffs = spec.decode_solution(&bits)?;
        Ok(Self {
            spec,
            bits,
            coeffs,
            replicate: None,
            cost: f64::NAN,
        })
    }

    /// A single `l`-bit group whose coefficient is copied `arity` times.
    pub fn replicated(group: EncodingSpec, bits: BitVector, arity: usize) -> Result<Self> {
        if group.coefficients() != 1 {
            return Err(Error::InvalidEncoding(
                "replicated state needs a single-coefficient encoding".into(),
            ));
        }
        let x = group.decode_solution(&bits)?[0];
        Ok(Self {
            spec: group,
            bits,
            coeffs: vec![x; arity],
            replicate: Some(arity),
            cost: f64::NAN,
        })
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn spec(&self) -> &EncodingSpec {
        &self.spec
    }

    fn flip(&mut self, j: usize) {
        self.bits.flip(j);
        let g = j / self.spec.bits_per_coefficient();
        let x = self.spec.decode_group(&self.bits, g);
        match self.replicate {
            Some(_) => self.coeffs.fill(x),
            None => self.coeffs[g] = x,
        }
    }
}

impl Neighborhood for BitState {
    fn size(&self) -> usize {
        self.bits.len()
    }

    fn cost(&self) -> f64 {
        self.cost
    }

    fn set_cost(&mut self, cost: f64) {
        self.cost = cost;
    }

    fn probe(&mut self, slot: usize, eval: &mut Evaluator<'_>) -> Result<Probe> {
        self.flip(slot);
        let after = eval.try_evaluate(&self.coeffs);
        self.flip(slot);
        Ok(match after? {
            Some(cost) => Probe::Gain {
                mv: Move::BitFlip(slot),
                gain: self.cost - cost,
                cost,
            },
            None => Probe::Exhausted,
        })
    }

    fn apply(&mut self, mv: Move) {
        if let Move::BitFlip(j) = mv {
            self.flip(j);
        }
    }

    fn revert(&mut self, mv: Move) {
        self.apply(mv);
    }

    fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    fn genotype(&self) -> Genotype {
        Genotype::Bits(self.bits.clone())
    }
}

/// Integer-valued coefficients in `[ceil(L), floor(U)]`, moved by +/-1.
#[derive(Clone, Debug)]
pub struct IntState {
    values: Vec<i64>,
    lo: i64,
    hi: i64,
    coeffs: Vec<f64>,
    cost: f64,
}

impl IntState {
    pub fn new(values: Vec<i64>, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidEncoding(format!(
                "empty integer range [{lo}, {hi}]"
            )));
        }
        if let Some(v) = values.iter().find(|v| !(lo..=hi).contains(*v)) {
            return Err(Error::InvalidEncoding(format!("{v} outside [{lo}, {hi}]")));
        }
        let coeffs = values.iter().map(|&v| v as f64).collect();
        Ok(Self {
            values,
            lo,
            hi,
            coeffs,
            cost: f64::NAN,
        })
    }

    /// Integer range `[ceil(L), floor(U)]` of an encoding's bounds.
    pub fn range_of(spec: &EncodingSpec) -> Result<(i64, i64)> {
        let lo = spec.lower().ceil() as i64;
        let hi = spec.upper().floor() as i64;
        if lo > hi {
            return Err(Error::InvalidEncoding(format!(
                "no integer inside [{}, {}]",
                spec.lower(),
                spec.upper()
            )));
        }
        Ok((lo, hi))
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    fn feasible(&self, i: usize, step: Step) -> bool {
        let v = self.values[i] + step.delta();
        (self.lo..=self.hi).contains(&v)
    }

    fn shift(&mut self, i: usize, delta: i64) {
        self.values[i] += delta;
        self.coeffs[i] = self.values[i] as f64;
    }
}

impl Neighborhood for IntState {
    fn size(&self) -> usize {
        self.values.len()
    }

    fn cost(&self) -> f64 {
        self.cost
    }

    fn set_cost(&mut self, cost: f64) {
        self.cost = cost;
    }

    /// Tries both directions and keeps the higher gain; `Down` wins ties.
    fn probe(&mut self, slot: usize, eval: &mut Evaluator<'_>) -> Result<Probe> {
        let mut best: Option<(Move, f64, f64)> = None;
        for step in [Step::Down, Step::Up] {
            if !self.feasible(slot, step) {
                continue;
            }
            self.shift(slot, step.delta());
            let after = eval.try_evaluate(&self.coeffs);
            self.shift(slot, -step.delta());
            let Some(cost) = after? else {
                return Ok(Probe::Exhausted);
            };
            let gain = self.cost - cost;
            if best.is_none_or(|(_, g, _)| gain > g) {
                let mv = Move::IntStep {
                    coefficient: slot,
                    step,
                };
                best = Some((mv, gain, cost));
            }
        }
        Ok(match best {
            Some((mv, gain, cost)) => Probe::Gain { mv, gain, cost },
            None => Probe::Infeasible,
        })
    }

    fn apply(&mut self, mv: Move) {
        if let Move::IntStep { coefficient, step } = mv {
            self.shift(coefficient, step.delta());
        }
    }

    fn revert(&mut self, mv: Move) {
        if let Move::IntStep { coefficient, step } = mv {
            self.shift(coefficient, -step.delta());
        }
    }

    fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    fn genotype(&self) -> Genotype {
        Genotype::Integers(self.values.clone())
    }
}

/// Result of scanning unlocked slots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selection {
    Found {
        mv: Move,
        gain: f64,
        cost: f64,
    },
    /// Every slot is locked or infeasible.
    NoneLeft,
    Exhausted,
}

/// Steepest descent over the unlocked slots: the move with maximum gain,
/// lowest slot index on ties. Gains may be negative.
pub fn best_unlocked_move<N: Neighborhood + ?Sized>(
    state: &mut N,
    locks: &[bool],
    eval: &mut Evaluator<'_>,
) -> Result<Selection> {
    let mut best = Selection::NoneLeft;
    for slot in (0..state.size()).filter(|&s| !locks[s]) {
        match state.probe(slot, eval)? {
            Probe::Infeasible => {}
            Probe::Exhausted => return Ok(Selection::Exhausted),
            Probe::Gain { mv, gain, cost } => {
                let better = match best {
                    Selection::Found { gain: g, .. } => gain > g,
                    _ => true,
                };
                if better {
                    best = Selection::Found { mv, gain, cost };
                }
            }
        }
    }
    Ok(best)
}

/// First descent: the lowest-index unlocked move with positive gain.
pub fn first_improving_move<N: Neighborhood + ?Sized>(
    state: &mut N,
    locks: &[bool],
    eval: &mut Evaluator<'_>,
) -> Result<Selection> {
    for slot in (0..state.size()).filter(|&s| !locks[s]) {
        match state.probe(slot, eval)? {
            Probe::Exhausted => return Ok(Selection::Exhausted),
            Probe::Gain { mv, gain, cost } if gain > 0.0 => {
                return Ok(Selection::Found { mv, gain, cost })
            }
            _ => {}
        }
    }
    Ok(Selection::NoneLeft)
}

/// Smallest `k` maximizing the prefix sum `g_1 + ... + g_k`, with the empty
/// prefix (`k = 0`, sum 0) included.
///
/// Passes use [`max_prefix_by_cost`], which gives the same `k` without
/// accumulating rounding error.
pub fn max_prefix(gains: &[f64]) -> (usize, f64) {
    let mut best = (0, 0.0);
    let mut sum = 0.0;
    for (i, g) in gains.iter().enumerate() {
        sum += g;
        if sum > best.1 {
            best = (i + 1, sum);
        }
    }
    best
}

/// [`max_prefix`] over the telescoped gains `G_k = start - costs[k-1]`,
/// computed from the costs directly so that `G_k` is the exact drop.
pub fn max_prefix_by_cost(start: f64, costs: &[f64]) -> (usize, f64) {
    let mut best = (0, 0.0);
    for (i, &c) in costs.iter().enumerate() {
        let g = start - c;
        if g > best.1 {
            best = (i + 1, g);
        }
    }
    best
}

/// The move sequence of one KLS pass and its committed prefix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PassTrace {
    pub moves: Vec<Move>,
    pub gains: Vec<f64>,
    pub prefix_best_k: usize,
    pub prefix_best_sum: f64,
    pub start_cost: f64,
    pub end_cost: f64,
    /// The budget ran out during the pass.
    pub exhausted: bool,
}

/// One KLS pass from `state`, whose cost must be current.
///
/// Moves are applied tentatively and locked until no slot remains; the
/// state is then rolled back so that exactly the first `k` moves stay
/// applied, `k` being the smallest length with the maximum prefix gain.
pub fn kls_pass<N: Neighborhood + ?Sized>(
    state: &mut N,
    eval: &mut Evaluator<'_>,
) -> Result<PassTrace> {
    let start_cost = state.cost();
    let mut locks = vec![false; state.size()];
    let mut moves = Vec::new();
    let mut gains = Vec::new();
    let mut costs = Vec::new();
    let mut exhausted = false;
    loop {
        match best_unlocked_move(state, &locks, eval)? {
            Selection::Found { mv, gain, cost } => {
                state.apply(mv);
                state.set_cost(cost);
                locks[mv.slot()] = true;
                moves.push(mv);
                gains.push(gain);
                costs.push(cost);
            }
            Selection::NoneLeft => break,
            Selection::Exhausted => {
                exhausted = true;
                break;
            }
        }
    }
    let (k, sum) = max_prefix_by_cost(start_cost, &costs);
    for &mv in moves[k..].iter().rev() {
        state.revert(mv);
    }
    let end_cost = if k == 0 { start_cost } else { costs[k - 1] };
    state.set_cost(end_cost);
    Ok(PassTrace {
        moves,
        gains,
        prefix_best_k: k,
        prefix_best_sum: sum,
        start_cost,
        end_cost,
        exhausted,
    })
}

struct Outcome {
    passes: usize,
    depths: Vec<usize>,
    stop: StopReason,
}

/// Runs KLS passes until a pass yields no positive gain or the budget ends.
fn kls_loop<N: Neighborhood + ?Sized>(
    state: &mut N,
    eval: &mut Evaluator<'_>,
    mut on_pass: impl FnMut(&PassTrace),
) -> Result<Outcome> {
    let mut passes = 0;
    let mut depths = Vec::new();
    let stop = loop {
        if eval.is_exhausted() {
            break StopReason::Budget;
        }
        let trace = kls_pass(state, eval)?;
        passes += 1;
        on_pass(&trace);
        if trace.prefix_best_k > 0 {
            depths.push(trace.prefix_best_k);
        }
        if trace.exhausted {
            break StopReason::Budget;
        }
        if trace.prefix_best_sum <= 0.0 {
            break StopReason::Converged;
        }
    };
    Ok(Outcome {
        passes,
        depths,
        stop,
    })
}

fn hill_loop<N: Neighborhood + ?Sized>(
    state: &mut N,
    eval: &mut Evaluator<'_>,
    strategy: HillStrategy,
) -> Result<Outcome> {
    let mut passes = 0;
    let mut depths = Vec::new();
    let stop = 'outer: loop {
        if eval.is_exhausted() {
            break StopReason::Budget;
        }
        let mut locks = vec![false; state.size()];
        let mut applied = 0;
        passes += 1;
        loop {
            let sel = match strategy {
                HillStrategy::Steepest => best_unlocked_move(state, &locks, eval)?,
                HillStrategy::FirstDescent => first_improving_move(state, &locks, eval)?,
            };
            match sel {
                Selection::Found { mv, gain, cost } if gain > 0.0 => {
                    state.apply(mv);
                    state.set_cost(cost);
                    locks[mv.slot()] = true;
                    applied += 1;
                }
                Selection::Exhausted => {
                    depths.push(applied);
                    break 'outer StopReason::Budget;
                }
                _ => break,
            }
        }
        depths.push(applied);
        if applied == 0 {
            break StopReason::Converged;
        }
    };
    Ok(Outcome {
        passes,
        depths,
        stop,
    })
}

fn finish<N: Neighborhood>(
    algorithm: Algorithm,
    state: &N,
    initial_cost: f64,
    outcome: Outcome,
    evaluations: u64,
    started: Instant,
) -> SearchResult {
    SearchResult {
        algorithm,
        best_genotype: state.genotype(),
        best_coefficients: state.coefficients().to_vec(),
        initial_cost,
        best_cost: state.cost(),
        passes: outcome.passes,
        evaluations,
        wall_time: started.elapsed().as_secs_f64(),
        committed_depths: outcome.depths,
        stop: outcome.stop,
    }
}

fn evaluate_initial<N: Neighborhood>(state: &mut N, eval: &mut Evaluator<'_>) -> Result<f64> {
    let cost = eval.evaluate(state.coefficients())?;
    state.set_cost(cost);
    Ok(cost)
}

fn check_spec(objective: &dyn Objective, spec: &EncodingSpec) -> Result<()> {
    if spec.coefficients() != objective.arity() {
        return Err(Error::ArityMismatch {
            expected: objective.arity(),
            got: spec.coefficients(),
        });
    }
    Ok(())
}

fn check_budget(budget: u64) -> Result<()> {
    if budget == 0 {
        return Err(Error::InvalidParam("budget must be >= 1".into()));
    }
    Ok(())
}

/// Random bit-string start: every bit a fair coin.
pub fn random_bit_state(spec: &EncodingSpec, rng: &mut RngStream) -> Result<BitState> {
    BitState::new(*spec, spec.random(rng))
}

/// Random integer start: each coefficient uniform over `[ceil(L), floor(U)]`.
pub fn random_int_state(spec: &EncodingSpec, rng: &mut RngStream) -> Result<IntState> {
    let (lo, hi) = IntState::range_of(spec)?;
    let span = (hi - lo + 1) as usize;
    let values = (0..spec.coefficients())
        .map(|_| lo + rng.uniform_index(span) as i64)
        .collect();
    IntState::new(values, lo, hi)
}

/// Hill climbing from a random start.
pub fn hill_climb(
    objective: &dyn Objective,
    spec: &EncodingSpec,
    rng: &mut RngStream,
    budget: u64,
    strategy: HillStrategy,
) -> Result<SearchResult> {
    check_spec(objective, spec)?;
    let state = random_bit_state(spec, rng)?;
    hill_climb_from(objective, state, rng, budget, strategy)
}

/// Hill climbing from a given bit state.
pub fn hill_climb_from(
    objective: &dyn Objective,
    mut state: BitState,
    rng: &mut RngStream,
    budget: u64,
    strategy: HillStrategy,
) -> Result<SearchResult> {
    check_budget(budget)?;
    let started = Instant::now();
    let mut eval = Evaluator::new(objective, rng, budget);
    let initial = evaluate_initial(&mut state, &mut eval)?;
    let outcome = hill_loop(&mut state, &mut eval, strategy)?;
    Ok(finish(
        Algorithm::Hill,
        &state,
        initial,
        outcome,
        eval.count(),
        started,
    ))
}

/// KLS over single bit flips from a random start.
pub fn kls(
    objective: &dyn Objective,
    spec: &EncodingSpec,
    rng: &mut RngStream,
    budget: u64,
) -> Result<SearchResult> {
    check_spec(objective, spec)?;
    let state = random_bit_state(spec, rng)?;
    kls_from(objective, state, rng, budget, |_| {})
}

/// KLS from a given bit state; `on_pass` sees every pass trace.
pub fn kls_from(
    objective: &dyn Objective,
    mut state: BitState,
    rng: &mut RngStream,
    budget: u64,
    on_pass: impl FnMut(&PassTrace),
) -> Result<SearchResult> {
    check_budget(budget)?;
    let started = Instant::now();
    let algorithm = if state.replicate.is_some() {
        Algorithm::Kls2
    } else {
        Algorithm::Kls
    };
    let mut eval = Evaluator::new(objective, rng, budget);
    let initial = evaluate_initial(&mut state, &mut eval)?;
    let outcome = kls_loop(&mut state, &mut eval, on_pass)?;
    Ok(finish(
        algorithm,
        &state,
        initial,
        outcome,
        eval.count(),
        started,
    ))
}

/// KLS over integer coefficients moved by +/-1 within the bounds.
pub fn kls1(
    objective: &dyn Objective,
    spec: &EncodingSpec,
    rng: &mut RngStream,
    budget: u64,
) -> Result<SearchResult> {
    check_spec(objective, spec)?;
    let state = random_int_state(spec, rng)?;
    kls1_from(objective, state, rng, budget, |_| {})
}

pub fn kls1_from(
    objective: &dyn Objective,
    mut state: IntState,
    rng: &mut RngStream,
    budget: u64,
    on_pass: impl FnMut(&PassTrace),
) -> Result<SearchResult> {
    check_budget(budget)?;
    if state.size() != objective.arity() {
        return Err(Error::ArityMismatch {
            expected: objective.arity(),
            got: state.size(),
        });
    }
    let started = Instant::now();
    let mut eval = Evaluator::new(objective, rng, budget);
    let initial = evaluate_initial(&mut state, &mut eval)?;
    let outcome = kls_loop(&mut state, &mut eval, on_pass)?;
    Ok(finish(
        Algorithm::Kls1,
        &state,
        initial,
        outcome,
        eval.count(),
        started,
    ))
}

/// KLS over the bits of the first coefficient, copied to all coefficients.
pub fn kls2(
    objective: &dyn Objective,
    spec: &EncodingSpec,
    rng: &mut RngStream,
    budget: u64,
) -> Result<SearchResult> {
    check_spec(objective, spec)?;
    let group = spec.with_coefficients(1)?;
    let bits = group.random(rng);
    let state = BitState::replicated(group, bits, objective.arity())?;
    kls_from(objective, state, rng, budget, |_| {})
}
