//! The seven benchmark functions and the [`Objective`] abstraction the
//! searchers minimize.
//!
//! F1 to F5 are De Jong's suite; F6 and F7 are Schaffer's sine-envelope and
//! stretched-V functions. All are minimized over a box `[L, U]^n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A black-box cost function over a box-bounded real vector.
pub trait Objective: Sync {
    fn name(&self) -> &str;

    /// Number of coefficients `n`.
    fn arity(&self) -> usize;

    /// Bits used to encode each coefficient.
    fn bits_per_coefficient(&self) -> usize;

    /// Common `(lower, upper)` bound for every coefficient.
    fn bounds(&self) -> (f64, f64);

    /// The known (or expected, for noisy functions) minimum cost.
    fn known_min(&self) -> Option<f64> {
        None
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    /// Cost of `x`. Stochastic objectives draw their noise from `rng`.
    fn evaluate(&self, x: &[f64], rng: &mut RngStream) -> Result<f64>;
}

/// Rejects wrong arity and out-of-box coefficients.
pub fn check_domain(x: &[f64], arity: usize, lower: f64, upper: f64) -> Result<()> {
    if x.len() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            got: x.len(),
        });
    }
    for (index, &value) in x.iter().enumerate() {
        if !(lower..=upper).contains(&value) {
            return Err(Error::OutOfBounds {
                index,
                value,
                lower,
                upper,
            });
        }
    }
    Ok(())
}

/// Foxhole centers `a[0][j], a[1][j]` of Shekel's foxholes, `j = 0..25`.
pub const FOXHOLES: [[f64; 25]; 2] = {
    const STEPS: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];
    let mut a = [[0.0; 25]; 2];
    let mut j = 0;
    while j < 25 {
        a[0][j] = STEPS[j % 5];
        a[1][j] = STEPS[j / 5];
        j += 1;
    }
    a
};

/// Sphere (parabola): `sum x_i^2`.
pub fn eval_f1(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Rosenbrock's saddle: `100 (x1^2 - x2)^2 + (1 - x1)^2`.
pub fn eval_f2(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    100.0 * (x1 * x1 - x2).powi(2) + (1.0 - x1).powi(2)
}

/// Step function, shifted by +30 so the minimum over `[-5.12, 5.12]^5` is 0.
pub fn eval_f3(x: &[f64]) -> f64 {
    30.0 + x.iter().map(|v| v.floor()).sum::<f64>()
}

/// Quartic without its noise term: `sum_{i=1..n} i x_i^4`.
pub fn eval_f4_noise_free(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * v.powi(4))
        .sum()
}

/// Quartic with additive standard-normal noise.
pub fn eval_f4(x: &[f64], rng: &mut RngStream) -> f64 {
    eval_f4_noise_free(x) + rng.gauss()
}

/// Shekel's foxholes.
pub fn eval_f5(x: &[f64]) -> f64 {
    let inner: f64 = (0..25)
        .map(|j| {
            let d = (x[0] - FOXHOLES[0][j]).powi(6) + (x[1] - FOXHOLES[1][j]).powi(6);
            1.0 / ((j + 1) as f64 + d)
        })
        .sum();
    1.0 / (1.0 / 500.0 + inner)
}

/// Schaffer's sine envelope sine wave.
pub fn eval_f6(x: &[f64]) -> f64 {
    let r2 = x[0] * x[0] + x[1] * x[1];
    0.5 + (r2.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * r2).powi(2)
}

/// Schaffer's stretched V sine wave.
pub fn eval_f7(x: &[f64]) -> f64 {
    let r2 = x[0] * x[0] + x[1] * x[1];
    r2.powf(0.25) * ((50.0 * r2.powf(0.1)).sin().powi(2) + 1.0)
}

/// The benchmark suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
}

impl Benchmark {
    pub const ALL: [Benchmark; 7] = [
        Benchmark::F1,
        Benchmark::F2,
        Benchmark::F3,
        Benchmark::F4,
        Benchmark::F5,
        Benchmark::F6,
        Benchmark::F7,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Benchmark::F1 => "f1",
            Benchmark::F2 => "f2",
            Benchmark::F3 => "f3",
            Benchmark::F4 => "f4",
            Benchmark::F5 => "f5",
            Benchmark::F6 => "f6",
            Benchmark::F7 => "f7",
        }
    }

    /// `(n, l, L, U)`.
    fn shape(self) -> (usize, usize, f64, f64) {
        match self {
            Benchmark::F1 => (3, 10, -5.12, 5.12),
            Benchmark::F2 => (2, 12, -2.048, 2.048),
            Benchmark::F3 => (5, 10, -5.12, 5.12),
            Benchmark::F4 => (30, 8, -1.28, 1.28),
            Benchmark::F5 => (2, 17, -65.536, 65.536),
            Benchmark::F6 => (2, 22, -100.0, 100.0),
            Benchmark::F7 => (2, 22, -100.0, 100.0),
        }
    }

    /// A point where the known minimum is attained.
    pub fn minimizer(self) -> Vec<f64> {
        match self {
            Benchmark::F2 => vec![1.0, 1.0],
            Benchmark::F3 => vec![-5.12; 5],
            Benchmark::F5 => vec![-32.0, -32.0],
            other => vec![0.0; other.arity()],
        }
    }

    /// Evaluates without bounds checks or noise.
    pub fn evaluate_noise_free(self, x: &[f64]) -> f64 {
        match self {
            Benchmark::F1 => eval_f1(x),
            Benchmark::F2 => eval_f2(x),
            Benchmark::F3 => eval_f3(x),
            Benchmark::F4 => eval_f4_noise_free(x),
            Benchmark::F5 => eval_f5(x),
            Benchmark::F6 => eval_f6(x),
            Benchmark::F7 => eval_f7(x),
        }
    }

    /// Noise-free evaluation with the domain check.
    pub fn evaluate_checked_noise_free(self, x: &[f64]) -> Result<f64> {
        let (n, _, lo, hi) = self.shape();
        check_domain(x, n, lo, hi)?;
        Ok(self.evaluate_noise_free(x))
    }
}

impl Objective for Benchmark {
    fn name(&self) -> &str {
        self.id()
    }

    fn arity(&self) -> usize {
        self.shape().0
    }

    fn bits_per_coefficient(&self) -> usize {
        self.shape().1
    }

    fn bounds(&self) -> (f64, f64) {
        let (_, _, lo, hi) = self.shape();
        (lo, hi)
    }

    fn known_min(&self) -> Option<f64> {
        Some(match self {
            Benchmark::F5 => 1.0,
            _ => 0.0,
        })
    }

    fn is_deterministic(&self) -> bool {
        *self != Benchmark::F4
    }

    fn evaluate(&self, x: &[f64], rng: &mut RngStream) -> Result<f64> {
        let value = self.evaluate_checked_noise_free(x)?;
        Ok(match self {
            Benchmark::F4 => value + rng.gauss(),
            _ => value,
        })
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownObjective(s.to_string()))
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A deterministic objective backed by a closure.
pub struct FnObjective<F> {
    name: String,
    arity: usize,
    bits: usize,
    bounds: (f64, f64),
    known_min: Option<f64>,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        bits: usize,
        bounds: (f64, f64),
        f: F,
    ) -> Self {
        Self {
            name: name.into(),
            arity,
            bits,
            bounds,
            known_min: None,
            f,
        }
    }

    pub fn with_known_min(mut self, min: f64) -> Self {
        self.known_min = Some(min);
        self
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn arity(&self) -> usize {
        self.arity
    }

    fn bits_per_coefficient(&self) -> usize {
        self.bits
    }

    fn bounds(&self) -> (f64, f64) {
        self.bounds
    }

    fn known_min(&self) -> Option<f64> {
        self.known_min
    }

    fn evaluate(&self, x: &[f64], _rng: &mut RngStream) -> Result<f64> {
        check_domain(x, self.arity, self.bounds.0, self.bounds.1)?;
        Ok((self.f)(x))
    }
}
