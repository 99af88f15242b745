//! Surface samples of a benchmark over its bounds square, for plotting.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::objectives::{Benchmark, Objective};

/// `res` evenly spaced points over `[lo, hi]`, both endpoints included.
pub fn linspace(lo: f64, hi: f64, res: usize) -> Vec<f64> {
    let last = (res - 1) as f64;
    (0..res)
        .map(|i| {
            if i + 1 == res {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / last)
            }
        })
        .collect()
}

/// `res * res` samples `[x1, x2, f]`, `x1` varying slowest. Functions of
/// more than two variables are sliced with the remaining coordinates at 0;
/// noise is omitted.
pub fn surface_grid(func: Benchmark, res: usize) -> Result<Vec<[f64; 3]>> {
    if res < 2 {
        return Err(Error::InvalidParam(format!(
            "grid resolution must be >= 2, got {res}"
        )));
    }
    let (lo, hi) = func.bounds();
    let axis = linspace(lo, hi, res);
    let mut x = vec![0.0; func.arity()];
    let mut out = Vec::with_capacity(res * res);
    for &a in &axis {
        for &b in &axis {
            x[0] = a;
            x[1] = b;
            out.push([a, b, func.evaluate_noise_free(&x)]);
        }
    }
    Ok(out)
}

pub fn grid_csv(samples: &[[f64; 3]]) -> String {
    let mut out = String::from("x1,x2,f\n");
    for [a, b, f] in samples {
        let _ = writeln!(out, "{a},{b},{f}");
    }
    out
}
