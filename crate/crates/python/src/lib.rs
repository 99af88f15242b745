//! Python bindings for `klsearch`.
//!
//! ```python
//! import pyklsearch as kls
//! kls.evaluate("f2", [1.0, 1.0])          # 0.0
//! r = kls.run("kls2", "f1", seed=7)
//! r.best_cost, r.genotype
//! ```

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use klsearch::harness::{self, grid, RunConfig};
use klsearch::local_search;
use klsearch::{
    Algorithm, Benchmark, Coding, EncodingSpec, Error, Objective, RngStream, SearchParams,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn benchmark(id: &str) -> PyResult<Benchmark> {
    id.parse().map_err(to_py)
}

fn params_from(
    overrides: Option<Vec<(String, String)>>,
    budget: Option<u64>,
) -> PyResult<SearchParams> {
    let mut p = SearchParams::default();
    if let Some(b) = budget {
        p.set("budget", &b.to_string()).map_err(to_py)?;
    }
    for (k, v) in overrides.unwrap_or_default() {
        p.set(&k, &v).map_err(to_py)?;
    }
    Ok(p)
}

/// Static description of a benchmark function.
#[pyclass(name = "ObjectiveInfo", frozen, get_all)]
struct PyObjectiveInfo {
    id: String,
    arity: usize,
    bits_per_coefficient: usize,
    lower: f64,
    upper: f64,
    known_min: Option<f64>,
    deterministic: bool,
}

#[pymethods]
impl PyObjectiveInfo {
    fn __repr__(&self) -> String {
        format!(
            "ObjectiveInfo(id='{}', arity={}, bits={}, bounds=({}, {}))",
            self.id, self.arity, self.bits_per_coefficient, self.lower, self.upper
        )
    }
}

/// Outcome of one search run.
#[pyclass(name = "SearchResult", frozen, get_all)]
struct PySearchResult {
    algorithm: String,
    best_cost: f64,
    initial_cost: f64,
    coefficients: Vec<f64>,
    genotype: String,
    passes: usize,
    evaluations: u64,
    wall_time: f64,
    committed_depths: Vec<usize>,
    stop: String,
}

#[pymethods]
impl PySearchResult {
    fn __repr__(&self) -> String {
        format!(
            "SearchResult(algorithm='{}', best_cost={}, evaluations={}, stop='{}')",
            self.algorithm, self.best_cost, self.evaluations, self.stop
        )
    }
}

/// Summary statistics of one (algorithm, function) cell.
#[pyclass(name = "TrialStats", frozen, get_all)]
struct PyTrialStats {
    algorithm: String,
    function: String,
    cost_avg: f64,
    cost_std: f64,
    cost_min: f64,
    cost_max: f64,
    time_avg: f64,
    time_std: f64,
    trials: usize,
    failures: usize,
    costs: Vec<f64>,
}

#[pymethods]
impl PyTrialStats {
    fn __repr__(&self) -> String {
        format!(
            "TrialStats({}/{}: avg={:.4}, std={:.4}, min={:.4}, max={:.4})",
            self.algorithm,
            self.function,
            self.cost_avg,
            self.cost_std,
            self.cost_min,
            self.cost_max
        )
    }
}

/// Linear decoder for bit groups.
#[pyclass(name = "EncodingSpec", frozen)]
struct PyEncodingSpec(EncodingSpec);

#[pymethods]
impl PyEncodingSpec {
    #[new]
    #[pyo3(signature = (n, l, lower, upper, coding = "binary"))]
    fn new(n: usize, l: usize, lower: f64, upper: f64, coding: &str) -> PyResult<Self> {
        let coding: Coding = coding.parse().map_err(to_py)?;
        EncodingSpec::new(n, l, lower, upper, coding)
            .map(Self)
            .map_err(to_py)
    }

    /// Spec used for function `id`.
    #[staticmethod]
    #[pyo3(signature = (id, coding = "binary"))]
    fn for_function(id: &str, coding: &str) -> PyResult<Self> {
        let coding: Coding = coding.parse().map_err(to_py)?;
        EncodingSpec::for_objective(&benchmark(id)?, coding)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn total_bits(&self) -> usize {
        self.0.total_bits()
    }

    fn decode_coefficient(&self, code: u64) -> PyResult<f64> {
        if code > self.0.max_code() {
            return Err(PyValueError::new_err(format!(
                "code {code} exceeds {}",
                self.0.max_code()
            )));
        }
        Ok(self.0.decode_coefficient(code))
    }

    /// Decodes a string of '0'/'1' characters.
    fn decode(&self, bits: &str) -> PyResult<Vec<f64>> {
        if !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(PyValueError::new_err("expected a string of 0 and 1"));
        }
        let bits = klsearch::BitVector::from_bit_str(bits);
        self.0.decode_solution(&bits).map_err(to_py)
    }
}

/// Evaluates benchmark `id` at `x`; noisy functions draw from a stream
/// seeded with `seed`.
#[pyfunction]
#[pyo3(signature = (id, x, seed = 0, noise = true))]
fn evaluate(id: &str, x: Vec<f64>, seed: u64, noise: bool) -> PyResult<f64> {
    let b = benchmark(id)?;
    if noise {
        b.evaluate(&x, &mut RngStream::from_seed(seed))
            .map_err(to_py)
    } else {
        b.evaluate_checked_noise_free(&x).map_err(to_py)
    }
}

#[pyfunction]
fn objective_info(id: &str) -> PyResult<PyObjectiveInfo> {
    let b = benchmark(id)?;
    let (lower, upper) = b.bounds();
    Ok(PyObjectiveInfo {
        id: b.id().to_string(),
        arity: b.arity(),
        bits_per_coefficient: b.bits_per_coefficient(),
        lower,
        upper,
        known_min: b.known_min(),
        deterministic: b.is_deterministic(),
    })
}

#[pyfunction]
fn functions() -> Vec<&'static str> {
    Benchmark::ALL.iter().map(|b| b.id()).collect()
}

#[pyfunction]
fn algorithms() -> Vec<&'static str> {
    Algorithm::ALL.iter().map(|a| a.id()).collect()
}

/// One run of `algorithm` on function `id` with stream `(seed, trial)`.
#[pyfunction]
#[pyo3(signature = (algorithm, id, seed = 0, trial = 0, budget = None, params = None))]
fn run(
    py: Python<'_>,
    algorithm: &str,
    id: &str,
    seed: u64,
    trial: u64,
    budget: Option<u64>,
    params: Option<Vec<(String, String)>>,
) -> PyResult<PySearchResult> {
    let algo: Algorithm = algorithm.parse().map_err(to_py)?;
    let b = benchmark(id)?;
    let p = params_from(params, budget)?;
    let r = py
        .detach(|| algo.run(&b, &mut klsearch::derive_stream(seed, trial), &p))
        .map_err(to_py)?;
    Ok(PySearchResult {
        algorithm: r.algorithm.id().to_string(),
        best_cost: r.best_cost,
        initial_cost: r.initial_cost,
        coefficients: r.best_coefficients,
        genotype: r.best_genotype.render(),
        passes: r.passes,
        evaluations: r.evaluations,
        wall_time: r.wall_time,
        committed_depths: r.committed_depths,
        stop: format!("{:?}", r.stop).to_lowercase(),
    })
}

/// Repeated trials of one (algorithm, function) cell.
#[pyfunction]
#[pyo3(signature = (algorithm, id, trials = 50, seed = 1995, budget = None, params = None))]
fn run_trials(
    py: Python<'_>,
    algorithm: &str,
    id: &str,
    trials: usize,
    seed: u64,
    budget: Option<u64>,
    params: Option<Vec<(String, String)>>,
) -> PyResult<PyTrialStats> {
    let algo: Algorithm = algorithm.parse().map_err(to_py)?;
    let b = benchmark(id)?;
    let p = params_from(params, budget)?;
    let cell = py
        .detach(|| harness::run_trials(algo, &b, trials, seed, &p))
        .map_err(to_py)?;
    let s = cell.stats;
    Ok(PyTrialStats {
        algorithm: algo.id().to_string(),
        function: b.id().to_string(),
        cost_avg: s.cost_avg,
        cost_std: s.cost_std,
        cost_min: s.cost_min,
        cost_max: s.cost_max,
        time_avg: s.time_avg,
        time_std: s.time_std,
        trials: s.trials,
        failures: s.failures,
        costs: cell.records.iter().map(|r| r.cost).collect(),
    })
}

/// Full benchmark report rendered as csv, json or md.
#[pyfunction]
#[pyo3(name = "bench", signature = (algorithms = "all", functions = "all", trials = 50, seed = 1995, format = "csv", params = None))]
fn run_bench(
    py: Python<'_>,
    algorithms: &str,
    functions: &str,
    trials: usize,
    seed: u64,
    format: &str,
    params: Option<Vec<(String, String)>>,
) -> PyResult<String> {
    let mut cfg = RunConfig::default();
    let trials = trials.to_string();
    let seed = seed.to_string();
    for (k, v) in [
        ("algo", algorithms),
        ("func", functions),
        ("trials", trials.as_str()),
        ("seed", seed.as_str()),
        ("format", format),
    ] {
        cfg.set(k, v).map_err(to_py)?;
    }
    for (k, v) in params.unwrap_or_default() {
        cfg.set(&k, &v).map_err(to_py)?;
    }
    let report = py.detach(|| harness::bench(&cfg)).map_err(to_py)?;
    report.render(cfg.format).map_err(to_py)
}

/// Arithmetic and geometric mean of a rank vector.
#[pyfunction]
fn rank_means(ranks: Vec<usize>) -> PyResult<(f64, f64)> {
    if ranks.is_empty() || ranks.contains(&0) {
        return Err(PyValueError::new_err("ranks must be non-empty and >= 1"));
    }
    Ok(harness::rank_means(&ranks))
}

/// Smallest `k` with the maximum prefix sum of `gains`, and that sum.
#[pyfunction]
fn max_prefix(gains: Vec<f64>) -> (usize, f64) {
    local_search::max_prefix(&gains)
}

#[pyfunction]
fn binary_to_gray(code: u64) -> u64 {
    klsearch::binary_to_gray(code)
}

#[pyfunction]
fn gray_to_binary(code: u64) -> u64 {
    klsearch::gray_to_binary(code)
}

/// `res * res` samples `(x1, x2, f)` over the bounds square.
#[pyfunction]
fn surface_grid(id: &str, res: usize) -> PyResult<Vec<(f64, f64, f64)>> {
    let g = grid::surface_grid(benchmark(id)?, res).map_err(to_py)?;
    Ok(g.into_iter().map(|[a, b, f]| (a, b, f)).collect())
}

#[pymodule]
fn pyklsearch(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyObjectiveInfo>()?;
    m.add_class::<PySearchResult>()?;
    m.add_class::<PyTrialStats>()?;
    m.add_class::<PyEncodingSpec>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(objective_info, m)?)?;
    m.add_function(wrap_pyfunction!(functions, m)?)?;
    m.add_function(wrap_pyfunction!(algorithms, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    m.add_function(wrap_pyfunction!(rank_means, m)?)?;
    m.add_function(wrap_pyfunction!(max_prefix, m)?)?;
    m.add_function(wrap_pyfunction!(binary_to_gray, m)?)?;
    m.add_function(wrap_pyfunction!(gray_to_binary, m)?)?;
    m.add_function(wrap_pyfunction!(surface_grid, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
