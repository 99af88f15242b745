//! Acceptance suite. Prints one PASS/FAIL line per criterion (with the
//! measured values underneath) and exits nonzero if any criterion fails.
//!
//! Run with `cargo test -p klsearch --test acceptance`.

use std::process::{Command, ExitCode};

use klsearch::annealing::{sa_accept, simulated_annealing, SaParams};
use klsearch::harness::{rank_means, run_trials};
use klsearch::local_search::{kls_pass, max_prefix, random_bit_state, Neighborhood};
use klsearch::objectives::{
    eval_f1, eval_f2, eval_f3, eval_f4_noise_free, eval_f5, eval_f6, eval_f7,
};
use klsearch::search::Evaluator;
use klsearch::{
    binary_to_gray, derive_stream, gray_to_binary, Algorithm, Benchmark, BitVector, Coding,
    EncodingSpec, FnObjective, Genotype, Objective, RngStream, SearchParams,
};

const SEED: u64 = 1995;
const TRIALS: usize = 50;

struct Criterion {
    id: u32,
    title: &'static str,
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Self {
            id,
            title,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.1)
    }

    fn print(&self) {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2}: {}", self.id, self.title);
        for (label, ok) in &self.checks {
            println!("       [{}] {label}", if *ok { "ok" } else { "x " });
        }
    }
}

fn avg(algo: Algorithm, func: Benchmark) -> (f64, f64, f64) {
    let cell = run_trials(algo, &func, TRIALS, SEED, &SearchParams::default()).unwrap();
    assert!(cell.errors.is_empty(), "{:?}", cell.errors);
    (
        cell.stats.cost_avg,
        cell.stats.cost_min,
        cell.stats.cost_max,
    )
}

fn f1_all_algorithms() -> Criterion {
    let mut c = Criterion::new(1, "F1: every algorithm averages <= 0.01");
    for a in Algorithm::ALL {
        let (m, _, _) = avg(a, Benchmark::F1);
        c.check(format!("{} avg {m:.4} <= 0.01", a.label()), m <= 0.01);
    }
    c
}

fn f2_ordering() -> Criterion {
    let mut c = Criterion::new(
        2,
        "F2: KLS2 <= 0.01, KLS <= 0.6, Hill in [0.3, 4.5], KLS2 <= KLS <= Hill",
    );
    let (k2, _, _) = avg(Algorithm::Kls2, Benchmark::F2);
    let (k, _, _) = avg(Algorithm::Kls, Benchmark::F2);
    let (h, _, _) = avg(Algorithm::Hill, Benchmark::F2);
    c.check(format!("KLS2 avg {k2:.4} <= 0.01"), k2 <= 0.01);
    c.check(format!("KLS avg {k:.4} <= 0.6"), k <= 0.6);
    c.check(
        format!("Hill avg {h:.4} in [0.3, 4.5]"),
        (0.3..=4.5).contains(&h),
    );
    c.check(format!("{k2:.4} <= {k:.4} <= {h:.4}"), k2 <= k && k <= h);
    c
}

fn f3_bands() -> Criterion {
    let mut c = Criterion::new(
        3,
        "F3: SA in [4.5, 5.5], KLS in [5.0, 6.5], Hill in [6.0, 9.5], KLS1 > Hill",
    );
    let (sa, _, _) = avg(Algorithm::Sa, Benchmark::F3);
    let (k, _, _) = avg(Algorithm::Kls, Benchmark::F3);
    let (h, _, _) = avg(Algorithm::Hill, Benchmark::F3);
    let (k1, _, _) = avg(Algorithm::Kls1, Benchmark::F3);
    c.check(
        format!("SA avg {sa:.4} in [4.5, 5.5]"),
        (4.5..=5.5).contains(&sa),
    );
    c.check(
        format!("KLS avg {k:.4} in [5.0, 6.5]"),
        (5.0..=6.5).contains(&k),
    );
    c.check(
        format!("Hill avg {h:.4} in [6.0, 9.5]"),
        (6.0..=9.5).contains(&h),
    );
    c.check(format!("KLS1 avg {k1:.4} > Hill avg {h:.4}"), k1 > h);
    c
}

fn f5_foxholes() -> Criterion {
    let mut c = Criterion::new(
        4,
        "F5: f5(-32,-32) in [0.99, 1.01]; KLS2 min 1.00 +- 0.01, max <= 12.7",
    );
    let v = eval_f5(&[-32.0, -32.0]);
    c.check(format!("f5(-32,-32) = {v:.6}"), (0.99..=1.01).contains(&v));
    let (_, lo, hi) = avg(Algorithm::Kls2, Benchmark::F5);
    c.check(
        format!("KLS2 min {lo:.4} in [0.99, 1.01]"),
        (0.99..=1.01).contains(&lo),
    );
    c.check(format!("KLS2 max {hi:.4} <= 12.7"), hi <= 12.7);
    c
}

fn f7_contrast() -> Criterion {
    let mut c = Criterion::new(5, "F7: KLS2 avg <= 0.01, Hill avg >= 1.0");
    let (k2, _, _) = avg(Algorithm::Kls2, Benchmark::F7);
    let (h, _, _) = avg(Algorithm::Hill, Benchmark::F7);
    c.check(format!("KLS2 avg {k2:.4} <= 0.01"), k2 <= 0.01);
    c.check(format!("Hill avg {h:.4} >= 1.0"), h >= 1.0);
    c
}

#[allow(clippy::approx_constant)]
fn published_rank_means() -> Criterion {
    let mut c = Criterion::new(
        6,
        "rank vectors reproduce the published arithmetic/geometric means (2 decimals)",
    );
    let rows: [(&str, [usize; 7], f64, f64); 6] = [
        ("KLS2", [1, 1, 4, 2, 2, 3, 1], 2.00, 1.74),
        ("SA", [1, 4, 2, 3, 6, 1, 2], 2.71, 2.25),
        ("GA", [1, 2, 1, 5, 1, 6, 6], 3.14, 2.34),
        ("KLS", [1, 3, 3, 4, 3, 2, 3], 2.71, 2.52),
        ("KLS1", [1, 6, 6, 1, 4, 5, 5], 4.00, 3.22),
        ("Hill", [1, 5, 5, 6, 5, 4, 4], 4.29, 3.83),
    ];
    for (name, ranks, a, g) in rows {
        let (am, gm) = rank_means(&ranks);
        let (am, gm) = (format!("{am:.2}"), format!("{gm:.2}"));
        let ok = am == format!("{a:.2}") && gm == format!("{g:.2}");
        c.check(
            format!("{name}: {am} / {gm} vs published {a:.2} / {g:.2}"),
            ok,
        );
    }
    c
}

fn encoding_properties() -> Criterion {
    let mut c = Criterion::new(
        7,
        "linear decoding endpoints and monotonicity; Gray bijection for l <= 16",
    );
    for b in Benchmark::ALL {
        let spec = EncodingSpec::for_objective(&b, Coding::Binary).unwrap();
        let (lo, hi) = b.bounds();
        let ends =
            spec.decode_coefficient(0) == lo && spec.decode_coefficient(spec.max_code()) == hi;
        let mut prev = f64::NEG_INFINITY;
        let mut mono = true;
        for code in 0..=spec.max_code() {
            let x = spec.decode_coefficient(code);
            mono &= x > prev && (lo..=hi).contains(&x);
            prev = x;
        }
        c.check(
            format!("{b}: endpoints {ends}, strictly increasing {mono}"),
            ends && mono,
        );
    }
    let mut bijective = true;
    for l in 1..=16u32 {
        let size = 1u64 << l;
        let mut seen = vec![false; size as usize];
        for code in 0..size {
            let g = binary_to_gray(code);
            bijective &= g < size && !seen[g as usize] && gray_to_binary(g) == code;
            if g < size {
                seen[g as usize] = true;
            }
            if code > 0 {
                bijective &= (g ^ binary_to_gray(code - 1)).count_ones() == 1;
            }
        }
    }
    c.check(
        "Gray coding: bijective, inverse, unit distance for l = 1..16",
        bijective,
    );
    c
}

fn golden_values() -> Criterion {
    let mut c = Criterion::new(8, "golden function values");
    let cases: [(&str, f64, f64, f64); 7] = [
        ("f1(0)", eval_f1(&[0.0; 3]), 0.0, 1e-9),
        ("f2(1,1)", eval_f2(&[1.0, 1.0]), 0.0, 1e-9),
        ("f3(-5.12)", eval_f3(&[-5.12; 5]), 0.0, 1e-9),
        (
            "f4(0) noise-free",
            eval_f4_noise_free(&[0.0; 30]),
            0.0,
            1e-9,
        ),
        ("f5(-32,-32)", eval_f5(&[-32.0, -32.0]), 1.0, 5e-3),
        ("f6(0,0)", eval_f6(&[0.0, 0.0]), 0.0, 1e-9),
        ("f7(0,0)", eval_f7(&[0.0, 0.0]), 0.0, 1e-9),
    ];
    for (name, got, want, tol) in cases {
        c.check(
            format!("{name} = {got:.9} (want {want} +- {tol:e})"),
            (got - want).abs() <= tol,
        );
    }
    c
}

fn bit_genotype(g: &Genotype) -> &BitVector {
    match g {
        Genotype::Bits(b) => b,
        Genotype::Integers(_) => panic!("expected a bit genotype"),
    }
}

fn local_minima() -> Criterion {
    let mut c = Criterion::new(
        9,
        "Hill/KLS exits are 1-flip local minima (50 seeds per deterministic function)",
    );
    let params = SearchParams::default();
    for b in Benchmark::ALL.into_iter().filter(|b| b.is_deterministic()) {
        let spec = EncodingSpec::for_objective(&b, params.coding).unwrap();
        for algo in [Algorithm::Hill, Algorithm::Kls] {
            let mut violations = 0;
            for seed in 0..50 {
                let mut rng = derive_stream(SEED, seed);
                let r = algo.run(&b, &mut rng, &params).unwrap();
                let bits = bit_genotype(&r.best_genotype);
                for j in 0..bits.len() {
                    let mut n = bits.clone();
                    n.flip(j);
                    if b.evaluate_noise_free(&spec.decode_solution(&n).unwrap()) < r.best_cost {
                        violations += 1;
                        break;
                    }
                }
            }
            c.check(
                format!(
                    "{b} {}: {violations} of 50 not locally minimal",
                    algo.label()
                ),
                violations == 0,
            );
        }
    }
    c
}

fn max_prefix_oracle() -> Criterion {
    let mut c = Criterion::new(
        10,
        "max-prefix commit matches brute force; committed drop equals G_k",
    );
    let mut rng = RngStream::from_seed(SEED);
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let len = 1 + rng.uniform_index(40);
        let gains: Vec<f64> = (0..len).map(|_| rng.gauss() * 3.0).collect();
        let (mut bk, mut bs, mut s) = (0, 0.0, 0.0);
        for (i, g) in gains.iter().enumerate() {
            s += g;
            if s > bs {
                bk = i + 1;
                bs = s;
            }
        }
        if max_prefix(&gains) != (bk, bs) {
            mismatches += 1;
        }
    }
    c.check(
        format!("10^4 random sequences: {mismatches} mismatches"),
        mismatches == 0,
    );

    let mut bad = 0;
    let mut passes = 0;
    for b in [Benchmark::F1, Benchmark::F2, Benchmark::F5, Benchmark::F7] {
        let spec = EncodingSpec::for_objective(&b, Coding::Binary).unwrap();
        for seed in 0..25 {
            let mut rng = derive_stream(SEED, seed);
            let mut state = random_bit_state(&spec, &mut rng).unwrap();
            let mut eval = Evaluator::new(&b, &mut rng, u64::MAX);
            let cost = eval.evaluate(state.coefficients()).unwrap();
            state.set_cost(cost);
            let t = kls_pass(&mut state, &mut eval).unwrap();
            let recomputed = b.evaluate_noise_free(state.coefficients());
            let drop = t.start_cost - recomputed;
            if drop != t.prefix_best_sum || recomputed != t.end_cost {
                bad += 1;
            }
            passes += 1;
        }
    }
    c.check(
        format!("{passes} KLS passes: {bad} with drop != G_k"),
        bad == 0,
    );
    c
}

fn annealing_law() -> Criterion {
    let mut c = Criterion::new(
        11,
        "SA acceptance matches exp(gain/T) within 3 sigma; geometric cooling 0.95",
    );
    let mut rng = RngStream::from_seed(SEED);
    let draws = 20_000;
    for gain in [-0.1, -0.5, -1.0, -2.0, -5.0] {
        for t in [0.5, 1.0, 2.0, 10.0] {
            let p = f64::exp(gain / t);
            let hits = (0..draws).filter(|_| sa_accept(gain, t, &mut rng)).count();
            let freq = hits as f64 / draws as f64;
            let sigma = (p * (1.0 - p) / draws as f64).sqrt();
            let ok = (freq - p).abs() <= 3.0 * sigma.max(1.0 / draws as f64);
            if !ok {
                c.check(format!("gain {gain}, T {t}: {freq:.4} vs {p:.4}"), false);
            }
        }
    }
    c.check("20 (gain, T) cells within bounds", c.checks.is_empty());
    let spec = EncodingSpec::for_objective(&Benchmark::F1, Coding::Binary).unwrap();
    let mut rng = derive_stream(SEED, 0);
    let (_, trace) =
        simulated_annealing(&Benchmark::F1, &spec, &mut rng, &SaParams::default()).unwrap();
    let geometric = trace.temperatures.len() > 1
        && trace
            .temperatures
            .windows(2)
            .all(|w| (w[1] / w[0] - 0.95).abs() < 1e-12);
    c.check(
        format!(
            "{} temperatures, ratio 0.95 throughout: {geometric}",
            trace.temperatures.len()
        ),
        geometric,
    );
    c
}

/// Bumpy 2-D surface on a 6-bit integer grid with its optimum at (40, 40).
fn toy(x: &[f64]) -> f64 {
    x.iter()
        .map(|&v| {
            let u = (v - 40.0) / 8.0;
            u * u + 2.0 * (1.0 - (std::f64::consts::TAU * u).cos())
        })
        .sum()
}

fn toy_oracle() -> Criterion {
    let mut c = Criterion::new(
        12,
        "toy space (n*l = 12): exhaustive optimum, KLS <= Hill on >= 90% of 200 seeds",
    );
    let obj = FnObjective::new("toy", 2, 6, (0.0, 63.0), toy);
    let spec = EncodingSpec::for_objective(&obj, Coding::Binary).unwrap();
    let optimum = (0..1u64 << 12)
        .map(|code| {
            let bits = spec.encode_codes(&[code >> 6, code & 63]).unwrap();
            toy(&spec.decode_solution(&bits).unwrap())
        })
        .fold(f64::INFINITY, f64::min);
    c.check(format!("exhaustive optimum {optimum}"), optimum == 0.0);
    let params = SearchParams::default();
    let mut kls_wins = 0;
    let mut below = 0;
    for seed in 0..200 {
        let mut costs = Vec::new();
        for algo in Algorithm::ALL {
            let mut rng = derive_stream(SEED, seed);
            let r = algo.run(&obj, &mut rng, &params).unwrap();
            if r.best_cost < optimum {
                below += 1;
            }
            costs.push(r.best_cost);
        }
        if costs[1] <= costs[0] {
            kls_wins += 1;
        }
    }
    c.check(
        format!("KLS <= Hill on {kls_wins}/200 seeds"),
        kls_wins >= 180,
    );
    c.check(format!("{below} reports below the optimum"), below == 0);
    c
}

fn determinism() -> Criterion {
    let mut c = Criterion::new(
        13,
        "same command and seed give byte-identical CSV cost columns",
    );
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_klsearch"))
            .args([
                "bench", "--algo", "all", "--func", "all", "--trials", "3", "--seed", "77",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .map(|l| l.split(',').take(6).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
    };
    let (a, b) = (run(), run());
    c.check(
        format!("{} rows compared", a.len()),
        a.len() == 43 && a == b,
    );
    c
}

fn main() -> ExitCode {
    let criteria: [fn() -> Criterion; 13] = [
        f1_all_algorithms,
        f2_ordering,
        f3_bands,
        f5_foxholes,
        f7_contrast,
        published_rank_means,
        encoding_properties,
        golden_values,
        local_minima,
        max_prefix_oracle,
        annealing_law,
        toy_oracle,
        determinism,
    ];
    let mut failed = 0;
    for f in criteria {
        let c = f();
        c.print();
        if !c.passed() {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
