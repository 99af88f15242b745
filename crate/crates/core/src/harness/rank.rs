//! Per-function competition ranking and mean ranks across functions.

use serde::{Deserialize, Serialize};

/// Ranks, one vector per algorithm, with arithmetic and geometric means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub functions: Vec<String>,
    /// Sorted by geometric mean, then arithmetic mean, then input order.
    pub rows: Vec<RankRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub algorithm: String,
    pub ranks: Vec<usize>,
    pub arithmetic: f64,
    pub geometric: f64,
}

/// Arithmetic and geometric mean of a rank vector.
pub fn rank_means(ranks: &[usize]) -> (f64, f64) {
    let n = ranks.len() as f64;
    let arithmetic = ranks.iter().sum::<usize>() as f64 / n;
    let geometric = (ranks.iter().map(|&r| (r as f64).ln()).sum::<f64>() / n).exp();
    (arithmetic, geometric)
}

/// Scores are compared after rounding to this many decimals, the
/// precision results are reported at.
pub const RANK_DECIMALS: i32 = 2;

fn rounded(x: f64) -> f64 {
    let scale = 10f64.powi(RANK_DECIMALS);
    (x * scale).round() / scale
}

/// Competition ranks of one column of scores (lower is better). Equal
/// scores share the best tied rank; `None` takes the worst rank.
pub fn rank_column(scores: &[Option<f64>]) -> Vec<usize> {
    let worst = scores.len();
    scores
        .iter()
        .map(|s| match s {
            Some(v) => {
                let v = rounded(*v);
                1 + scores.iter().flatten().filter(|&&o| rounded(o) < v).count()
            }
            None => worst,
        })
        .collect()
}

/// Builds the rank table from `scores[algorithm][function]`.
pub fn rank_table(
    algorithms: &[String],
    functions: &[String],
    scores: &[Vec<Option<f64>>],
) -> RankTable {
    let mut ranks = vec![Vec::with_capacity(functions.len()); algorithms.len()];
    for f in 0..functions.len() {
        let column: Vec<Option<f64>> = scores.iter().map(|row| row[f]).collect();
        for (a, r) in rank_column(&column).into_iter().enumerate() {
            ranks[a].push(r);
        }
    }
    from_ranks(algorithms, functions, ranks)
}

/// Builds the table directly from rank vectors.
pub fn from_ranks(
    algorithms: &[String],
    functions: &[String],
    ranks: Vec<Vec<usize>>,
) -> RankTable {
    let mut rows: Vec<RankRow> = algorithms
        .iter()
        .zip(ranks)
        .map(|(a, ranks)| {
            let (arithmetic, geometric) = rank_means(&ranks);
            RankRow {
                algorithm: a.clone(),
                ranks,
                arithmetic,
                geometric,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.geometric
            .total_cmp(&b.geometric)
            .then(a.arithmetic.total_cmp(&b.arithmetic))
    });
    RankTable {
        functions: functions.to_vec(),
        rows,
    }
}
