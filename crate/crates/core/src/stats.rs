//! Summary statistics and the Kruskal-Wallis H test.

use statrs::function::gamma::gamma_ur;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least two groups, got {0}")]
    TooFewGroups(usize),
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("observation {0} is not finite")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KruskalWallis {
    pub h: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Mid-ranks (1-based, ties averaged) of `values`, plus the tie term
/// `sum(t^3 - t)` over tie groups.
pub fn average_ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // Positions i..j share the mean of ranks i+1..=j.
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (ranks, ties)
}

/// Kruskal-Wallis H with tie correction; the p-value is the upper tail of
/// chi-square with `groups - 1` degrees of freedom. When every observation
/// is tied the statistic is undefined and the result is `H = 0, p = 1`.
pub fn kruskal_wallis(groups: &[&[f64]]) -> Result<KruskalWallis, StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::TooFewGroups(groups.len()));
    }
    if let Some(i) = groups.iter().position(|g| g.is_empty()) {
        return Err(StatsError::EmptyGroup(i));
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    if let Some(&x) = pooled.iter().find(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite(x));
    }
    let df = groups.len() - 1;
    let n = pooled.len() as f64;
    let (ranks, ties) = average_ranks(&pooled);
    let correction = 1.0 - ties / (n * n * n - n);
    if correction <= 0.0 || n < 2.0 {
        return Ok(KruskalWallis { h: 0.0, df, p_value: 1.0 });
    }

    let mut offset = 0;
    let mut weighted = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        weighted += r * r / g.len() as f64;
        offset += g.len();
    }
    let h = (12.0 / (n * (n + 1.0)) * weighted - 3.0 * (n + 1.0)) / correction;
    let h = h.max(0.0);
    // Q(a, 0) = 1; the incomplete gamma rejects x = 0.
    let p_value = if h == 0.0 { 1.0 } else { gamma_ur(df as f64 / 2.0, h / 2.0).clamp(0.0, 1.0) };
    Ok(KruskalWallis { h, df, p_value })
}

/// Min, max, mean and sample standard deviation (`n - 1` denominator; 0 for
/// a single value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub std: f64,
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Some(Summary { min, max, mean, std })
}
