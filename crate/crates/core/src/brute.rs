//! Exact Pareto fronts of small instances by exhaustive enumeration.

use bitvec::prelude::*;
use thiserror::Error;

use crate::pareto::{Objectives, ParetoError, Problem};

pub const MAX_BRUTE_FORCE_N: usize = 20;

#[derive(Debug, Error)]
pub enum BruteForceError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("n = {0} is too large for enumeration (limit {MAX_BRUTE_FORCE_N})")]
    TooLarge(usize),
    #[error(transparent)]
    Pareto(#[from] ParetoError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontPoint {
    pub bits: BitVec,
    pub objectives: Objectives,
}

/// Non-dominated subset of `points`, one representative per distinct
/// objective point, sorted by `f` ascending. The representative is the
/// earliest point in input order.
pub fn non_dominated<T: Clone>(points: &[(T, Objectives)]) -> Vec<(T, Objectives)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    // f descending, then w ascending; stable, so ties keep input order.
    order.sort_by(|&a, &b| {
        let (pa, pb) = (points[a].1, points[b].1);
        pb.f.cmp(&pa.f).then(pa.w.total_cmp(&pb.w))
    });
    let mut front = Vec::new();
    let mut best_w = f64::INFINITY;
    for i in order {
        // Every earlier point has f >= this f, so this point survives only
        // with a strictly smaller weight than all of them.
        if points[i].1.w < best_w {
            best_w = points[i].1.w;
            front.push(points[i].clone());
        }
    }
    front.reverse();
    front
}

/// Scores all `2^n` subsets and returns the exact Pareto front.
pub fn brute_force_front(problem: &Problem) -> Result<Vec<FrontPoint>, BruteForceError> {
    let n = problem.n();
    if n == 0 {
        return Err(BruteForceError::EmptyGraph);
    }
    if n > MAX_BRUTE_FORCE_N {
        return Err(BruteForceError::TooLarge(n));
    }
    let mut points = Vec::with_capacity(1 << n);
    for mask in 0u32..(1u32 << n) {
        let mut bits = bitvec![0; n];
        for i in 0..n {
            bits.set(i, mask >> i & 1 == 1);
        }
        let scored = problem.score(bits)?;
        let o = scored.objectives();
        points.push((mask, o));
    }
    let front = non_dominated(&points);
    Ok(front
        .into_iter()
        .map(|(mask, objectives)| FrontPoint {
            bits: (0..n).map(|i| mask >> i & 1 == 1).collect(),
            objectives,
        })
        .collect())
}

/// Largest feasible coverage over all subsets.
pub fn brute_force_optimum(problem: &Problem) -> Result<i64, BruteForceError> {
    let front = brute_force_front(problem)?;
    Ok(front.last().map_or(0, |p| p.objectives.f))
}
