//! Scored solutions, the two-objective dominance relation, bitwise mutation
//! and the non-dominated archive.
//!
//! A solution is scored as `(f, w)`: `w` is the active evaluator's weight and
//! `f` is the coverage when `w <= B`, or `-1` when the solution is
//! infeasible. `x` weakly dominates `y` iff `x.f >= y.f` and `x.w <= y.w`.

use std::sync::Arc;

use bitvec::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

use crate::chance::{ChanceError, ChanceEvaluator, SampleSumVector, SelectionMoments};
use crate::graph::{CoverageState, Graph, GraphError};
use crate::weights::WeightModel;

/// `f` value of a solution whose weight exceeds the bound.
pub const INFEASIBLE: i64 = -1;

#[derive(Debug, Error)]
pub enum ParetoError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Chance(#[from] ChanceError),
    #[error("bound must be positive, got {0}")]
    InvalidBound(f64),
    #[error("graph has {graph} vertices but weight model has {model}")]
    SizeMismatch { graph: usize, model: usize },
    #[error("archive is empty")]
    EmptyArchive,
}

/// Objective point of a solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objectives {
    pub f: i64,
    pub w: f64,
}

impl Objectives {
    pub fn new(f: i64, w: f64) -> Self {
        Objectives { f, w }
    }
}

pub fn weakly_dominates(x: Objectives, y: Objectives) -> bool {
    x.f >= y.f && x.w <= y.w
}

pub fn strictly_dominates(x: Objectives, y: Objectives) -> bool {
    weakly_dominates(x, y) && (x.f > y.f || x.w < y.w)
}

/// A chance-constrained coverage instance.
#[derive(Debug, Clone)]
pub struct Problem {
    graph: Arc<Graph>,
    model: Arc<WeightModel>,
    evaluator: ChanceEvaluator,
    bound: f64,
}

impl Problem {
    pub fn new(
        graph: Arc<Graph>,
        model: Arc<WeightModel>,
        evaluator: ChanceEvaluator,
        bound: f64,
    ) -> Result<Self, ParetoError> {
        if bound.is_nan() || bound <= 0.0 {
            return Err(ParetoError::InvalidBound(bound));
        }
        if graph.n() != model.n() {
            return Err(ParetoError::SizeMismatch { graph: graph.n(), model: model.n() });
        }
        if let Some(m) = evaluator.samples() {
            if m.n() != graph.n() {
                return Err(ParetoError::SizeMismatch { graph: graph.n(), model: m.n() });
            }
        }
        Ok(Problem { graph, model, evaluator, bound })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn model(&self) -> &WeightModel {
        &self.model
    }

    pub fn evaluator(&self) -> &ChanceEvaluator {
        &self.evaluator
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    fn objectives(&self, coverage: usize, w: f64) -> Objectives {
        let f = if w <= self.bound { coverage as i64 } else { INFEASIBLE };
        Objectives { f, w }
    }

    /// The all-zeros solution.
    pub fn empty_solution(&self) -> ScoredSolution {
        let n = self.n();
        ScoredSolution {
            bits: bitvec![0; n],
            objectives: Objectives::new(0, 0.0),
            coverage: CoverageState::empty(n),
            moments: SelectionMoments::default(),
            sums: self.evaluator.samples().map(|m| SampleSumVector::zeros(m.t_sp())),
        }
    }

    /// Scores `bits` from scratch.
    pub fn score(&self, bits: BitVec) -> Result<ScoredSolution, ParetoError> {
        let coverage = CoverageState::from_selection(&self.graph, &bits)?;
        let moments = SelectionMoments {
            count: bits.count_ones(),
            expected: bits.iter_ones().map(|i| self.model.expected()[i]).sum(),
        };
        let sums = match self.evaluator.samples() {
            Some(m) => Some(SampleSumVector::from_selection(m, &bits)?),
            None => None,
        };
        let w = self.evaluator.weight_of(&self.model, &bits)?;
        let objectives = self.objectives(coverage.covered_total(), w);
        Ok(ScoredSolution { bits, objectives, coverage, moments, sums })
    }

    /// Scores the offspring obtained by flipping `flips` in `parent`,
    /// updating the parent's caches instead of recomputing them.
    pub fn derive(
        &self,
        parent: &ScoredSolution,
        flips: &[(usize, bool)],
        scratch: &mut Vec<f64>,
    ) -> Result<ScoredSolution, ParetoError> {
        let mut child = parent.clone();
        let expected = self.model.expected();
        for &(i, on) in flips {
            child.bits.set(i, on);
            if on {
                child.moments.count += 1;
                child.moments.expected += expected[i];
            } else {
                child.moments.count -= 1;
                child.moments.expected -= expected[i];
            }
        }
        child.coverage.apply_flips(&self.graph, flips)?;
        if let (Some(sums), Some(m)) = (child.sums.as_mut(), self.evaluator.samples()) {
            sums.apply_flips(m, flips);
        }
        if child.moments.count == 0 {
            // Pin the empty solution to exact zeros so accumulated rounding
            // cannot leave it with a tiny nonzero weight.
            child.moments.expected = 0.0;
            if let Some(sums) = child.sums.as_mut() {
                sums.clear();
            }
        }
        let w = self.evaluator.weight(&self.model, &child.moments, child.sums.as_ref(), scratch);
        child.objectives = self.objectives(child.coverage.covered_total(), w);
        Ok(child)
    }
}

/// A solution with its objectives and the caches used to score offspring
/// incrementally.
#[derive(Debug, Clone)]
pub struct ScoredSolution {
    bits: BitVec,
    objectives: Objectives,
    coverage: CoverageState,
    moments: SelectionMoments,
    sums: Option<SampleSumVector>,
}

impl ScoredSolution {
    pub fn bits(&self) -> &BitSlice {
        &self.bits
    }

    pub fn objectives(&self) -> Objectives {
        self.objectives
    }

    pub fn f(&self) -> i64 {
        self.objectives.f
    }

    pub fn w(&self) -> f64 {
        self.objectives.w
    }

    /// Number of selected elements, `|V'|`.
    pub fn cardinality(&self) -> usize {
        self.moments.count
    }

    pub fn coverage_state(&self) -> &CoverageState {
        &self.coverage
    }

    pub fn moments(&self) -> SelectionMoments {
        self.moments
    }

    pub fn sample_sums(&self) -> Option<&SampleSumVector> {
        self.sums.as_ref()
    }
}

/// Flips each of the `n` bits independently with probability `1/n`.
///
/// Flip positions are drawn by geometric skipping, so the cost is
/// proportional to the number of flips rather than `n`. Returns the
/// offspring's `(position, new_bit)` list in ascending position order.
pub fn mutate(parent: &BitSlice, rng: &mut impl Rng) -> Vec<(usize, bool)> {
    let mut flips = Vec::new();
    mutate_into(parent, rng, &mut flips);
    flips
}

pub fn mutate_into(parent: &BitSlice, rng: &mut impl Rng, flips: &mut Vec<(usize, bool)>) {
    flips.clear();
    let n = parent.len();
    assert!(n >= 1, "cannot mutate an empty bit string");
    let skip = Geometric::new(1.0 / n as f64).expect("1/n is a valid probability");
    let mut pos: u64 = 0;
    loop {
        pos = pos.saturating_add(skip.sample(rng));
        if pos >= n as u64 {
            break;
        }
        let i = pos as usize;
        flips.push((i, !parent[i]));
        pos += 1;
    }
}

/// Mutually non-dominated solutions, kept sorted by `f` ascending. Weights
/// then increase strictly along the archive.
#[derive(Debug, Clone, Default)]
pub struct ParetoArchive {
    members: Vec<ScoredSolution>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        ParetoArchive { members: Vec::new() }
    }

    pub fn with_member(s: ScoredSolution) -> Self {
        ParetoArchive { members: vec![s] }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ScoredSolution] {
        &self.members
    }

    pub fn get(&self, i: usize) -> &ScoredSolution {
        &self.members[i]
    }

    pub fn points(&self) -> Vec<Objectives> {
        self.members.iter().map(|m| m.objectives).collect()
    }

    /// Inserts `y` unless some member strictly dominates it. Members weakly
    /// dominated by `y` (including an identical point) are removed.
    pub fn insert(&mut self, y: ScoredSolution) -> bool {
        let p = y.objectives;
        // First member with f >= y.f; it has the smallest weight among them.
        let hi = self.members.partition_point(|m| m.objectives.f < p.f);
        if let Some(m) = self.members.get(hi) {
            if strictly_dominates(m.objectives, p) {
                return false;
            }
        }
        // Members with f <= y.f form a prefix; those with w >= y.w are its tail.
        let end = self.members[hi..].partition_point(|m| m.objectives.f <= p.f) + hi;
        let start = self.members[..end].partition_point(|m| m.objectives.w < p.w);
        self.members.splice(start..end, std::iter::once(y));
        true
    }

    /// Index range of members with `low <= w <= high`.
    pub fn weight_range(&self, low: f64, high: f64) -> std::ops::Range<usize> {
        let start = self.members.partition_point(|m| m.objectives.w < low);
        let end = self.members.partition_point(|m| m.objectives.w <= high);
        start..end.max(start)
    }

    /// Member with the largest `f`.
    pub fn best_feasible(&self) -> Result<&ScoredSolution, ParetoError> {
        self.members.last().ok_or(ParetoError::EmptyArchive)
    }

    /// Checks the ordering and non-dominance invariants.
    pub fn check_invariants(&self) -> Result<(), String> {
        for pair in self.members.windows(2) {
            let (a, b) = (pair[0].objectives, pair[1].objectives);
            if !(a.f < b.f && a.w < b.w) {
                return Err(format!("members {a:?} and {b:?} are out of order or dominate each other"));
            }
        }
        Ok(())
    }
}
