//! Pareto optimisation of chance-constrained monotone submodular problems.
//!
//! The crate maximises a coverage function `N(V')` over graph vertices subject
//! to `Pr[W(V') > B] <= alpha`, where each vertex weight is uniform on
//! `[a_i - d, a_i + d]`. The chance constraint is evaluated either through a
//! tail-bound surrogate (one-sided Chebyshev or Chernoff) or directly, as the
//! `ceil(t_sp * alpha)`-th largest of `t_sp` sampled totals. Optimisation
//! uses GSEMO, the sliding-window SW-GSEMO, or the adaptive-window
//! ASW-GSEMO.
//!
//! Module map:
//!
//! * [`graph`]: edge-list loading and the coverage objective.
//! * [`weights`]: the IID and degree-based uniform weight models.
//! * [`chance`]: surrogate and sampling-based weights, sample matrices.
//! * [`pareto`]: scoring, dominance, mutation and the Pareto archive.
//! * [`algorithms`]: the three optimisation loops and their parent selection.
//! * [`experiment`], [`stats`], [`brute`]: batch runs, statistics and
//!   exhaustive oracles.

pub mod algorithms;
pub mod brute;
pub mod chance;
pub mod experiment;
pub mod graph;
pub mod pareto;
pub mod rng;
pub mod stats;
pub mod weights;

pub use algorithms::{Algorithm, RunConfig, RunOutcome, TraceMode};
pub use chance::{ChanceEvaluator, EvaluatorKind, SampleMatrix};
pub use graph::Graph;
pub use pareto::{Objectives, ParetoArchive, Problem, ScoredSolution};
pub use weights::{WeightKind, WeightModel};
