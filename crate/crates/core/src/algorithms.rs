//! GSEMO and its sliding-window variants.
//!
//! All three loops share the same body: pick a parent from the archive, flip
//! each bit with probability `1/n`, score the offspring and offer it to the
//! archive. They differ only in parent selection:
//!
//! * GSEMO picks uniformly from the whole archive.
//! * SW-GSEMO restricts the choice to members with weight in
//!   `[floor(c), ceil(c)]` where `c = t * B / t_max`.
//! * ASW-GSEMO uses `[floor(c), floor(c) + w_size]` and adapts `w_size`:
//!   it grows when the window is empty and shrinks when it holds more than
//!   one member.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pareto::{ParetoArchive, ParetoError, Problem};
use crate::rng::{substream_seed, Substream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Gsemo,
    SlidingWindow,
    AdaptiveSlidingWindow,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Gsemo => "gsemo",
            Algorithm::SlidingWindow => "sw",
            Algorithm::AdaptiveSlidingWindow => "asw",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gsemo" => Ok(Algorithm::Gsemo),
            "sw" | "sw-gsemo" => Ok(Algorithm::SlidingWindow),
            "asw" | "asw-gsemo" => Ok(Algorithm::AdaptiveSlidingWindow),
            other => Err(format!("unknown algorithm {other:?} (expected gsemo, sw or asw)")),
        }
    }
}

/// Width of the adaptive window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowState {
    w_size: u64,
}

impl WindowState {
    pub fn new(w_size: u64) -> Self {
        assert!(w_size >= 1, "window size must be at least 1");
        WindowState { w_size }
    }

    pub fn w_size(&self) -> u64 {
        self.w_size
    }
}

impl Default for WindowState {
    fn default() -> Self {
        WindowState::new(1)
    }
}

/// Outcome of one parent selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selected {
    pub index: usize,
    pub from_window: bool,
}

fn window_centre(t: u64, t_max: u64, bound: f64) -> f64 {
    (t as f64 / t_max as f64) * bound
}

fn pick_in(range: std::ops::Range<usize>, archive_len: usize, rng: &mut impl Rng) -> Selected {
    if range.is_empty() {
        Selected { index: rng.random_range(0..archive_len), from_window: false }
    } else {
        Selected { index: rng.random_range(range), from_window: true }
    }
}

pub fn uniform_select(archive: &ParetoArchive, rng: &mut impl Rng) -> Selected {
    assert!(!archive.is_empty(), "parent selection from an empty archive");
    Selected { index: rng.random_range(0..archive.len()), from_window: false }
}

/// Sliding-window selection with window `[floor(c), ceil(c)]`.
pub fn sliding_select(archive: &ParetoArchive, t: u64, t_max: u64, bound: f64, rng: &mut impl Rng) -> Selected {
    assert!(!archive.is_empty(), "parent selection from an empty archive");
    if t > t_max {
        return uniform_select(archive, rng);
    }
    let c = window_centre(t, t_max, bound);
    let range = archive.weight_range(c.floor(), c.ceil());
    pick_in(range, archive.len(), rng)
}

/// Adaptive sliding-window selection with window
/// `[floor(c), floor(c) + w_size]`, updating `state`.
pub fn adaptive_select(
    archive: &ParetoArchive,
    t: u64,
    t_max: u64,
    bound: f64,
    state: &mut WindowState,
    rng: &mut impl Rng,
) -> Selected {
    assert!(!archive.is_empty(), "parent selection from an empty archive");
    if t > t_max {
        return uniform_select(archive, rng);
    }
    let low = window_centre(t, t_max, bound).floor();
    let range = archive.weight_range(low, low + state.w_size as f64);
    if range.is_empty() {
        state.w_size += 1;
    } else if state.w_size > 1 && range.len() > 1 {
        state.w_size -= 1;
    }
    pick_in(range, archive.len(), rng)
}

/// What the run trace records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceMode {
    #[default]
    Off,
    /// One record per accepted archive insertion.
    Accepted,
    /// One record per generated offspring, accepted or not.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub t: u64,
    pub weight: f64,
    pub f: i64,
    pub from_window: bool,
    /// Window width in effect when the parent was chosen; 1 for SW-GSEMO and
    /// 0 for GSEMO, which has no window.
    pub w_size: u64,
}

pub type RunTrace = Vec<TraceRecord>;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub t_max: u64,
    pub seed: u64,
    pub initial_w_size: u64,
    pub trace: TraceMode,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, t_max: u64, seed: u64) -> Self {
        RunConfig { algorithm, t_max, seed, initial_w_size: 1, trace: TraceMode::Off }
    }

    pub fn with_trace(mut self, trace: TraceMode) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_initial_w_size(mut self, w: u64) -> Self {
        self.initial_w_size = w;
        self
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub archive: ParetoArchive,
    pub trace: RunTrace,
    /// Iterations whose parent came from inside the window.
    pub window_hits: u64,
    pub iterations: u64,
    pub final_w_size: u64,
}

/// Runs one optimisation. Iteration `t` goes from 1 to `t_max`; selection
/// and mutation draw from separate substreams of `config.seed`.
pub fn run(problem: &Problem, config: &RunConfig) -> Result<RunOutcome, ParetoError> {
    let mut select_rng = ChaCha8Rng::seed_from_u64(substream_seed(config.seed, Substream::Selection));
    let mut mutate_rng = ChaCha8Rng::seed_from_u64(substream_seed(config.seed, Substream::Mutation));
    let mut archive = ParetoArchive::with_member(problem.empty_solution());
    let mut window = WindowState::new(config.initial_w_size);
    let mut trace = RunTrace::new();
    let mut flips = Vec::new();
    let mut scratch = Vec::new();
    let mut window_hits = 0;
    let bound = problem.bound();

    for t in 1..=config.t_max {
        let w_size_before = match config.algorithm {
            Algorithm::Gsemo => 0,
            Algorithm::SlidingWindow => 1,
            Algorithm::AdaptiveSlidingWindow => window.w_size,
        };
        let sel = match config.algorithm {
            Algorithm::Gsemo => uniform_select(&archive, &mut select_rng),
            Algorithm::SlidingWindow => sliding_select(&archive, t, config.t_max, bound, &mut select_rng),
            Algorithm::AdaptiveSlidingWindow => {
                adaptive_select(&archive, t, config.t_max, bound, &mut window, &mut select_rng)
            }
        };
        window_hits += sel.from_window as u64;

        let parent = archive.get(sel.index);
        crate::pareto::mutate_into(parent.bits(), &mut mutate_rng, &mut flips);
        let child = problem.derive(parent, &flips, &mut scratch)?;
        let point = child.objectives();
        let accepted = archive.insert(child);

        if config.trace == TraceMode::All || (accepted && config.trace == TraceMode::Accepted) {
            trace.push(TraceRecord {
                t,
                weight: point.w,
                f: point.f,
                from_window: sel.from_window,
                w_size: w_size_before,
            });
        }
    }

    Ok(RunOutcome {
        archive,
        trace,
        window_hits,
        iterations: config.t_max,
        final_w_size: window.w_size,
    })
}

pub fn gsemo_run(problem: &Problem, t_max: u64, seed: u64, trace: TraceMode) -> Result<RunOutcome, ParetoError> {
    run(problem, &RunConfig::new(Algorithm::Gsemo, t_max, seed).with_trace(trace))
}

pub fn sw_gsemo_run(problem: &Problem, t_max: u64, seed: u64, trace: TraceMode) -> Result<RunOutcome, ParetoError> {
    run(problem, &RunConfig::new(Algorithm::SlidingWindow, t_max, seed).with_trace(trace))
}

pub fn asw_gsemo_run(problem: &Problem, t_max: u64, seed: u64, trace: TraceMode) -> Result<RunOutcome, ParetoError> {
    run(problem, &RunConfig::new(Algorithm::AdaptiveSlidingWindow, t_max, seed).with_trace(trace))
}
