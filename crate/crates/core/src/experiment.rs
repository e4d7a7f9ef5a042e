//! Batch execution of seeded runs, result aggregation and CSV output.
//!
//! An [`ExperimentConfig`] describes a matrix of cells (algorithm x
//! evaluator x weights x alpha x bound x t_sp). Each cell runs `runs`
//! independent seeds; run `i` uses seed `mix(master, i)`. Sampled cells
//! share one sample matrix keyed by [`sample_seed`] so every algorithm sees
//! the same draws.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::algorithms::{self, Algorithm, RunConfig, RunTrace, TraceMode};
use crate::chance::{generate_samples, ChanceError, ChanceEvaluator, EvaluatorKind, SampleManifest, SampleMatrix};
use crate::graph::{load_graph, Graph, GraphError};
use crate::pareto::{ParetoError, Problem};
use crate::rng;
use crate::stats::{summarize, Summary};
use crate::weights::{make_model, WeightError, WeightKind, WeightModel};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Chance(#[from] ChanceError),
    #[error(transparent)]
    Pareto(#[from] ParetoError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Stream index reserved for the sample matrix seed.
const SAMPLE_STREAM: u64 = u64::MAX;

/// Seed of run `index` under `master`.
pub fn run_seed(master: u64, index: u64) -> u64 {
    rng::mix(master, index)
}

/// Seed of the sample matrix shared by all runs under `master`.
pub fn sample_seed(master: u64) -> u64 {
    rng::mix(master, SAMPLE_STREAM)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundSpec {
    /// `floor(n^2 / 2)`
    HalfNSquared,
    /// `n^2`
    NSquared,
    Explicit(f64),
}

impl BoundSpec {
    pub fn resolve(self, n: usize) -> f64 {
        let n = n as u128;
        match self {
            BoundSpec::HalfNSquared => (n * n / 2) as f64,
            BoundSpec::NSquared => (n * n) as f64,
            BoundSpec::Explicit(b) => b,
        }
    }

    pub fn label(self) -> String {
        match self {
            BoundSpec::HalfNSquared => "half-n2".into(),
            BoundSpec::NSquared => "n2".into(),
            BoundSpec::Explicit(b) => format!("{b}"),
        }
    }
}

impl std::str::FromStr for BoundSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "half-n2" => Ok(BoundSpec::HalfNSquared),
            "n2" => Ok(BoundSpec::NSquared),
            other => match other.parse::<f64>() {
                Ok(b) if b > 0.0 && b.is_finite() => Ok(BoundSpec::Explicit(b)),
                _ => Err(format!("bad bound {other:?} (expected half-n2, n2 or a positive number)")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: PathBuf,
    pub weights: Vec<WeightKind>,
    pub evaluators: Vec<EvaluatorKind>,
    pub alphas: Vec<f64>,
    pub bounds: Vec<BoundSpec>,
    pub t_sps: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub t_max: u64,
    pub runs: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub trace: bool,
    pub workers: usize,
    pub initial_w_size: u64,
    /// Write measured wall time; when false the `seconds` columns are 0 so
    /// output files are byte-reproducible.
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph: PathBuf::new(),
            weights: vec![WeightKind::Iid],
            evaluators: vec![EvaluatorKind::Sampling],
            alphas: vec![0.1],
            bounds: vec![BoundSpec::HalfNSquared],
            t_sps: vec![250],
            algorithms: vec![Algorithm::AdaptiveSlidingWindow],
            t_max: 1_500_000,
            runs: 30,
            seed: 0,
            out: PathBuf::from("results"),
            trace: false,
            workers: 1,
            initial_w_size: 1,
            record_timing: true,
        }
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, ExperimentError>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| ExperimentError::Config(format!("{key}: {e}"))))
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(ExperimentError::Config(format!("{key}: empty list")))
            } else {
                Ok(v)
            }
        })
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ExperimentError>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| ExperimentError::Config(format!("{key}: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ExperimentError> {
    match value.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(ExperimentError::Config(format!("{key}: not a boolean: {other:?}"))),
    }
}

impl ExperimentConfig {
    /// Sets one option by its flag name (without the leading dashes). List
    /// options accept comma-separated values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ExperimentError> {
        match key {
            "graph" => self.graph = PathBuf::from(value.trim()),
            "weights" => self.weights = parse_list(key, value)?,
            "evaluator" => self.evaluators = parse_list(key, value)?,
            "alpha" => self.alphas = parse_list(key, value)?,
            "bound" => self.bounds = parse_list(key, value)?,
            "tsp" => self.t_sps = parse_list(key, value)?,
            "algo" => self.algorithms = parse_list(key, value)?,
            "tmax" => self.t_max = parse_one(key, value)?,
            "runs" => self.runs = parse_one(key, value)?,
            "seed" => self.seed = parse_one(key, value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "trace" => self.trace = parse_bool(key, value)?,
            "workers" => self.workers = parse_one(key, value)?,
            "wsize-init" => self.initial_w_size = parse_one(key, value)?,
            "timing" => self.record_timing = parse_bool(key, value)?,
            other => return Err(ExperimentError::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines; `#` starts a comment line.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ExperimentError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ExperimentError::Config(format!("line {}: expected key=value", i + 1)))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let mut cfg = Self::default();
        cfg.apply_text(&fs::read_to_string(path)?)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(m.to_string()));
        if self.runs == 0 {
            return bad("runs must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if self.initial_w_size == 0 {
            return bad("wsize-init must be at least 1");
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(ExperimentError::Config(format!("alpha {a} outside (0, 1)")));
        }
        if self.t_sps.contains(&0) {
            return bad("tsp must be at least 1");
        }
        Ok(())
    }

    /// Every cell of the matrix. Surrogate evaluators ignore `t_sp`, so
    /// they contribute one cell per remaining combination with `t_sp = 0`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &weights in &self.weights {
            for &bound in &self.bounds {
                for &alpha in &self.alphas {
                    for &evaluator in &self.evaluators {
                        let t_sps: &[usize] =
                            if evaluator == EvaluatorKind::Sampling { &self.t_sps } else { &[0] };
                        for &t_sp in t_sps {
                            for &algorithm in &self.algorithms {
                                cells.push(Cell { algorithm, evaluator, weights, alpha, bound, t_sp });
                            }
                        }
                    }
                }
            }
        }
        cells
    }
}

/// One configuration of the experiment matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub algorithm: Algorithm,
    pub evaluator: EvaluatorKind,
    pub weights: WeightKind,
    pub alpha: f64,
    pub bound: BoundSpec,
    pub t_sp: usize,
}

impl Cell {
    /// File-name-safe identifier.
    pub fn label(&self) -> String {
        let mut s = format!(
            "{}_{}_{}_a{}_b{}",
            self.algorithm,
            self.evaluator,
            self.weights,
            self.alpha,
            self.bound.label()
        );
        if self.evaluator == EvaluatorKind::Sampling {
            let _ = write!(s, "_tsp{}", self.t_sp);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub run: usize,
    pub seed: u64,
    pub best_f: i64,
    pub best_cardinality: usize,
    pub archive_size: usize,
    pub window_hits: u64,
    pub seconds: f64,
    pub trace_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub best_f: Summary,
    pub mean_cardinality: f64,
    pub mean_archive_size: f64,
    pub seconds: f64,
}

pub fn summarize_runs(runs: &[RunResult]) -> Option<CellSummary> {
    let f: Vec<f64> = runs.iter().map(|r| r.best_f as f64).collect();
    let best_f = summarize(&f)?;
    let k = runs.len() as f64;
    Some(CellSummary {
        best_f,
        mean_cardinality: runs.iter().map(|r| r.best_cardinality as f64).sum::<f64>() / k,
        mean_archive_size: runs.iter().map(|r| r.archive_size as f64).sum::<f64>() / k,
        seconds: runs.iter().map(|r| r.seconds).sum(),
    })
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub cell: Cell,
    pub n: usize,
    pub bound: f64,
    pub runs: Vec<RunResult>,
    pub summary: CellSummary,
}

/// Formats like C's `%g` with 6 significant digits.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

pub const TRACE_HEADER: &str = "t,weight,f,from_window,w_size";

/// Writes a run trace as CSV.
pub fn emit_trace(trace: &RunTrace, path: impl AsRef<Path>) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_trace(trace, &mut out)?;
    out.flush()
}

pub fn write_trace(trace: &RunTrace, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in trace {
        writeln!(out, "{},{},{},{},{}", r.t, format_sig6(r.weight), r.f, r.from_window, r.w_size)?;
    }
    Ok(())
}

pub const RESULTS_HEADER: &str =
    "graph,algo,evaluator,weights,B,alpha,tsp,tmax,runs,min,max,mean,std,mean_card,mean_popsize,seconds";

pub const RUNS_HEADER: &str = "run,seed,best_f,card,popsize,window_hits,seconds,trace";

pub fn results_row(graph_name: &str, t_max: u64, r: &CellResult) -> String {
    let s = &r.summary;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        graph_name,
        r.cell.algorithm,
        r.cell.evaluator,
        r.cell.weights,
        r.bound,
        r.cell.alpha,
        r.cell.t_sp,
        t_max,
        r.runs.len(),
        s.best_f.min,
        s.best_f.max,
        s.best_f.mean,
        s.best_f.std,
        s.mean_cardinality,
        s.mean_archive_size,
        s.seconds
    )
}

pub fn write_runs(runs: &[RunResult], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{RUNS_HEADER}")?;
    for r in runs {
        let trace = r.trace_path.as_ref().and_then(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned());
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.run,
            r.seed,
            r.best_f,
            r.best_cardinality,
            r.archive_size,
            r.window_hits,
            r.seconds,
            trace.unwrap_or_default()
        )?;
    }
    Ok(())
}

/// Reads the `best_f` column of a per-run results file.
pub fn read_best_f(path: impl AsRef<Path>) -> Result<Vec<f64>, ExperimentError> {
    let text = fs::read_to_string(path.as_ref())?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| ExperimentError::Config("empty runs file".into()))?;
    let col = header
        .split(',')
        .position(|h| h == "best_f")
        .ok_or_else(|| ExperimentError::Config(format!("{}: no best_f column", path.as_ref().display())))?;
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .nth(col)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| ExperimentError::Config(format!("bad row {l:?}")))
        })
        .collect()
}

/// Shared read-only inputs of a cell.
pub struct Instance {
    pub name: String,
    pub graph: Arc<Graph>,
    models: HashMap<WeightKind, Arc<WeightModel>>,
    samples: HashMap<(WeightKind, usize), Arc<SampleMatrix>>,
    master_seed: u64,
}

impl Instance {
    pub fn new(name: impl Into<String>, graph: Graph, master_seed: u64) -> Self {
        Instance {
            name: name.into(),
            graph: Arc::new(graph),
            models: HashMap::new(),
            samples: HashMap::new(),
            master_seed,
        }
    }

    pub fn load(path: &Path, master_seed: u64) -> Result<Self, ExperimentError> {
        let graph = load_graph(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().trim_end_matches(".txt").to_string())
            .unwrap_or_else(|| "graph".into());
        Ok(Self::new(name, graph, master_seed))
    }

    pub fn model(&mut self, kind: WeightKind) -> Result<Arc<WeightModel>, ExperimentError> {
        if let Some(m) = self.models.get(&kind) {
            return Ok(m.clone());
        }
        let m = Arc::new(make_model(kind, &self.graph)?);
        self.models.insert(kind, m.clone());
        Ok(m)
    }

    pub fn samples(&mut self, kind: WeightKind, t_sp: usize) -> Result<Arc<SampleMatrix>, ExperimentError> {
        if let Some(s) = self.samples.get(&(kind, t_sp)) {
            return Ok(s.clone());
        }
        let model = self.model(kind)?;
        let s = Arc::new(generate_samples(&model, t_sp, sample_seed(self.master_seed))?);
        self.samples.insert((kind, t_sp), s.clone());
        Ok(s)
    }

    pub fn problem(&mut self, cell: &Cell) -> Result<Problem, ExperimentError> {
        let model = self.model(cell.weights)?;
        let evaluator = match cell.evaluator {
            EvaluatorKind::Chebyshev => ChanceEvaluator::chebyshev(cell.alpha)?,
            EvaluatorKind::Chernoff => ChanceEvaluator::chernoff(cell.alpha)?,
            EvaluatorKind::Sampling => ChanceEvaluator::sampling(cell.alpha, self.samples(cell.weights, cell.t_sp)?)?,
        };
        let bound = cell.bound.resolve(self.graph.n());
        Ok(Problem::new(self.graph.clone(), model, evaluator, bound)?)
    }
}

/// Settings shared by every run of a cell.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub t_max: u64,
    pub runs: usize,
    pub master_seed: u64,
    pub initial_w_size: u64,
    pub trace_dir: Option<PathBuf>,
    pub record_timing: bool,
}

/// Executes one run. When `trace_path` is given the accepted-insertion
/// trace is written there.
pub fn execute_run(
    problem: &Problem,
    algorithm: Algorithm,
    settings: &RunSettings,
    index: usize,
    trace_path: Option<PathBuf>,
) -> Result<RunResult, ExperimentError> {
    let seed = run_seed(settings.master_seed, index as u64);
    let mode = if trace_path.is_some() { TraceMode::Accepted } else { TraceMode::Off };
    let cfg = RunConfig::new(algorithm, settings.t_max, seed)
        .with_trace(mode)
        .with_initial_w_size(settings.initial_w_size);
    let start = Instant::now();
    let outcome = algorithms::run(problem, &cfg)?;
    let seconds = if settings.record_timing { start.elapsed().as_secs_f64() } else { 0.0 };
    let best = outcome.archive.best_feasible()?;
    if let Some(p) = &trace_path {
        emit_trace(&outcome.trace, p)?;
    }
    Ok(RunResult {
        run: index,
        seed,
        best_f: best.f(),
        best_cardinality: best.cardinality(),
        archive_size: outcome.archive.len(),
        window_hits: outcome.window_hits,
        seconds,
        trace_path,
    })
}

/// Runs every seed of a cell on the current rayon pool. Results are ordered
/// by run index regardless of completion order.
pub fn run_cell(instance: &mut Instance, cell: &Cell, settings: &RunSettings) -> Result<CellResult, ExperimentError> {
    let problem = instance.problem(cell)?;
    let label = cell.label();
    let runs: Vec<RunResult> = (0..settings.runs)
        .into_par_iter()
        .map(|i| {
            let trace_path = settings.trace_dir.as_ref().map(|d| d.join(format!("trace_{label}_run{i}.csv")));
            execute_run(&problem, cell.algorithm, settings, i, trace_path)
        })
        .collect::<Result<_, _>>()?;
    let summary = summarize_runs(&runs).expect("at least one run");
    Ok(CellResult { cell: *cell, n: problem.n(), bound: problem.bound(), runs, summary })
}

/// Runs the whole matrix, appending one row per cell to
/// `<out>/results.csv` and writing `<out>/runs_<cell>.csv`, sample
/// manifests and (optionally) traces.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<CellResult>, ExperimentError> {
    config.validate()?;
    let mut instance = Instance::load(&config.graph, config.seed)?;
    run_experiment_on(config, &mut instance)
}

pub fn run_experiment_on(config: &ExperimentConfig, instance: &mut Instance) -> Result<Vec<CellResult>, ExperimentError> {
    config.validate()?;
    fs::create_dir_all(&config.out)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;

    let results_path = config.out.join("results.csv");
    let fresh = !results_path.exists();
    let mut results = OpenOptions::new().create(true).append(true).open(&results_path)?;
    if fresh {
        writeln!(results, "{RESULTS_HEADER}")?;
    }

    let settings = RunSettings {
        t_max: config.t_max,
        runs: config.runs,
        master_seed: config.seed,
        initial_w_size: config.initial_w_size,
        trace_dir: config.trace.then(|| config.out.clone()),
        record_timing: config.record_timing,
    };

    let mut all = Vec::new();
    for cell in config.cells() {
        if cell.evaluator == EvaluatorKind::Sampling {
            let model = instance.model(cell.weights)?;
            let matrix = instance.samples(cell.weights, cell.t_sp)?;
            let manifest = SampleManifest::describe(&model, &matrix);
            manifest.write(config.out.join(format!("samples_{}_tsp{}.manifest", cell.weights, cell.t_sp)))?;
        }
        log::info!("cell {} on {} (n = {})", cell.label(), instance.name, instance.graph.n());
        let result = pool.install(|| run_cell(instance, &cell, &settings))?;
        let mut runs_file = BufWriter::new(File::create(config.out.join(format!("runs_{}.csv", cell.label())))?);
        write_runs(&result.runs, &mut runs_file)?;
        runs_file.flush()?;
        writeln!(results, "{}", results_row(&instance.name, config.t_max, &result))?;
        results.flush()?;
        log::info!(
            "{}: mean {:.3} std {:.3} |V'| {:.1} popsize {:.1}",
            cell.label(),
            result.summary.best_f.mean,
            result.summary.best_f.std,
            result.summary.mean_cardinality,
            result.summary.mean_archive_size
        );
        all.push(result);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_resolve() {
        assert_eq!(BoundSpec::HalfNSquared.resolve(5), 12.0);
        assert_eq!(BoundSpec::NSquared.resolve(5), 25.0);
        assert_eq!(BoundSpec::HalfNSquared.resolve(4158), 8_644_482.0);
        assert_eq!(BoundSpec::Explicit(3.5).resolve(100), 3.5);
        assert_eq!("half-n2".parse::<BoundSpec>().unwrap(), BoundSpec::HalfNSquared);
        assert_eq!("n2".parse::<BoundSpec>().unwrap(), BoundSpec::NSquared);
        assert_eq!("12.5".parse::<BoundSpec>().unwrap(), BoundSpec::Explicit(12.5));
        assert!("-1".parse::<BoundSpec>().is_err());
        assert!("big".parse::<BoundSpec>().is_err());
    }

    #[test]
    fn sig6_matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (8643810.5, "8.64381e+06"),
            (123456.4, "123456"),
            (12345.67, "12345.7"),
            (0.1, "0.1"),
            (0.000123456789, "0.000123457"),
            (0.0000123, "1.23e-05"),
            (-42.5, "-42.5"),
            (999999.7, "1e+06"),
        ];
        for (x, want) in cases {
            assert_eq!(format_sig6(x), want, "{x}");
        }
    }

    #[test]
    fn config_text_and_lists() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("# comment\ngraph = g.txt\nalgo=gsemo,sw,asw\nevaluator=cheb,sample\ntsp=250,500\nalpha=0.1,0.001\nruns=3\ntrace=true\n")
            .unwrap();
        assert_eq!(cfg.graph, PathBuf::from("g.txt"));
        assert_eq!(cfg.algorithms.len(), 3);
        assert!(cfg.trace);
        // cheb: 2 alphas x 3 algos; sample: 2 alphas x 2 tsp x 3 algos.
        assert_eq!(cfg.cells().len(), 6 + 12);
        assert!(cfg.apply_text("bogus=1").is_err());
        assert!(cfg.apply_text("runs").is_err());
        cfg.set("runs", "0").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn summary_of_single_zero_run() {
        let r = RunResult {
            run: 0,
            seed: 1,
            best_f: 0,
            best_cardinality: 0,
            archive_size: 1,
            window_hits: 0,
            seconds: 0.0,
            trace_path: None,
        };
        let s = summarize_runs(&[r]).unwrap();
        assert_eq!(s.best_f, Summary { min: 0.0, max: 0.0, mean: 0.0, std: 0.0 });
    }

    #[test]
    fn empty_trace_is_header_only() {
        let mut buf = Vec::new();
        write_trace(&Vec::new(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,weight,f,from_window,w_size\n");
    }

    #[test]
    fn seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..100).map(|i| run_seed(7, i)).collect();
        assert_eq!(seeds.len(), 100);
        assert!(!seeds.contains(&sample_seed(7)));
    }
}
