use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use chance_pareto::algorithms::{self, RunConfig, TraceMode};
use chance_pareto::brute::brute_force_front;
use chance_pareto::chance::SampleManifest;
use chance_pareto::experiment::{self, emit_trace, read_best_f, run_seed, Cell, ExperimentConfig, Instance};
use chance_pareto::stats::kruskal_wallis;

#[derive(Parser)]
#[command(name = "chance-pareto", version, about = "Chance-constrained maximum coverage with Pareto optimisation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One algorithm, one seed.
    Run {
        #[command(flatten)]
        opts: Opts,
        /// Run index fed to the seed mixer; index i reproduces run i of `experiment`.
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
    /// The full configuration matrix.
    Experiment {
        #[command(flatten)]
        opts: Opts,
    },
    /// Generate the sample matrix and write its manifest.
    GenSamples {
        #[command(flatten)]
        opts: Opts,
        /// Also write the full matrix in binary form.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Exhaustive Pareto front of a small instance.
    BruteForce {
        #[command(flatten)]
        opts: Opts,
    },
    /// Statistical tests on per-run result files.
    Stats {
        #[command(subcommand)]
        command: StatsCommand,
    },
    /// One run, writing its trace CSV.
    Trace {
        #[command(flatten)]
        opts: Opts,
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Destination file; defaults to `<out>/trace_<cell>_run<index>.csv`.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Record every evaluated offspring, not only accepted ones.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Kruskal-Wallis test on the best_f columns of two runs CSV files.
    Compare { a: PathBuf, b: PathBuf },
}

/// Flags mirror the keys of the config file and override it.
#[derive(Args)]
struct Opts {
    /// key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<String>,
    /// iid or degree (comma-separated list for `experiment`).
    #[arg(long)]
    weights: Option<String>,
    /// cheb, chen or sample.
    #[arg(long)]
    evaluator: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    /// half-n2, n2 or a number.
    #[arg(long)]
    bound: Option<String>,
    #[arg(long)]
    tsp: Option<String>,
    #[arg(long)]
    tmax: Option<String>,
    /// gsemo, sw or asw.
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long = "wsize-init")]
    wsize_init: Option<String>,
    /// Write 0 instead of wall time so outputs are byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

impl Opts {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p).with_context(|| format!("reading {}", p.display()))?,
            None => ExperimentConfig::default(),
        };
        let pairs = [
            ("graph", &self.graph),
            ("weights", &self.weights),
            ("evaluator", &self.evaluator),
            ("alpha", &self.alpha),
            ("bound", &self.bound),
            ("tsp", &self.tsp),
            ("tmax", &self.tmax),
            ("algo", &self.algo),
            ("runs", &self.runs),
            ("seed", &self.seed),
            ("out", &self.out),
            ("workers", &self.workers),
            ("wsize-init", &self.wsize_init),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.trace {
            cfg.trace = true;
        }
        if self.no_timing {
            cfg.record_timing = false;
        }
        if cfg.graph.as_os_str().is_empty() {
            bail!("no graph given (use --graph or a config file)");
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// The first cell of the matrix, for subcommands that take one configuration.
fn single_cell(cfg: &ExperimentConfig) -> Result<Cell> {
    let cells = cfg.cells();
    if cells.len() > 1 {
        log::warn!("{} cells configured, using the first", cells.len());
    }
    cells.into_iter().next().context("empty configuration matrix")
}

fn single_run(opts: &Opts, index: u64, trace: TraceMode, output: Option<PathBuf>) -> Result<()> {
    let cfg = opts.config()?;
    let cell = single_cell(&cfg)?;
    let mut instance = Instance::load(&cfg.graph, cfg.seed)?;
    let problem = instance.problem(&cell)?;
    let seed = run_seed(cfg.seed, index);
    let run_cfg = RunConfig::new(cell.algorithm, cfg.t_max, seed)
        .with_trace(trace)
        .with_initial_w_size(cfg.initial_w_size);
    let start = Instant::now();
    let outcome = algorithms::run(&problem, &run_cfg)?;
    let seconds = start.elapsed().as_secs_f64();
    let best = outcome.archive.best_feasible()?;
    println!("cell        {}", cell.label());
    println!("n           {}", problem.n());
    println!("B           {}", problem.bound());
    println!("seed        {seed}");
    println!("best_f      {}", best.f());
    println!("best_w      {}", best.w());
    println!("card        {}", best.cardinality());
    println!("popsize     {}", outcome.archive.len());
    println!("window_hits {}", outcome.window_hits);
    println!("w_size      {}", outcome.final_w_size);
    println!("seconds     {seconds:.3}");
    if trace != TraceMode::Off {
        let path = match output {
            Some(p) => p,
            None => {
                fs::create_dir_all(&cfg.out)?;
                cfg.out.join(format!("trace_{}_run{index}.csv", cell.label()))
            }
        };
        emit_trace(&outcome.trace, &path).with_context(|| format!("writing {}", path.display()))?;
        println!("trace       {}", path.display());
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run { opts, index } => {
            let mode = if opts.trace { TraceMode::Accepted } else { TraceMode::Off };
            single_run(&opts, index, mode, None)?;
        }
        Command::Trace { opts, index, output, all } => {
            let mode = if all { TraceMode::All } else { TraceMode::Accepted };
            single_run(&opts, index, mode, output)?;
        }
        Command::Experiment { opts } => {
            let cfg = opts.config()?;
            let results = experiment::run_experiment(&cfg)?;
            println!("{} cells written to {}", results.len(), cfg.out.join("results.csv").display());
        }
        Command::GenSamples { opts, dump } => {
            let cfg = opts.config()?;
            let cell = single_cell(&cfg)?;
            let mut instance = Instance::load(&cfg.graph, cfg.seed)?;
            let t_sp = cfg.t_sps[0];
            let model = instance.model(cell.weights)?;
            let matrix = instance.samples(cell.weights, t_sp)?;
            fs::create_dir_all(&cfg.out)?;
            let path = cfg.out.join(format!("samples_{}_tsp{t_sp}.manifest", cell.weights));
            SampleManifest::describe(&model, &matrix).write(&path)?;
            println!("manifest {}", path.display());
            if let Some(d) = dump {
                let mut w = BufWriter::new(File::create(&d)?);
                matrix.write_dump(&mut w)?;
                w.flush()?;
                println!("dump     {}", d.display());
            }
        }
        Command::BruteForce { opts } => {
            let cfg = opts.config()?;
            let cell = single_cell(&cfg)?;
            let mut instance = Instance::load(&cfg.graph, cfg.seed)?;
            let problem = instance.problem(&cell)?;
            println!("f,w,bits");
            for p in brute_force_front(&problem)? {
                let bits: String = p.bits.iter().map(|b| if *b { '1' } else { '0' }).collect();
                println!("{},{},{bits}", p.objectives.f, p.objectives.w);
            }
        }
        Command::Stats { command: StatsCommand::Compare { a, b } } => {
            let ga = read_best_f(&a).with_context(|| format!("reading {}", a.display()))?;
            let gb = read_best_f(&b).with_context(|| format!("reading {}", b.display()))?;
            let kw = kruskal_wallis(&[&ga, &gb])?;
            println!("H  {}", kw.h);
            println!("df {}", kw.df);
            println!("p  {}", kw.p_value);
        }
    }
    Ok(())
}
