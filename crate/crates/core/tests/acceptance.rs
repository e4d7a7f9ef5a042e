//! Acceptance criteria. Each criterion prints one `PASS` or `FAIL` line.
//!
//! Criteria 7 to 9 need the ca-GrQc collaboration graph, read from
//! `CHANCE_PARETO_GRQC` or `data/ca-GrQc.txt` at the workspace root. When it
//! is missing they are reported as `FAIL (input unavailable)` and do not set
//! the exit status; every other failure does.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;

use bitvec::prelude::*;
use chance_pareto::algorithms::{self, Algorithm, RunConfig, TraceMode};
use chance_pareto::brute::{brute_force_optimum, non_dominated};
use chance_pareto::chance::{
    chebyshev_weight, chernoff_from_moments, chernoff_weight, sampling_weight, ChanceEvaluator, EvaluatorKind,
    SampleMatrix,
};
use chance_pareto::experiment::{run_seed, BoundSpec, Cell, Instance};
use chance_pareto::pareto::{mutate, weakly_dominates, ParetoArchive};
use chance_pareto::stats::kruskal_wallis;
use chance_pareto::weights::{make_iid_model, WeightKind, WeightModel};
use chance_pareto::{Graph, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

enum Outcome {
    Pass(String),
    Fail(String),
    Unavailable(String),
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * y.abs().max(1.0)
}

fn formula_exactness() -> Outcome {
    let iid10 = make_iid_model(10).unwrap();
    let three = bits![1, 1, 1, 0, 0, 0, 0, 0, 0, 0];
    let single = WeightModel::new(vec![100.0], 30.0, WeightKind::Iid).unwrap();

    let cheb1 = chebyshev_weight(&iid10, three, 0.1).unwrap();
    let cheb2 = chebyshev_weight(&single, bits![1], 0.25).unwrap();
    let chen1 = chernoff_weight(&iid10, three, 0.1).unwrap();
    // Four elements with d = 3 cannot have E = 10 under d <= a_i, so this
    // case goes through the moment form.
    let chen2 = chernoff_from_moments(10.0, 3.0, 4, (-1.0f64).exp());

    let chen1_closed = 30.0 + (90.0 * 10f64.ln()).sqrt();
    let ok = rel_close(cheb1, 60.0, 1e-9)
        && rel_close(cheb2, 130.0, 1e-9)
        && rel_close(chen1, chen1_closed, 1e-9)
        && (chen1 - 44.39564).abs() <= 1e-4
        && rel_close(chen2, 16.0, 1e-9);
    check(ok, format!("cheb {cheb1}, {cheb2}; chen {chen1}, {chen2}"))
}

fn sampling_quantile_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a3d);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=20);
        let t_sp = rng.random_range(1..=64usize);
        let rows: Vec<Vec<f64>> =
            (0..n).map(|_| (0..t_sp).map(|_| rng.random_range(0.0..100.0)).collect()).collect();
        let matrix = SampleMatrix::from_rows(rows.clone(), 0).unwrap();
        let sel: BitVec = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let m = rng.random_range(1..1000u64);
        let alpha = m as f64 / 1000.0;

        let mut totals: Vec<f64> = (0..t_sp)
            .map(|j| sel.iter_ones().fold(0.0, |s, i| s + rows[i][j]))
            .collect();
        totals.sort_by(|a, b| b.total_cmp(a));
        let k = (t_sp as u64 * m).div_ceil(1000) as usize;
        let expected = totals[k - 1];

        if sampling_weight(&sel, &matrix, alpha).unwrap() != expected {
            mismatches += 1;
        }
    }
    check(mismatches == 0, format!("{mismatches} mismatches in 1000 triples"))
}

fn archive_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa7c4);
    let mut failures = Vec::new();
    for stream in 0..200 {
        let n = rng.random_range(2..=12);
        let graph = Arc::new(common::random_graph(n, rng.random_range(0.1..0.6), &mut rng));
        let model = Arc::new(make_iid_model(n).unwrap());
        let alpha = rng.random_range(0.05..0.5);
        let evaluator = match stream % 3 {
            0 => ChanceEvaluator::chebyshev(alpha).unwrap(),
            1 => ChanceEvaluator::chernoff(alpha).unwrap(),
            _ => {
                let t_sp = rng.random_range(1..=32);
                let a = n as f64;
                let rows = (0..n)
                    .map(|_| (0..t_sp).map(|_| rng.random_range(0.0..2.0 * a)).collect())
                    .collect();
                ChanceEvaluator::sampling(alpha, Arc::new(SampleMatrix::from_rows(rows, 0).unwrap())).unwrap()
            }
        };
        let bound = rng.random_range(0.1..1.0) * (n * n) as f64;
        let problem = Problem::new(graph, model, evaluator, bound).unwrap();

        let len = rng.random_range(1..=500);
        let mut pool: Vec<BitVec> = Vec::new();
        let mut inserted = Vec::new();
        let mut archive = ParetoArchive::new();
        for step in 0..len {
            let bits = if !pool.is_empty() && rng.random_bool(0.2) {
                pool[rng.random_range(0..pool.len())].clone()
            } else {
                let b: BitVec = (0..n).map(|_| rng.random_bool(0.3)).collect();
                pool.push(b.clone());
                b
            };
            let scored = problem.score(bits.clone()).unwrap();
            inserted.push((bits, scored.objectives()));
            archive.insert(scored);

            let pts = archive.points();
            let mut fs: Vec<i64> = pts.iter().map(|p| p.f).collect();
            fs.dedup();
            let mutual = pts
                .iter()
                .enumerate()
                .all(|(i, &x)| pts.iter().enumerate().all(|(j, &y)| i == j || !weakly_dominates(x, y)));
            if archive.check_invariants().is_err() || !mutual || fs.len() != pts.len() {
                failures.push(format!("stream {stream} step {step}: invariant broken"));
                break;
            }
        }

        let oracle: Vec<_> = non_dominated(&inserted).into_iter().map(|(_, o)| o).collect();
        if archive.points() != oracle {
            failures.push(format!("stream {stream}: archive {:?} vs oracle {oracle:?}", archive.points()));
        }
        for m in archive.members() {
            if !inserted.iter().any(|(b, o)| b.as_bitslice() == m.bits() && *o == m.objectives()) {
                failures.push(format!("stream {stream}: member not among inserted solutions"));
            }
        }
    }
    check(
        failures.is_empty(),
        failures.first().cloned().unwrap_or_else(|| "200 streams match the exact front".into()),
    )
}

fn small_instance_convergence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    let runs_per_graph = 5;
    let (mut hits, mut total) = (0, 0);
    for g in 0..20 {
        let n = rng.random_range(6..=14);
        let graph = common::random_graph(n, rng.random_range(0.15..0.45), &mut rng);
        let k = rng.random_range(2..=4);
        let problem = common::iid_chebyshev_problem(graph, 0.1, k);
        let optimum = brute_force_optimum(&problem).unwrap();
        let results: Vec<i64> = (0..runs_per_graph)
            .into_par_iter()
            .map(|r| {
                let seed = run_seed(g, r);
                let out = algorithms::run(&problem, &RunConfig::new(Algorithm::Gsemo, 100_000, seed)).unwrap();
                out.archive.best_feasible().unwrap().f()
            })
            .collect();
        total += results.len();
        hits += results.iter().filter(|&&f| f == optimum).count();
    }
    let share = hits as f64 / total as f64;
    check(share >= 0.95, format!("{hits}/{total} runs reach the optimum ({:.1}%)", 100.0 * share))
}

fn binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

fn mutation_distribution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e7);
    let draws = 100_000u64;
    let parent = bitvec![0; 8];
    let mut counts = [0u64; 9];
    for _ in 0..draws {
        counts[mutate(&parent, &mut rng).len()] += 1;
    }
    // Merge the upper tail until every bin expects at least 5 draws.
    let mut observed = Vec::new();
    let mut expected = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for k in (0..=8u64).rev() {
        o_acc += counts[k as usize] as f64;
        e_acc += draws as f64 * binomial_pmf(8, k, 1.0 / 8.0);
        if e_acc >= 5.0 {
            observed.push(o_acc);
            expected.push(e_acc);
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 {
        *observed.last_mut().unwrap() += o_acc;
        *expected.last_mut().unwrap() += e_acc;
    }
    let chi2: f64 = observed.iter().zip(&expected).map(|(o, e)| (o - e) * (o - e) / e).sum();
    let df = (observed.len() - 1) as f64;
    let critical = ChiSquared::new(df).unwrap().inverse_cdf(1.0 - 1e-3);

    let pair = bitvec![0; 2];
    let none = (0..draws).filter(|_| mutate(&pair, &mut rng).is_empty()).count();
    let p_none = none as f64 / draws as f64;

    check(
        chi2 < critical && (p_none - 0.25).abs() <= 0.01,
        format!("chi2 {chi2:.3} < {critical:.3} (df {df}); P(no flip, n=2) = {p_none:.4}"),
    )
}

fn kruskal_wallis_reference() -> Outcome {
    let hand = kruskal_wallis(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], &[7.0, 8.0, 9.0]]).unwrap();
    let mut ok = (hand.h - 7.2).abs() <= 1e-4 && (hand.p_value - 0.02732).abs() <= 1e-4;
    let mut worst: f64 = 0.0;
    let cases = common::kw_reference();
    for case in &cases {
        let groups: Vec<&[f64]> = case.groups.iter().map(Vec::as_slice).collect();
        let kw = kruskal_wallis(&groups).unwrap();
        let err = (kw.h - case.h).abs().max((kw.p_value - case.p).abs());
        worst = worst.max(err);
    }
    ok &= cases.len() == 20 && worst <= 1e-6;
    check(ok, format!("hand H {} p {:.6}; {} reference datasets, max error {worst:.2e}", hand.h, hand.p_value, cases.len()))
}

struct AlgoStats {
    mean_f: f64,
    mean_popsize: f64,
    /// Accepted insertions after `0.1 * t_max`, and those whose parent came
    /// from the window.
    late_accepted: u64,
    late_from_window: u64,
}

struct GrqcRuns {
    n: usize,
    stats: BTreeMap<&'static str, AlgoStats>,
}

fn run_grqc(path: &Path) -> Result<GrqcRuns, String> {
    if !path.exists() {
        return Err(format!("input unavailable: {} not found (set CHANCE_PARETO_GRQC)", path.display()));
    }
    let t_max = 1_500_000u64;
    let runs = 10u64;
    let master = 2024;
    let mut instance = Instance::load(path, master).map_err(|e| e.to_string())?;
    let n = instance.graph.n();
    let mut stats = BTreeMap::new();
    for algorithm in [Algorithm::Gsemo, Algorithm::SlidingWindow, Algorithm::AdaptiveSlidingWindow] {
        let cell = Cell {
            algorithm,
            evaluator: EvaluatorKind::Sampling,
            weights: WeightKind::Iid,
            alpha: 0.1,
            bound: BoundSpec::HalfNSquared,
            t_sp: 250,
        };
        let problem = instance.problem(&cell).map_err(|e| e.to_string())?;
        let per_run: Vec<(i64, usize, u64, u64)> = (0..runs)
            .into_par_iter()
            .map(|i| {
                let cfg = RunConfig::new(algorithm, t_max, run_seed(master, i)).with_trace(TraceMode::Accepted);
                let out = algorithms::run(&problem, &cfg).unwrap();
                let late: Vec<_> = out.trace.iter().filter(|r| r.t * 10 > t_max).collect();
                let from_window = late.iter().filter(|r| r.from_window).count() as u64;
                (out.archive.best_feasible().unwrap().f(), out.archive.len(), late.len() as u64, from_window)
            })
            .collect();
        let k = per_run.len() as f64;
        stats.insert(
            algorithm.as_str(),
            AlgoStats {
                mean_f: per_run.iter().map(|r| r.0 as f64).sum::<f64>() / k,
                mean_popsize: per_run.iter().map(|r| r.1 as f64).sum::<f64>() / k,
                late_accepted: per_run.iter().map(|r| r.2).sum(),
                late_from_window: per_run.iter().map(|r| r.3).sum(),
            },
        );
    }
    Ok(GrqcRuns { n, stats })
}

fn grqc_reproduction(runs: &Result<GrqcRuns, String>) -> Outcome {
    let runs = match runs {
        Ok(r) => r,
        Err(e) => return Outcome::Unavailable(e.clone()),
    };
    let asw = runs.stats["asw"].mean_f;
    let gsemo = runs.stats["gsemo"].mean_f;
    let gap_ok = asw - gsemo >= 300.0;
    let (range_ok, note) = if runs.n == 4158 {
        (
            (4050.0..=4158.0).contains(&asw) && (3580.0..=3710.0).contains(&gsemo),
            "gap and ranges checked",
        )
    } else {
        (true, "n differs from 4158, gap only")
    };
    check(gap_ok && range_ok, format!("n {}: ASW {asw:.1}, GSEMO {gsemo:.1}, gap {:.1}; {note}", runs.n, asw - gsemo))
}

fn window_behaviour(runs: &Result<GrqcRuns, String>) -> Outcome {
    let runs = match runs {
        Ok(r) => r,
        Err(e) => return Outcome::Unavailable(e.clone()),
    };
    let share = |a: &str| {
        let s = &runs.stats[a];
        s.late_from_window as f64 / s.late_accepted.max(1) as f64
    };
    let (asw, sw) = (share("asw"), share("sw"));
    check(asw > 0.5 && sw < 0.05, format!("late from-window share: ASW {:.1}%, SW {:.1}%", 100.0 * asw, 100.0 * sw))
}

fn archive_size_ordering(runs: &Result<GrqcRuns, String>) -> Outcome {
    let runs = match runs {
        Ok(r) => r,
        Err(e) => return Outcome::Unavailable(e.clone()),
    };
    let (asw, gsemo) = (runs.stats["asw"].mean_popsize, runs.stats["gsemo"].mean_popsize);
    check(asw > gsemo, format!("mean archive size ASW {asw:.1}, GSEMO {gsemo:.1}"))
}

fn write_small_graph(path: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let g: Graph = common::random_graph(40, 0.08, &mut rng);
    let mut text = String::from("# random test graph\n");
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            if (v as usize) > u {
                text.push_str(&format!("{u}\t{v}\n"));
            }
        }
    }
    fs::write(path, text).unwrap();
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g40.txt");
    write_small_graph(&graph);
    let run = |out: &str| {
        let output = Command::new(env!("CARGO_BIN_EXE_chance-pareto"))
            .args(["experiment", "--graph"])
            .arg(&graph)
            .args(["--algo", "gsemo,sw,asw", "--evaluator", "cheb,sample", "--tsp", "50"])
            .args(["--tmax", "20000", "--runs", "4", "--workers", "3", "--seed", "99"])
            .args(["--trace", "--no-timing", "--out"])
            .arg(dir.path().join(out))
            .env("RUST_LOG", "warn")
            .output()
            .unwrap();
        assert!(output.status.success(), "experiment failed: {}", String::from_utf8_lossy(&output.stderr));
        let mut files = BTreeMap::new();
        for entry in fs::read_dir(dir.path().join(out)).unwrap() {
            let entry = entry.unwrap();
            files.insert(entry.file_name(), fs::read(entry.path()).unwrap());
        }
        files
    };
    let (a, b) = (run("a"), run("b"));
    let traces = a.keys().filter(|k| k.to_string_lossy().starts_with("trace_")).count();
    let has_results = a.contains_key(std::ffi::OsStr::new("results.csv"));
    check(
        a == b && has_results && traces == 24,
        format!("{} files compared, {traces} traces, identical: {}", a.len(), a == b),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let grqc = std::cell::OnceCell::new();
    let grqc_runs = || grqc.get_or_init(|| run_grqc(&common::grqc_path()));

    let criteria: Vec<Criterion> = vec![
        ("formula exactness", Box::new(formula_exactness)),
        ("sampling quantile oracle", Box::new(sampling_quantile_oracle)),
        ("archive correctness", Box::new(archive_correctness)),
        ("small-instance convergence", Box::new(small_instance_convergence)),
        ("mutation distribution", Box::new(mutation_distribution)),
        ("kruskal-wallis", Box::new(kruskal_wallis_reference)),
        ("ca-GrQc reproduction", Box::new(|| grqc_reproduction(grqc_runs()))),
        ("window behaviour", Box::new(|| window_behaviour(grqc_runs()))),
        ("archive size ordering", Box::new(|| archive_size_ordering(grqc_runs()))),
        ("determinism", Box::new(determinism)),
    ];

    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Outcome::Pass(d) => println!("PASS criterion {:>2} {name}: {d}", i + 1),
            Outcome::Fail(d) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {d}", i + 1);
            }
            Outcome::Unavailable(d) => println!("FAIL criterion {:>2} {name}: {d}", i + 1),
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
