#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use chance_pareto::chance::{chebyshev_from_moments, ChanceEvaluator};
use chance_pareto::weights::make_iid_model;
use chance_pareto::{Graph, Problem};
use rand::Rng;

pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// IID Chebyshev instance whose bound admits exactly `k` elements: `B` sits
/// halfway between the weights of `k` and `k + 1` elements.
pub fn iid_chebyshev_problem(graph: Graph, alpha: f64, k: usize) -> Problem {
    let n = graph.n();
    let a = n as f64;
    let w = |c: usize| chebyshev_from_moments(c as f64 * a, c as f64 * a * a / 3.0, alpha);
    let bound = 0.5 * (w(k) + w(k + 1));
    Problem::new(
        Arc::new(graph),
        Arc::new(make_iid_model(n).unwrap()),
        ChanceEvaluator::chebyshev(alpha).unwrap(),
        bound,
    )
    .unwrap()
}

pub struct KwCase {
    pub h: f64,
    pub p: f64,
    pub groups: Vec<Vec<f64>>,
}

/// Reference Kruskal-Wallis values frozen from scipy.stats.kruskal.
pub fn kw_reference() -> Vec<KwCase> {
    let text = include_str!("../data/kw_reference.txt");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (head, body) = l.split_once('|').unwrap();
            let mut nums = head.split_whitespace().map(|x| x.parse::<f64>().unwrap());
            let (h, p) = (nums.next().unwrap(), nums.next().unwrap());
            let groups = body
                .split(';')
                .map(|g| g.split_whitespace().map(|x| x.parse::<f64>().unwrap()).collect())
                .collect();
            KwCase { h, p, groups }
        })
        .collect()
}

/// `CHANCE_PARETO_GRQC`, else `data/ca-GrQc.txt` at the workspace root.
pub fn grqc_path() -> PathBuf {
    std::env::var_os("CHANCE_PARETO_GRQC").map(PathBuf::from).unwrap_or_else(|| {
        let root = Path::new(env!("CARGO_MANIFEST_DIR")).ancestors().nth(2).unwrap();
        root.join("data").join("ca-GrQc.txt")
    })
}
