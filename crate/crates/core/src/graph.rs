//! Undirected graphs read from SNAP-style edge lists, and the coverage
//! objective `N(V')`: the number of vertices that are selected or adjacent
//! to a selected vertex.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use bitvec::slice::BitSlice;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("failed to read graph file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed edge {text:?}")]
    Malformed { line: usize, text: String },
    #[error("empty edge set")]
    EmptyEdgeSet,
    #[error("selection has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("cover counter underflow at vertex {0}")]
    CounterUnderflow(usize),
}

/// Immutable undirected simple graph with dense vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices. Self-loops are dropped and duplicate
    /// edges collapsed; neighbour lists come out sorted.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut sets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u == v {
                continue;
            }
            sets[u].insert(v as u32);
            sets[v].insert(u as u32);
        }
        let adjacency: Vec<Vec<u32>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Graph { adjacency, edge_count }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter().map(Vec::len)
    }

    fn check_len(&self, len: usize) -> Result<(), GraphError> {
        if len != self.n() {
            return Err(GraphError::LengthMismatch { expected: self.n(), got: len });
        }
        Ok(())
    }
}

/// Parses an edge list. Lines starting with `#` are comments; every other
/// non-blank line holds two whitespace-separated non-negative integer ids.
/// Ids are remapped to `0..n` in ascending order of the original id.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let malformed = || GraphError::Malformed { line: idx + 1, text: line.to_string() };
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(malformed());
        };
        let a: u64 = a.parse().map_err(|_| malformed())?;
        let b: u64 = b.parse().map_err(|_| malformed())?;
        raw.push((a, b));
    }
    if raw.is_empty() {
        return Err(GraphError::EmptyEdgeSet);
    }

    let mut index: BTreeMap<u64, usize> = BTreeMap::new();
    for &(a, b) in &raw {
        index.insert(a, 0);
        index.insert(b, 0);
    }
    for (dense, slot) in index.values_mut().enumerate() {
        *slot = dense;
    }
    let edges = raw.iter().map(|(a, b)| (index[a], index[b]));
    Ok(Graph::from_edges(index.len(), edges))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let text = fs::read_to_string(path.as_ref())?;
    let graph = parse_edge_list(&text)?;
    log::info!(
        "loaded {}: n = {}, edges = {}",
        path.as_ref().display(),
        graph.n(),
        graph.edge_count()
    );
    Ok(graph)
}

/// Number of vertices covered by `selection`, computed from scratch.
pub fn coverage(graph: &Graph, selection: &BitSlice) -> Result<usize, GraphError> {
    graph.check_len(selection.len())?;
    let mut covered = vec![false; graph.n()];
    for v in selection.iter_ones() {
        covered[v] = true;
        for &u in graph.neighbors(v) {
            covered[u as usize] = true;
        }
    }
    Ok(covered.into_iter().filter(|&c| c).count())
}

/// Per-vertex cover counters supporting incremental coverage updates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageState {
    cover_count: Vec<u32>,
    covered_total: usize,
}

impl CoverageState {
    /// State for the empty selection.
    pub fn empty(n: usize) -> Self {
        CoverageState { cover_count: vec![0; n], covered_total: 0 }
    }

    pub fn from_selection(graph: &Graph, selection: &BitSlice) -> Result<Self, GraphError> {
        graph.check_len(selection.len())?;
        let mut state = Self::empty(graph.n());
        for v in selection.iter_ones() {
            state.add(graph, v);
        }
        Ok(state)
    }

    pub fn covered_total(&self) -> usize {
        self.covered_total
    }

    pub fn cover_count(&self) -> &[u32] {
        &self.cover_count
    }

    fn add(&mut self, graph: &Graph, v: usize) {
        self.bump(v);
        for &u in graph.neighbors(v) {
            self.bump(u as usize);
        }
    }

    #[inline]
    fn bump(&mut self, u: usize) {
        let c = &mut self.cover_count[u];
        if *c == 0 {
            self.covered_total += 1;
        }
        *c += 1;
    }

    fn remove(&mut self, graph: &Graph, v: usize) -> Result<(), GraphError> {
        self.drop_one(v)?;
        for &u in graph.neighbors(v) {
            self.drop_one(u as usize)?;
        }
        Ok(())
    }

    #[inline]
    fn drop_one(&mut self, u: usize) -> Result<(), GraphError> {
        let c = &mut self.cover_count[u];
        if *c == 0 {
            return Err(GraphError::CounterUnderflow(u));
        }
        *c -= 1;
        if *c == 0 {
            self.covered_total -= 1;
        }
        Ok(())
    }

    /// Applies `(vertex, new_bit)` flips. Each flip must actually change the
    /// vertex's membership relative to the selection the state describes.
    pub fn apply_flips(&mut self, graph: &Graph, flipped: &[(usize, bool)]) -> Result<(), GraphError> {
        for &(v, on) in flipped {
            if on {
                self.add(graph, v);
            } else {
                self.remove(graph, v)?;
            }
        }
        Ok(())
    }
}
