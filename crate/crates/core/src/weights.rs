//! Uniform stochastic element weights: element `i` weighs
//! `Uniform[a_i - d, a_i + d]` with a dispersion `d` shared by all elements.

use std::fmt;

use bitvec::slice::BitSlice;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    #[error("weight model needs at least one element")]
    Empty,
    #[error("dispersion must be positive and at most every expected weight (d = {d}, min a_i = {min_expected})")]
    InvalidDispersion { d: f64, min_expected: f64 },
    #[error("selection has length {got}, model has {expected} elements")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    /// Identical expectation and dispersion, `a = d = n`.
    Iid,
    /// `a_i = (n + D(v_i))^5 / n^4`, `d = n`.
    DegreeBased,
}

impl WeightKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightKind::Iid => "iid",
            WeightKind::DegreeBased => "degree",
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for WeightKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iid" => Ok(WeightKind::Iid),
            "degree" => Ok(WeightKind::DegreeBased),
            other => Err(format!("unknown weight kind {other:?} (expected iid or degree)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightModel {
    expected: Vec<f64>,
    dispersion: f64,
    kind: WeightKind,
}

impl WeightModel {
    pub fn new(expected: Vec<f64>, dispersion: f64, kind: WeightKind) -> Result<Self, WeightError> {
        if expected.is_empty() {
            return Err(WeightError::Empty);
        }
        let min_expected = expected.iter().copied().fold(f64::INFINITY, f64::min);
        if !(dispersion > 0.0 && dispersion <= min_expected) {
            return Err(WeightError::InvalidDispersion { d: dispersion, min_expected });
        }
        Ok(WeightModel { expected, dispersion, kind })
    }

    pub fn n(&self) -> usize {
        self.expected.len()
    }

    pub fn expected(&self) -> &[f64] {
        &self.expected
    }

    pub fn dispersion(&self) -> f64 {
        self.dispersion
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Variance contributed by one element, `d^2 / 3`.
    pub fn element_variance(&self) -> f64 {
        self.dispersion * self.dispersion / 3.0
    }

    fn check_len(&self, len: usize) -> Result<(), WeightError> {
        if len != self.n() {
            return Err(WeightError::LengthMismatch { expected: self.n(), got: len });
        }
        Ok(())
    }
}

pub fn make_iid_model(n: usize) -> Result<WeightModel, WeightError> {
    if n == 0 {
        return Err(WeightError::Empty);
    }
    let a = n as f64;
    WeightModel::new(vec![a; n], a, WeightKind::Iid)
}

pub fn make_degree_model(graph: &Graph) -> Result<WeightModel, WeightError> {
    let n = graph.n();
    if n == 0 {
        return Err(WeightError::Empty);
    }
    let nf = n as f64;
    let expected = graph.degrees().map(|deg| (nf + deg as f64).powi(5) / nf.powi(4)).collect();
    WeightModel::new(expected, nf, WeightKind::DegreeBased)
}

pub fn make_model(kind: WeightKind, graph: &Graph) -> Result<WeightModel, WeightError> {
    match kind {
        WeightKind::Iid => make_iid_model(graph.n()),
        WeightKind::DegreeBased => make_degree_model(graph),
    }
}

/// `E[W(X)]`: the sum of expected weights over selected elements.
pub fn expected_weight(model: &WeightModel, selection: &BitSlice) -> Result<f64, WeightError> {
    model.check_len(selection.len())?;
    Ok(selection.iter_ones().map(|i| model.expected[i]).sum())
}

/// `Var[W(X)]`: `d^2 / 3` per selected element.
pub fn variance(model: &WeightModel, selection: &BitSlice) -> Result<f64, WeightError> {
    model.check_len(selection.len())?;
    Ok(selection.count_ones() as f64 * model.element_variance())
}
