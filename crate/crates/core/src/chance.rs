//! Chance-constraint evaluation: the tail-bound surrogates (one-sided
//! Chebyshev, Chernoff) and the sampling-based quantile weight, plus the
//! persisted per-element sample matrix that makes sampled runs comparable.

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::sync::Arc;

use bitvec::slice::BitSlice;
use thiserror::Error;

use crate::rng::{self, CounterStream};
use crate::weights::{WeightError, WeightKind, WeightModel};

#[derive(Debug, Error)]
pub enum ChanceError {
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    AlphaOutOfRange(f64),
    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error("quantile rank ceil({t_sp} * {alpha}) is outside 1..={t_sp}")]
    RankOutOfRange { t_sp: usize, alpha: f64 },
    #[error("selection has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("sample manifest: {0}")]
    Manifest(String),
    #[error("sample dump: {0}")]
    Dump(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn check_alpha(alpha: f64) -> Result<(), ChanceError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(ChanceError::AlphaOutOfRange(alpha))
    }
}

/// `E + sqrt((1 - alpha) * Var / alpha)`.
pub fn chebyshev_from_moments(expected: f64, variance: f64, alpha: f64) -> f64 {
    expected + ((1.0 - alpha) * variance / alpha).sqrt()
}

/// `E + sqrt(3 * d * |X| * ln(1 / alpha))`.
pub fn chernoff_from_moments(expected: f64, dispersion: f64, count: usize, alpha: f64) -> f64 {
    expected + (3.0 * dispersion * count as f64 * (1.0 / alpha).ln()).sqrt()
}

pub fn chebyshev_weight(model: &WeightModel, selection: &BitSlice, alpha: f64) -> Result<f64, ChanceError> {
    check_alpha(alpha)?;
    let e = crate::weights::expected_weight(model, selection)?;
    let v = crate::weights::variance(model, selection)?;
    Ok(chebyshev_from_moments(e, v, alpha))
}

pub fn chernoff_weight(model: &WeightModel, selection: &BitSlice, alpha: f64) -> Result<f64, ChanceError> {
    check_alpha(alpha)?;
    let e = crate::weights::expected_weight(model, selection)?;
    Ok(chernoff_from_moments(e, model.dispersion(), selection.count_ones(), alpha))
}

/// 1-based rank `k = ceil(t_sp * alpha)` of the returned sample total,
/// counted from the largest.
///
/// The product is nudged down by a relative `1e-12` before the ceiling so
/// that representation error (`10 * 0.3 = 3.0000000000000004`) does not
/// bump the rank.
pub fn quantile_rank(t_sp: usize, alpha: f64) -> Result<usize, ChanceError> {
    check_alpha(alpha)?;
    if t_sp == 0 {
        return Err(ChanceError::ZeroSamples);
    }
    let x = t_sp as f64 * alpha;
    let k = (x - x * 1e-12).ceil();
    if k < 1.0 || k > t_sp as f64 {
        return Err(ChanceError::RankOutOfRange { t_sp, alpha });
    }
    Ok(k as usize)
}

/// Returns the `k`-th largest value (1-based) by quickselect. Reorders
/// `values`.
pub fn kth_largest(values: &mut [f64], k: usize) -> f64 {
    assert!(k >= 1 && k <= values.len(), "rank {k} out of range for {} values", values.len());
    let (_, kth, _) = values.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
    *kth
}

/// Per-element draws: row `i` holds `t_sp` values from `Uniform[a_i - d, a_i + d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    n: usize,
    t_sp: usize,
    seed: u64,
    data: Vec<f64>,
}

impl SampleMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>, seed: u64) -> Result<Self, ChanceError> {
        let n = rows.len();
        let t_sp = rows.first().map_or(0, Vec::len);
        if t_sp == 0 {
            return Err(ChanceError::ZeroSamples);
        }
        if rows.iter().any(|r| r.len() != t_sp) {
            return Err(ChanceError::LengthMismatch { expected: t_sp, got: 0 });
        }
        Ok(SampleMatrix { n, t_sp, seed, data: rows.concat() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_sp(&self) -> usize {
        self.t_sp
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.t_sp..(i + 1) * self.t_sp]
    }

    /// 64-bit FNV-1a over the little-endian bytes of row 0.
    pub fn row0_checksum(&self) -> u64 {
        fnv1a(self.row(0).iter().flat_map(|x| x.to_le_bytes()))
    }

    /// Writes the full matrix: magic `CCSM`, u32 version, u64 n, u64 t_sp,
    /// u64 seed, then row-major f64 values, all little-endian.
    pub fn write_dump(&self, mut out: impl Write) -> Result<(), ChanceError> {
        if self.n * self.t_sp > MAX_DUMP_ENTRIES {
            return Err(ChanceError::Dump(format!(
                "{} entries exceed the dump limit of {MAX_DUMP_ENTRIES}",
                self.n * self.t_sp
            )));
        }
        let mut buf = Vec::with_capacity(DUMP_HEADER_LEN + 8 * self.data.len());
        buf.extend_from_slice(DUMP_MAGIC);
        buf.extend_from_slice(&DUMP_VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.n as u64).to_le_bytes());
        buf.extend_from_slice(&(self.t_sp as u64).to_le_bytes());
        buf.extend_from_slice(&self.seed.to_le_bytes());
        for x in &self.data {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn read_dump(mut input: impl Read) -> Result<Self, ChanceError> {
        let mut buf = Vec::new();
        input.read_to_end(&mut buf)?;
        if buf.len() < DUMP_HEADER_LEN || &buf[..4] != DUMP_MAGIC {
            return Err(ChanceError::Dump("bad magic or truncated header".into()));
        }
        let u64_at = |o: usize| u64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
        let version = u32::from_le_bytes(buf[4..8].try_into().unwrap());
        if version != DUMP_VERSION {
            return Err(ChanceError::Dump(format!("unsupported version {version}")));
        }
        let (n, t_sp, seed) = (u64_at(8) as usize, u64_at(16) as usize, u64_at(24));
        let body = &buf[DUMP_HEADER_LEN..];
        if t_sp == 0 || body.len() != 8 * n * t_sp {
            return Err(ChanceError::Dump(format!("body of {} bytes does not hold {n} x {t_sp} values", body.len())));
        }
        let data = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        Ok(SampleMatrix { n, t_sp, seed, data })
    }
}

const DUMP_MAGIC: &[u8; 4] = b"CCSM";
const DUMP_VERSION: u32 = 1;
const DUMP_HEADER_LEN: usize = 4 + 4 + 8 + 8 + 8;
pub const MAX_DUMP_ENTRIES: usize = 1_000_000;

fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Entry `(i, j)` is `(a_i - d) + 2d * u` where `u` is output `j` of the
/// counter stream keyed by `mix(seed, i)`.
pub fn generate_samples(model: &WeightModel, t_sp: usize, seed: u64) -> Result<SampleMatrix, ChanceError> {
    if t_sp == 0 {
        return Err(ChanceError::ZeroSamples);
    }
    let d = model.dispersion();
    let mut data = Vec::with_capacity(model.n() * t_sp);
    for (i, &a) in model.expected().iter().enumerate() {
        let stream = CounterStream::new(rng::mix(seed, i as u64));
        let low = a - d;
        data.extend((0..t_sp as u64).map(|j| low + 2.0 * d * stream.unit_at(j)));
    }
    Ok(SampleMatrix { n: model.n(), t_sp, seed, data })
}

/// Per-sample totals `w_s(j) = sum_i rows[i][j] * x_i` of one solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSumVector(Vec<f64>);

impl SampleSumVector {
    pub fn zeros(t_sp: usize) -> Self {
        SampleSumVector(vec![0.0; t_sp])
    }

    pub fn from_selection(matrix: &SampleMatrix, selection: &BitSlice) -> Result<Self, ChanceError> {
        if selection.len() != matrix.n {
            return Err(ChanceError::LengthMismatch { expected: matrix.n, got: selection.len() });
        }
        let mut v = Self::zeros(matrix.t_sp);
        for i in selection.iter_ones() {
            for (s, x) in v.0.iter_mut().zip(matrix.row(i)) {
                *s += x;
            }
        }
        Ok(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Adds (bit on) or subtracts (bit off) each flipped element's row.
    pub fn apply_flips(&mut self, matrix: &SampleMatrix, flipped: &[(usize, bool)]) {
        for &(i, on) in flipped {
            let row = matrix.row(i);
            if on {
                for (s, x) in self.0.iter_mut().zip(row) {
                    *s += x;
                }
            } else {
                for (s, x) in self.0.iter_mut().zip(row) {
                    *s -= x;
                }
            }
        }
    }

    pub(crate) fn clear(&mut self) {
        self.0.iter_mut().for_each(|s| *s = 0.0);
    }

    /// `k`-th largest total, using `scratch` as the selection buffer.
    pub fn kth_largest(&self, k: usize, scratch: &mut Vec<f64>) -> f64 {
        scratch.clear();
        scratch.extend_from_slice(&self.0);
        kth_largest(scratch, k)
    }
}

/// Sampling-based weight `W_sp(X)`: the `ceil(t_sp * alpha)`-th largest of
/// the sampled solution totals.
pub fn sampling_weight(selection: &BitSlice, matrix: &SampleMatrix, alpha: f64) -> Result<f64, ChanceError> {
    let k = quantile_rank(matrix.t_sp, alpha)?;
    let sums = SampleSumVector::from_selection(matrix, selection)?;
    Ok(sums.kth_largest(k, &mut Vec::new()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluatorKind {
    Chebyshev,
    Chernoff,
    Sampling,
}

impl EvaluatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EvaluatorKind::Chebyshev => "cheb",
            EvaluatorKind::Chernoff => "chen",
            EvaluatorKind::Sampling => "sample",
        }
    }
}

impl fmt::Display for EvaluatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EvaluatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cheb" | "chebyshev" => Ok(EvaluatorKind::Chebyshev),
            "chen" | "chernoff" => Ok(EvaluatorKind::Chernoff),
            "sample" | "sampling" => Ok(EvaluatorKind::Sampling),
            other => Err(format!("unknown evaluator {other:?} (expected cheb, chen or sample)")),
        }
    }
}

/// Running statistics of a selection that the surrogates are computed from.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SelectionMoments {
    pub count: usize,
    pub expected: f64,
}

/// A configured constraint-weight function over solutions.
#[derive(Debug, Clone)]
pub struct ChanceEvaluator {
    alpha: f64,
    method: Method,
}

#[derive(Debug, Clone)]
enum Method {
    Chebyshev,
    Chernoff,
    Sampling { matrix: Arc<SampleMatrix>, rank: usize },
}

impl ChanceEvaluator {
    pub fn chebyshev(alpha: f64) -> Result<Self, ChanceError> {
        check_alpha(alpha)?;
        Ok(ChanceEvaluator { alpha, method: Method::Chebyshev })
    }

    pub fn chernoff(alpha: f64) -> Result<Self, ChanceError> {
        check_alpha(alpha)?;
        Ok(ChanceEvaluator { alpha, method: Method::Chernoff })
    }

    pub fn sampling(alpha: f64, matrix: Arc<SampleMatrix>) -> Result<Self, ChanceError> {
        let rank = quantile_rank(matrix.t_sp, alpha)?;
        Ok(ChanceEvaluator { alpha, method: Method::Sampling { matrix, rank } })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kind(&self) -> EvaluatorKind {
        match self.method {
            Method::Chebyshev => EvaluatorKind::Chebyshev,
            Method::Chernoff => EvaluatorKind::Chernoff,
            Method::Sampling { .. } => EvaluatorKind::Sampling,
        }
    }

    pub fn samples(&self) -> Option<&Arc<SampleMatrix>> {
        match &self.method {
            Method::Sampling { matrix, .. } => Some(matrix),
            _ => None,
        }
    }

    /// Evaluates the weight from cached solution state. `sums` must be
    /// present for the sampling evaluator.
    pub fn weight(
        &self,
        model: &WeightModel,
        moments: &SelectionMoments,
        sums: Option<&SampleSumVector>,
        scratch: &mut Vec<f64>,
    ) -> f64 {
        if moments.count == 0 {
            return 0.0;
        }
        match &self.method {
            Method::Chebyshev => chebyshev_from_moments(
                moments.expected,
                moments.count as f64 * model.element_variance(),
                self.alpha,
            ),
            Method::Chernoff => chernoff_from_moments(moments.expected, model.dispersion(), moments.count, self.alpha),
            Method::Sampling { rank, .. } => {
                sums.expect("sampling evaluator needs sample sums").kth_largest(*rank, scratch)
            }
        }
    }

    /// From-scratch evaluation of a selection.
    pub fn weight_of(&self, model: &WeightModel, selection: &BitSlice) -> Result<f64, ChanceError> {
        match &self.method {
            Method::Chebyshev => chebyshev_weight(model, selection, self.alpha),
            Method::Chernoff => chernoff_weight(model, selection, self.alpha),
            Method::Sampling { matrix, .. } => sampling_weight(selection, matrix, self.alpha),
        }
    }
}

/// Compact record from which a sample matrix is regenerated.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleManifest {
    pub version: u32,
    pub kind: WeightKind,
    pub n: usize,
    pub dispersion: f64,
    pub t_sp: usize,
    pub seed: u64,
    pub generator: String,
    pub row0_checksum: u64,
}

impl SampleManifest {
    pub fn describe(model: &WeightModel, matrix: &SampleMatrix) -> Self {
        SampleManifest {
            version: 1,
            kind: model.kind(),
            n: matrix.n,
            dispersion: model.dispersion(),
            t_sp: matrix.t_sp,
            seed: matrix.seed,
            generator: rng::GENERATOR_ID.to_string(),
            row0_checksum: matrix.row0_checksum(),
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "version={}\nkind={}\nn={}\nd={}\nt_sp={}\nseed={}\ngenerator={}\nrow0_checksum={:016x}\n",
            self.version, self.kind, self.n, self.dispersion, self.t_sp, self.seed, self.generator, self.row0_checksum
        )
    }

    pub fn parse(text: &str) -> Result<Self, ChanceError> {
        let bad = |m: String| ChanceError::Manifest(m);
        let mut fields = std::collections::HashMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (k, v) = line.split_once('=').ok_or_else(|| bad(format!("not key=value: {line:?}")))?;
            fields.insert(k.trim(), v.trim());
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(format!("missing key {k}")));
        fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T, ChanceError> {
            v.parse().map_err(|_| ChanceError::Manifest(format!("bad value for {k}: {v:?}")))
        }
        Ok(SampleManifest {
            version: num("version", get("version")?)?,
            kind: get("kind")?.parse().map_err(bad)?,
            n: num("n", get("n")?)?,
            dispersion: num("d", get("d")?)?,
            t_sp: num("t_sp", get("t_sp")?)?,
            seed: num("seed", get("seed")?)?,
            generator: get("generator")?.to_string(),
            row0_checksum: u64::from_str_radix(get("row0_checksum")?, 16)
                .map_err(|_| bad("bad row0_checksum".into()))?,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), ChanceError> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, ChanceError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Regenerates the matrix and checks it against the recorded checksum.
    pub fn regenerate(&self, model: &WeightModel) -> Result<SampleMatrix, ChanceError> {
        if self.generator != rng::GENERATOR_ID {
            return Err(ChanceError::Manifest(format!("unknown generator {:?}", self.generator)));
        }
        if self.n != model.n() || self.kind != model.kind() || self.dispersion != model.dispersion() {
            return Err(ChanceError::Manifest("weight model does not match manifest".into()));
        }
        let matrix = generate_samples(model, self.t_sp, self.seed)?;
        if matrix.row0_checksum() != self.row0_checksum {
            return Err(ChanceError::Manifest("row 0 checksum mismatch".into()));
        }
        Ok(matrix)
    }
}
