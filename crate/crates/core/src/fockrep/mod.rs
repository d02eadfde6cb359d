//! Truncated Fock representations as exact sparse matrices.
//!
//! The Fock space `ℓ²(F_n⁺)` is cut at words of length `L`; basis vectors
//! `ξ_w` are ordered length-lexicographically. Identities are checked on the
//! interior `|w| < L` only, where the truncated creation operators still act
//! as on the full space.

mod covering_rep;
mod sparse;
mod tail;

use std::collections::HashMap;

use serde::Serialize;

use crate::covering::{Cylinder, InfiniteTailSpec};
use crate::dynsys::FiniteDynSys;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::word::Word;

pub use covering_rep::{check_eval_adjoint, check_eval_multiplicative, check_rho_intertwine, covering_points, CoveringRep};
pub use sparse::SparseMatrix;
pub use tail::{tail_multiplicity, TailMultiplicityReport};

pub const DEFAULT_MAX_DIM: usize = 100_000;
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// `Σ_{ℓ=0}^L n^ℓ`, saturating.
pub fn fock_dimension(n: usize, depth: usize) -> usize {
    let mut total: usize = 0;
    let mut level: usize = 1;
    for _ in 0..=depth {
        total = total.saturating_add(level);
        level = level.saturating_mul(n);
    }
    total
}

#[derive(Clone, Debug)]
pub struct FockBasis {
    n: usize,
    depth: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl FockBasis {
    pub fn new(n: usize, depth: usize, max_dim: usize) -> Result<Self> {
        let dim = fock_dimension(n, depth);
        if dim > max_dim {
            return Err(Error::GuardExceeded { size: dim, guard: max_dim });
        }
        let words = Word::up_to_length(n, depth);
        let index = words.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        Ok(FockBasis { n, depth, words, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, idx: usize) -> &Word {
        &self.words[idx]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Indices of `ξ_w` with `|w| < L`.
    pub fn interior(&self) -> Vec<usize> {
        self.columns_where(|w| w.len() < self.depth)
    }

    pub fn columns_where(&self, pred: impl Fn(&Word) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&k| pred(&self.words[k])).collect()
    }

    /// The truncated creation operator `ξ_w ↦ ξ_{iw}`, zero on `|w| = L`.
    pub fn shift(&self, i: usize) -> SparseMatrix {
        let dim = self.dim();
        let mut m = SparseMatrix::zeros(dim, dim);
        for (c, w) in self.words.iter().enumerate() {
            if w.len() < self.depth {
                m.add_at(self.index[&w.prepend(i)], c, Scalar::one());
            }
        }
        m
    }

    pub fn diagonal(&self, value: impl Fn(usize, &Word) -> Scalar) -> SparseMatrix {
        let dim = self.dim();
        SparseMatrix::from_triplets(dim, dim, self.words.iter().enumerate().map(|(k, w)| (k, k, value(k, w))))
    }
}

#[derive(Clone, Debug)]
pub enum RepKind {
    Orbit { x: usize },
    /// Window `S = path.depth()` of the tail beginning with `path`.
    Tail { path: Cylinder },
}

/// Window `s` of a tail representation: `H_s` sits inside the truncated
/// `H_S` through `ξ_v ↦ ξ_{v i_s ⋯ i_{S-1}}`.
#[derive(Clone, Debug)]
pub struct EmbeddedWindow {
    pub window: usize,
    pub point: usize,
    pub suffix: Word,
    /// `embedding[k]` is the image of the `k`-th basis vector of the
    /// depth-`L - (S - s)` truncation of `H_s`.
    pub embedding: Vec<usize>,
}

/// `λ_x` truncated at depth `L`, or the tail representation realized as
/// `λ_{x_S}` with marked window subspaces.
#[derive(Clone, Debug)]
pub struct TruncatedRep {
    sys: FiniteDynSys,
    kind: RepKind,
    point: usize,
    basis: FockBasis,
    shifts: Vec<SparseMatrix>,
    windows: Vec<EmbeddedWindow>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct FockReport {
    pub check: String,
    pub max_deviation: f64,
    pub interior_dim: usize,
    pub pass: bool,
}

impl FockReport {
    pub fn new(check: impl Into<String>, max_deviation: f64, interior_dim: usize, exact: bool) -> Self {
        let pass = if exact { max_deviation == 0.0 } else { max_deviation <= FLOAT_TOLERANCE };
        FockReport { check: check.into(), max_deviation, interior_dim, pass }
    }
}

impl TruncatedRep {
    pub fn orbit(sys: &FiniteDynSys, x: usize, depth: usize) -> Result<Self> {
        Self::orbit_with_guard(sys, x, depth, DEFAULT_MAX_DIM)
    }

    pub fn orbit_with_guard(sys: &FiniteDynSys, x: usize, depth: usize, max_dim: usize) -> Result<Self> {
        if x >= sys.m() {
            return Err(Error::UnknownPoint(x.to_string()));
        }
        if depth < 1 {
            return Err(Error::Precondition("Fock depth L must be at least 1".into()));
        }
        let basis = FockBasis::new(sys.n(), depth, max_dim)?;
        let shifts = (0..sys.n()).map(|i| basis.shift(i)).collect();
        Ok(TruncatedRep { sys: sys.clone(), kind: RepKind::Orbit { x }, point: x, basis, shifts, windows: Vec::new() })
    }

    pub fn tail(sys: &FiniteDynSys, spec: &InfiniteTailSpec, window: usize, depth: usize) -> Result<Self> {
        Self::tail_with_guard(sys, &spec.cylinder(window), depth, DEFAULT_MAX_DIM)
    }

    /// The window-`S` tail representation only sees `x_0, …, x_S`, so a
    /// depth-`S` cylinder determines it; this also covers tails of a
    /// truncated system whose continuation was cut off.
    pub fn tail_with_guard(sys: &FiniteDynSys, path: &Cylinder, depth: usize, max_dim: usize) -> Result<Self> {
        if path.vertices().iter().any(|&x| x >= sys.m()) || !path.is_consistent(sys) {
            return Err(Error::InvalidTail(format!("{path:?} is not a backward path")));
        }
        let window = path.depth();
        let x_s = path.vertex(window);
        let mut rep = Self::orbit_with_guard(sys, x_s, depth, max_dim)?;
        for s in 0..window {
            let suffix = Word((s..window).map(|k| path.label(k) as u8).collect());
            let embedding = if window - s > depth {
                Vec::new()
            } else {
                Word::up_to_length(sys.n(), depth - (window - s))
                    .iter()
                    .map(|v| rep.basis.index_of(&v.concat(&suffix)).expect("embedded word fits"))
                    .collect()
            };
            rep.windows.push(EmbeddedWindow { window: s, point: path.vertex(s), suffix, embedding });
        }
        rep.kind = RepKind::Tail { path: path.clone() };
        Ok(rep)
    }

    pub fn system(&self) -> &FiniteDynSys {
        &self.sys
    }

    pub fn kind(&self) -> &RepKind {
        &self.kind
    }

    /// The point whose orbit carries the representation.
    pub fn point(&self) -> usize {
        self.point
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn depth(&self) -> usize {
        self.basis.depth()
    }

    pub fn windows(&self) -> &[EmbeddedWindow] {
        &self.windows
    }

    pub fn interior(&self) -> Vec<usize> {
        self.basis.interior()
    }

    /// `σ_w(x)` for the `k`-th basis word.
    pub fn orbit_point(&self, k: usize) -> usize {
        self.sys.apply_word(self.basis.word(k), self.point)
    }

    /// `λ(f) = diag(f(σ_w(x)))` for `f` given by its values on `X`.
    pub fn function(&self, f: &[Scalar]) -> SparseMatrix {
        assert_eq!(f.len(), self.sys.m(), "function must have one value per point");
        self.basis.diagonal(|k, _| f[self.orbit_point(k)].clone())
    }

    pub fn shift(&self, i: usize) -> &SparseMatrix {
        &self.shifts[i]
    }

    /// Point indicators `δ_y` plus the function `y ↦ y + 1`; they span `C(X)`.
    pub fn spanning_functions(&self) -> Vec<Vec<Scalar>> {
        spanning_functions(&self.sys)
    }
}

pub(crate) fn spanning_functions(sys: &FiniteDynSys) -> Vec<Vec<Scalar>> {
    let m = sys.m();
    let mut out: Vec<Vec<Scalar>> =
        (0..m).map(|y| (0..m).map(|x| Scalar::from_int((x == y) as i64)).collect()).collect();
    out.push((0..m).map(|x| Scalar::from_int(x as i64 + 1)).collect());
    out
}

fn all_exact(fs: &[Vec<Scalar>]) -> bool {
    fs.iter().flatten().all(Scalar::is_exact)
}

/// `λ(f) L_i = L_i λ(f∘σ_i)` on interior columns.
pub fn check_covariance(rep: &TruncatedRep, family: &[Vec<Scalar>]) -> FockReport {
    let interior = rep.interior();
    let sys = rep.system();
    let mut worst: f64 = 0.0;
    for f in family {
        let lf = rep.function(f);
        for i in 0..sys.n() {
            let f_sigma: Vec<Scalar> = (0..sys.m()).map(|y| f[sys.apply(i, y)].clone()).collect();
            let lhs = lf.mul(rep.shift(i));
            let rhs = rep.shift(i).mul(&rep.function(&f_sigma));
            worst = worst.max(lhs.deviation_on_columns(&rhs, &interior));
        }
    }
    FockReport::new("covariance f·s_i = s_i·(f∘σ_i)", worst, interior.len(), all_exact(family))
}

/// `L_i* L_j = δ_ij I` on interior columns.
pub fn check_row_isometry(rep: &TruncatedRep) -> FockReport {
    let interior = rep.interior();
    let n = rep.system().n();
    let id = SparseMatrix::identity(rep.dim());
    let zero = SparseMatrix::zeros(rep.dim(), rep.dim());
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = rep.shift(i).adjoint().mul(rep.shift(j));
            let expected = if i == j { &id } else { &zero };
            worst = worst.max(p.deviation_on_columns(expected, &interior));
        }
    }
    FockReport::new("row isometry s_i*s_j = δ_ij", worst, interior.len(), true)
}

/// `Σ_i L_i L_i* = I` on the images of the windows `s < S`, where even the
/// window vacuum lies in the range of a creation operator.
pub fn check_cuntz_completeness(rep: &TruncatedRep) -> Result<FockReport> {
    if !matches!(rep.kind, RepKind::Tail { .. }) {
        return Err(Error::Precondition("Cuntz completeness is checked on tail representations".into()));
    }
    let mut cols: Vec<usize> = rep.windows.iter().flat_map(|w| w.embedding.iter().copied()).collect();
    cols.sort_unstable();
    cols.dedup();
    let dim = rep.dim();
    let sum = (0..rep.system().n())
        .map(|i| rep.shift(i).mul(&rep.shift(i).adjoint()))
        .fold(SparseMatrix::zeros(dim, dim), |a, b| a.add(&b));
    let worst = sum.deviation_on_columns(&SparseMatrix::identity(dim), &cols);
    Ok(FockReport::new("Cuntz completeness Σ t_i t_i* = 1 on windows", worst, cols.len(), true))
}

/// Each window `s` is entrywise `λ_{x_s}` after the suffix identification:
/// both the function action and the creation operators.
pub fn check_window_coherence(rep: &TruncatedRep, family: &[Vec<Scalar>]) -> Result<FockReport> {
    if !matches!(rep.kind, RepKind::Tail { .. }) {
        return Err(Error::Precondition("window coherence is checked on tail representations".into()));
    }
    let mut worst: f64 = 0.0;
    let mut dim = 0;
    for w in &rep.windows {
        let small_depth = rep.depth().saturating_sub(rep.windows.len() - w.window);
        if small_depth == 0 {
            continue;
        }
        let small = TruncatedRep::orbit(rep.system(), w.point, small_depth)?;
        dim += w.embedding.len();
        for f in family {
            let big = rep.function(f).compress(&w.embedding, &w.embedding);
            worst = worst.max(big.deviation(&small.function(f)));
        }
        for i in 0..rep.system().n() {
            let big = rep.shift(i).compress(&w.embedding, &w.embedding);
            worst = worst.max(big.deviation(small.shift(i)));
        }
    }
    Ok(FockReport::new("tail-window coherence λ_{x_{s+1}}|H_s = λ_{x_s}", worst, dim, all_exact(family)))
}

/// `λ_x` is maximal exactly when `x` lies outside every range `σ_i(X)`.
pub fn maximality_flag(sys: &FiniteDynSys, x: usize) -> bool {
    sys.range_deficiency().deficiency.contains(&x)
}
