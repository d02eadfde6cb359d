//! The dense `*`-algebra spanned by `t_u f t_v*`, `f ∈ C(X̃)`.
//!
//! A [`CoreElement`] is stored per degree `d = |u| - |v|` as a [`Block`]: all
//! terms of that degree raised to a common level `K = |v|` and all
//! coefficients refined to a common depth. Raising uses
//! `t_u f t_v* = Σ_i t_{ui} (f∘σ̃_i) t_{vi}*`, so two elements are equal iff
//! their blocks agree after raising both to common level and depth.

mod correspondence;
mod ideal;
mod norm;
mod tower;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::covering::{CoveringSpace, CylinderFunction, CylinderSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::word::Word;

pub use correspondence::{correspondence_unitary, CorrespondenceReport};
pub use ideal::IdealData;
pub use norm::{spectral_norm, NormBounds};
pub use tower::{TowerElement, TowerNorm};

/// Coefficients of one degree, all at level `K` and depth `D`.
#[derive(Clone, Debug)]
pub struct Block {
    level: usize,
    depth: usize,
    entries: BTreeMap<(Word, Word), CylinderFunction>,
}

impl Block {
    fn empty(level: usize, depth: usize) -> Self {
        Block { level, depth, entries: BTreeMap::new() }
    }

    /// `K = |v|` for every entry `(u, v)`.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entries(&self) -> &BTreeMap<(Word, Word), CylinderFunction> {
        &self.entries
    }

    pub fn entry(&self, u: &Word, v: &Word) -> Option<&CylinderFunction> {
        self.entries.get(&(u.clone(), v.clone()))
    }

    fn raise_once(&self, n: usize) -> Block {
        let mut entries = BTreeMap::new();
        for ((u, v), f) in &self.entries {
            for i in 0..n {
                let g = f.compose_sigma(i);
                if !g.is_zero() {
                    entries.insert((u.push(i), v.push(i)), g);
                }
            }
        }
        Block { level: self.level + 1, depth: self.depth, entries }
    }

    /// The same coefficients written at a larger level and depth.
    pub fn raise(&self, n: usize, level: usize, depth: usize) -> Block {
        assert!(level >= self.level && depth >= self.depth, "blocks can only be raised");
        let mut b = self.clone();
        while b.level < level {
            b = b.raise_once(n);
        }
        if depth > b.depth {
            b.entries = b.entries.into_iter().map(|(k, f)| (k, f.refine(depth))).collect();
            b.depth = depth;
        }
        b
    }

    fn is_zero(&self) -> bool {
        self.entries.values().all(CylinderFunction::is_zero)
    }
}

/// A finite sum `Σ t_u f_{u,v} t_v*` in canonical per-degree form.
#[derive(Clone)]
pub struct CoreElement {
    space: Arc<CoveringSpace>,
    blocks: BTreeMap<i32, Block>,
}

impl CoreElement {
    pub fn zero(space: &Arc<CoveringSpace>) -> Self {
        CoreElement { space: space.clone(), blocks: BTreeMap::new() }
    }

    pub fn one(space: &Arc<CoveringSpace>) -> Self {
        Self::function(&CylinderFunction::one(space))
    }

    /// `t_ε f t_ε*`.
    pub fn function(f: &CylinderFunction) -> Self {
        Self::term(&Word::empty(), f, &Word::empty())
    }

    /// `t_u f t_v*`.
    pub fn term(u: &Word, f: &CylinderFunction, v: &Word) -> Self {
        Self::from_terms(f.space(), vec![(u.clone(), f.clone(), v.clone())])
    }

    /// `t_w`.
    pub fn t_word(space: &Arc<CoveringSpace>, w: &Word) -> Self {
        Self::term(w, &CylinderFunction::one(space), &Word::empty())
    }

    pub fn t(space: &Arc<CoveringSpace>, i: usize) -> Self {
        Self::t_word(space, &Word::letter(i))
    }

    /// Canonicalizes an arbitrary list of terms `(u, f, v)`.
    pub fn from_terms(space: &Arc<CoveringSpace>, terms: Vec<(Word, CylinderFunction, Word)>) -> Self {
        let n = space.n();
        let mut by_degree: BTreeMap<i32, Vec<(Word, CylinderFunction, Word)>> = BTreeMap::new();
        for (u, f, v) in terms {
            assert!(Arc::ptr_eq(f.space(), space), "term over a different covering space");
            by_degree.entry(u.len() as i32 - v.len() as i32).or_default().push((u, f, v));
        }
        let mut blocks = BTreeMap::new();
        for (d, terms) in by_degree {
            let level = terms.iter().map(|t| t.2.len()).max().unwrap();
            let depth = terms.iter().map(|t| t.1.depth()).max().unwrap();
            let mut acc: BTreeMap<(Word, Word), CylinderFunction> = BTreeMap::new();
            for (u, f, v) in terms {
                let mut single = Block::empty(v.len(), f.depth());
                single.entries.insert((u, v), f);
                for (key, g) in single.raise(n, level, depth).entries {
                    match acc.get_mut(&key) {
                        Some(h) => *h = &*h + &g,
                        None => {
                            acc.insert(key, g);
                        }
                    }
                }
            }
            acc.retain(|_, f| !f.is_zero());
            if !acc.is_empty() {
                blocks.insert(d, Block { level, depth, entries: acc });
            }
        }
        CoreElement { space: space.clone(), blocks }
    }

    fn terms(&self) -> impl Iterator<Item = (&Word, &CylinderFunction, &Word)> + '_ {
        self.blocks.values().flat_map(|b| b.entries.iter().map(|((u, v), f)| (u, f, v)))
    }

    fn from_blocks(space: &Arc<CoveringSpace>, blocks: impl IntoIterator<Item = (i32, Block)>) -> Self {
        let blocks = blocks.into_iter().filter(|(_, b)| !b.entries.is_empty()).collect();
        CoreElement { space: space.clone(), blocks }
    }

    pub fn space(&self) -> &Arc<CoveringSpace> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Block::is_zero)
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.blocks.keys().copied().collect()
    }

    pub fn block(&self, d: i32) -> Option<&Block> {
        self.blocks.get(&d)
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Block> {
        &self.blocks
    }

    pub fn is_homogeneous(&self) -> bool {
        self.blocks.len() <= 1
    }

    /// Largest depth of any coefficient.
    pub fn depth(&self) -> usize {
        self.blocks.values().map(|b| b.depth).max().unwrap_or(0)
    }

    /// The degree-`d` part raised to level `K` and depth `D`.
    pub fn canonical_at(&self, d: i32, level: usize, depth: usize) -> Block {
        match self.blocks.get(&d) {
            Some(b) => b.raise(self.n(), level, depth),
            None => Block::empty(level, depth),
        }
    }

    /// `t_u* b t_v`.
    pub fn coefficient(&self, u: &Word, v: &Word) -> CoreElement {
        let space = &self.space;
        &(&CoreElement::t_word(space, u).adjoint() * self) * &CoreElement::t_word(space, v)
    }

    /// The function `f` when the element is `t_ε f t_ε*` after lowering.
    pub fn as_function(&self) -> Option<CylinderFunction> {
        if self.is_zero() {
            return Some(CylinderFunction::zero(&self.space));
        }
        if self.blocks.len() != 1 {
            return None;
        }
        let b = self.blocks.get(&0)?;
        let k = b.level;
        // A level-k diagonal block diag(g_w) comes from f = Σ_w χ_w (g_w ∘ τ^k).
        let mut f = CylinderFunction::zero(&self.space);
        for ((u, v), g) in &b.entries {
            if u != v {
                return None;
            }
            let mut lifted = g.clone();
            for _ in 0..k {
                lifted = lifted.compose_tau();
            }
            f = &f + &(&CylinderFunction::chi(&self.space, u) * &lifted);
        }
        (CoreElement::function(&f) == *self).then_some(f)
    }

    pub fn checked_mul(&self, other: &CoreElement) -> Result<CoreElement> {
        if !Arc::ptr_eq(&self.space, &other.space) {
            return Err(Error::MismatchedSpaces);
        }
        let mut terms = Vec::new();
        for (u, f, v) in self.terms() {
            for (w, g, z) in other.terms() {
                if let Some(w1) = w.strip_prefix(v) {
                    let h = &f.compose_sigma_word(&w1) * g;
                    if !h.is_zero() {
                        terms.push((u.concat(&w1), h, z.clone()));
                    }
                } else if let Some(v1) = v.strip_prefix(w) {
                    let h = f * &g.compose_sigma_word(&v1);
                    if !h.is_zero() {
                        terms.push((u.clone(), h, z.concat(&v1)));
                    }
                }
            }
        }
        Ok(Self::from_terms(&self.space, terms))
    }

    pub fn checked_add(&self, other: &CoreElement) -> Result<CoreElement> {
        if !Arc::ptr_eq(&self.space, &other.space) {
            return Err(Error::MismatchedSpaces);
        }
        let terms = self
            .terms()
            .chain(other.terms())
            .map(|(u, f, v)| (u.clone(), f.clone(), v.clone()))
            .collect();
        Ok(Self::from_terms(&self.space, terms))
    }

    pub fn scale(&self, s: &Scalar) -> CoreElement {
        let blocks = self.blocks.iter().map(|(&d, b)| {
            let entries = b.entries.iter().map(|(k, f)| (k.clone(), f.scale(s))).filter(|(_, f)| !f.is_zero()).collect();
            (d, Block { level: b.level, depth: b.depth, entries })
        });
        Self::from_blocks(&self.space, blocks.collect::<Vec<_>>())
    }

    /// `(t_u f t_v*)* = t_v f̄ t_u*`.
    pub fn adjoint(&self) -> CoreElement {
        let blocks = self.blocks.iter().map(|(&d, b)| {
            let entries = b.entries.iter().map(|((u, v), f)| ((v.clone(), u.clone()), f.conj())).collect();
            (-d, Block { level: (b.level as i32 + d) as usize, depth: b.depth, entries })
        });
        Self::from_blocks(&self.space, blocks.collect::<Vec<_>>())
    }

    pub fn pow(&self, k: u32) -> CoreElement {
        (0..k).fold(CoreElement::one(&self.space), |acc, _| &acc * self)
    }

    /// Scales the degree-`d` part by `z^d` (`z` of modulus one).
    pub fn gauge_scale(&self, z: &Scalar) -> CoreElement {
        let blocks = self.blocks.iter().map(|(&d, b)| {
            let factor = if d >= 0 { z.pow(d as u32) } else { z.conj().pow((-d) as u32) };
            let entries = b.entries.iter().map(|(k, f)| (k.clone(), f.scale(&factor))).collect();
            (d, Block { level: b.level, depth: b.depth, entries })
        });
        Self::from_blocks(&self.space, blocks.collect::<Vec<_>>())
    }

    /// The gauge expectation: the degree-0 part.
    pub fn gauge_expect(&self) -> CoreElement {
        Self::from_blocks(&self.space, self.blocks.get(&0).map(|b| (0, b.clone())))
    }

    /// `(1/M) Σ_{j<M} γ_{ζ_M^j}(a)` with exact roots of unity.
    pub fn gauge_average(&self, m: u64) -> CoreElement {
        let mut acc = CoreElement::zero(&self.space);
        for j in 0..m {
            acc = &acc + &self.gauge_scale(&Scalar::root_of_unity(m, j as i64));
        }
        acc.scale(&Scalar::ratio(1, m as i64))
    }

    /// Largest `|d|` over the degrees present; averaging over more roots
    /// of unity than this isolates degree 0.
    pub fn max_abs_degree(&self) -> u64 {
        self.blocks.keys().map(|d| d.unsigned_abs() as u64).max().unwrap_or(0)
    }

    /// `V = n^{-1/2} Σ_i t_i`, defined for surjective systems.
    pub fn isometry_v(space: &Arc<CoveringSpace>) -> Result<CoreElement> {
        let sys = space.system();
        if !sys.is_surjective() {
            return Err(Error::Precondition(
                "V needs Σ t_i t_i* = 1, which requires a surjective system".into(),
            ));
        }
        let n = sys.n();
        let c = Scalar::sqrt(n as u64).div_int(n as i64);
        let terms = (0..n).map(|i| (Word::letter(i), CylinderFunction::constant(space, c.clone()), Word::empty())).collect();
        Ok(Self::from_terms(space, terms))
    }

    /// `α(b) = V b V*`.
    pub fn alpha(&self) -> Result<CoreElement> {
        let v = Self::isometry_v(&self.space)?;
        Ok(&(&v * self) * &v.adjoint())
    }

    /// `α(b) = (1/n) Σ_{i,j} t_i b t_j*`.
    pub fn alpha_sum(&self) -> CoreElement {
        let n = self.n();
        let mut acc = CoreElement::zero(&self.space);
        for i in 0..n {
            let left = &CoreElement::t(&self.space, i) * self;
            for j in 0..n {
                acc = &acc + &(&left * &CoreElement::t(&self.space, j).adjoint());
            }
        }
        acc.scale(&Scalar::ratio(1, n as i64))
    }

    /// `t_w f t_w*` and `χ_w (f∘τ^{|w|})`, both sides of the calculation
    /// lemma.
    pub fn lemma_calculation(w: &Word, f: &CylinderFunction) -> (CoreElement, CoreElement) {
        let space = f.space();
        let lhs = CoreElement::term(w, f, w);
        let mut g = f.clone();
        for _ in 0..w.len() {
            g = g.compose_tau();
        }
        let rhs = CoreElement::function(&(&CylinderFunction::chi(space, w) * &g));
        (lhs, rhs)
    }

    /// Both sides of `(t_u f t_w*) χ_X (t_w g t_v*) = t_u (f g χ_{τ^k(X)}) t_v*`
    /// for `|w| = k`, with `χ_{τ^k(X)}` computed from the clopen set
    /// `τ^k(p^{-1}(X))`. With `adjoint_right = false` the right factor is
    /// `t_w g t_v` instead.
    pub fn corner_identity(
        x_set: &crate::dynsys::PointSet,
        u: &Word,
        f: &CylinderFunction,
        w: &Word,
        g: &CylinderFunction,
        v: &Word,
        adjoint_right: bool,
    ) -> (CoreElement, CoreElement) {
        let space = f.space();
        let chi_x = CylinderSet::point_preimage(space, x_set, 0);
        let mut tk = chi_x.clone();
        for _ in 0..w.len() {
            tk = tk.image_tau();
        }
        let right_tail = |e: CoreElement| {
            if adjoint_right {
                e
            } else {
                &e * &CoreElement::t_word(space, v)
            }
        };
        let (right_v, rhs_v) = if adjoint_right { (v.clone(), v.clone()) } else { (Word::empty(), Word::empty()) };
        let lhs = &(&CoreElement::term(u, f, w) * &CoreElement::function(&CylinderFunction::indicator(&chi_x)))
            * &right_tail(CoreElement::term(w, g, &right_v));
        let rhs = right_tail(CoreElement::term(u, &(&(f * g) * &CylinderFunction::indicator(&tk)), &rhs_v));
        (lhs, rhs)
    }

    /// Canonical data as JSON:
    /// `{degree: {K, D, entries: [{u, v, values: [[cylinder, value]]}]}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let sys = self.space.system();
        let mut out = serde_json::Map::new();
        for (d, b) in &self.blocks {
            let entries: Vec<serde_json::Value> = b
                .entries
                .iter()
                .map(|((u, v), f)| {
                    let values: Vec<serde_json::Value> = self
                        .space
                        .cylinders(b.depth)
                        .iter()
                        .zip(f.values())
                        .filter(|(_, s)| !s.is_zero())
                        .map(|(c, s)| serde_json::json!([c.describe(sys), s.to_string()]))
                        .collect();
                    serde_json::json!({ "u": u, "v": v, "values": values })
                })
                .collect();
            out.insert(d.to_string(), serde_json::json!({ "K": b.level, "D": b.depth, "entries": entries }));
        }
        serde_json::Value::Object(out)
    }
}

impl PartialEq for CoreElement {
    fn eq(&self, other: &Self) -> bool {
        if !Arc::ptr_eq(&self.space, &other.space) {
            return false;
        }
        let degrees: std::collections::BTreeSet<i32> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        degrees.into_iter().all(|d| {
            let (a, b) = (self.blocks.get(&d), other.blocks.get(&d));
            let level = a.map_or(0, |x| x.level).max(b.map_or(0, |x| x.level));
            let depth = a.map_or(0, |x| x.depth).max(b.map_or(0, |x| x.depth));
            let (ra, rb) = (self.canonical_at(d, level, depth), other.canonical_at(d, level, depth));
            let nonzero = |blk: &Block| -> BTreeMap<(Word, Word), Vec<Scalar>> {
                blk.entries.iter().filter(|(_, f)| !f.is_zero()).map(|(k, f)| (k.clone(), f.values().to_vec())).collect()
            };
            nonzero(&ra) == nonzero(&rb)
        })
    }
}

impl fmt::Debug for CoreElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoreElement")?;
        let mut m = f.debug_map();
        for (d, b) in &self.blocks {
            m.entry(d, &format_args!("K={} D={} {:?}", b.level, b.depth, b.entries));
        }
        m.finish()
    }
}

impl Mul<&CoreElement> for &CoreElement {
    type Output = CoreElement;
    fn mul(self, rhs: &CoreElement) -> CoreElement {
        self.checked_mul(rhs).expect("multiplying elements over different covering spaces")
    }
}

impl Mul<CoreElement> for CoreElement {
    type Output = CoreElement;
    fn mul(self, rhs: CoreElement) -> CoreElement {
        &self * &rhs
    }
}

impl Add<&CoreElement> for &CoreElement {
    type Output = CoreElement;
    fn add(self, rhs: &CoreElement) -> CoreElement {
        self.checked_add(rhs).expect("adding elements over different covering spaces")
    }
}

impl Add<CoreElement> for CoreElement {
    type Output = CoreElement;
    fn add(self, rhs: CoreElement) -> CoreElement {
        &self + &rhs
    }
}

impl Neg for &CoreElement {
    type Output = CoreElement;
    fn neg(self) -> CoreElement {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Sub<&CoreElement> for &CoreElement {
    type Output = CoreElement;
    fn sub(self, rhs: &CoreElement) -> CoreElement {
        self + &(-rhs)
    }
}

impl Sub<CoreElement> for CoreElement {
    type Output = CoreElement;
    fn sub(self, rhs: CoreElement) -> CoreElement {
        &self - &rhs
    }
}
