use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::CoreElement;
use crate::covering::{CoveringSpace, CylinderFunction, CylinderSet};
use crate::error::{Error, Result};

/// The sequence `F_k = τ^k(F_0)` of a clopen set together with the
/// properties that decide which ideal it describes.
#[derive(Clone, Debug)]
pub struct IdealData {
    space: Arc<CoveringSpace>,
    /// `F_0, …, F_{start+period-1}`; afterwards the sequence repeats with
    /// the given period.
    sets: Vec<CylinderSet>,
    period_start: usize,
    period: usize,
    pub tau_invariant: bool,
    pub robust: bool,
    pub bi_invariant: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealSummary {
    pub tau_invariant: bool,
    pub robust: bool,
    pub bi_invariant: bool,
    pub period_start: usize,
    pub period: usize,
    pub witnesses: Vec<String>,
}

impl IdealData {
    pub fn from_set(f0: &CylinderSet) -> Self {
        let space = f0.space().clone();
        let f0 = f0.coarsen();
        let mut sets = vec![f0.clone()];
        let (period_start, period) = loop {
            let next = sets.last().unwrap().image_tau().coarsen();
            if let Some(j) = sets.iter().position(|s| *s == next) {
                break (j, sets.len() - j);
            }
            sets.push(next);
        };
        let mut witnesses = Vec::new();
        let sys = space.system();

        let tau_f = f0.image_tau();
        let tau_invariant = tau_f.is_subset(&f0);
        if !tau_invariant {
            let c = tau_f.difference(&f0).coarsen();
            witnesses.push(format!("τ(F) ⊄ F: {} lies in τ(F) only", c.cylinders().next().unwrap().describe(sys)));
        }

        let mut sigma_invariant = true;
        if f0.depth() < space.max_depth() {
            for i in 0..space.n() {
                let img = f0.image_sigma(i);
                if !img.is_subset(&f0) {
                    sigma_invariant = false;
                    let c = img.difference(&f0).coarsen();
                    witnesses.push(format!(
                        "σ̃_{}(F) ⊄ F: {} is missing",
                        i + 1,
                        c.cylinders().next().unwrap().describe(sys)
                    ));
                    break;
                }
            }
        } else {
            sigma_invariant = false;
            witnesses.push("set too deep to test σ̃-invariance".into());
        }
        let bi_invariant = tau_invariant && sigma_invariant;

        let robust = match robust_violation(&f0) {
            None => true,
            Some(w) => {
                witnesses.push(w);
                false
            }
        };
        IdealData { space, sets, period_start, period, tau_invariant, robust, bi_invariant, witnesses }
    }

    pub fn space(&self) -> &Arc<CoveringSpace> {
        &self.space
    }

    /// `F_k = τ^k(F_0)`.
    pub fn set(&self, k: usize) -> &CylinderSet {
        let idx = if k < self.sets.len() { k } else { self.period_start + (k - self.period_start) % self.period };
        &self.sets[idx]
    }

    pub fn stored(&self) -> &[CylinderSet] {
        &self.sets
    }

    pub fn period_start(&self) -> usize {
        self.period_start
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn summary(&self) -> IdealSummary {
        IdealSummary {
            tau_invariant: self.tau_invariant,
            robust: self.robust,
            bi_invariant: self.bi_invariant,
            period_start: self.period_start,
            period: self.period,
            witnesses: self.witnesses.clone(),
        }
    }

    /// Whether `a` lies in the ideal described by `F`.
    ///
    /// For bi-invariant `F` this is the ideal of the whole algebra spanned by
    /// `t_u f t_v*` with `f|_F = 0`; for robust `τ`-invariant `F` it is the
    /// `α`-invariant ideal of the degree-0 core, whose level-`k` coefficients
    /// vanish on `F_k`.
    pub fn contains(&self, a: &CoreElement) -> Result<bool> {
        if !Arc::ptr_eq(a.space(), &self.space) {
            return Err(Error::MismatchedSpaces);
        }
        let vanishes = |f: &CylinderFunction, set: &CylinderSet| (f * &CylinderFunction::indicator(set)).is_zero();
        if self.bi_invariant {
            let f0 = &self.sets[0];
            return Ok(a.blocks().values().all(|b| b.entries().values().all(|f| vanishes(f, f0))));
        }
        if !(self.tau_invariant && self.robust) {
            return Err(Error::Precondition(
                "F is not robust and τ-invariant, so it describes no α-invariant ideal".into(),
            ));
        }
        if a.blocks().keys().any(|&d| d != 0) {
            return Err(Error::Precondition(
                "F is not bi-invariant: only the ideal of the degree-0 core is defined, and the element has nonzero degree parts"
                    .into(),
            ));
        }
        Ok(a.block(0).map_or(true, |b| b.entries().values().all(|f| vanishes(f, self.set(b.level())))))
    }
}

/// Robustness of a clopen `F` of depth `D` asks `τ^{-k} τ^k (F) ⊆ F` for all
/// `k`. For `k ≤ D` this is a finite set computation. For `k ≥ D` a tail
/// lies in `τ^{-k}τ^k(F)` iff its `x_k` also starts a tail in `F`; writing
/// `a = σ_{w'}(x_k)`, `b = σ_w(x_k)` for the two depth-`D` endpoints, the
/// condition reads: whenever some cylinder of `F` ends at `b`, every
/// depth-`D` cylinder ending at `a` lies in `F`, for all pairs `(a, b)`
/// reachable from the diagonal by applying maps independently.
fn robust_violation(f: &CylinderSet) -> Option<String> {
    let space = f.space();
    let sys = space.system();
    let d = f.depth();
    for k in 1..=d {
        let mut t = f.clone();
        for _ in 0..k {
            t = t.image_tau();
        }
        for _ in 0..k {
            t = t.preimage_tau();
        }
        if !t.is_subset(f) {
            let c = t.difference(f).coarsen();
            return Some(format!(
                "not robust: τ^-{k}τ^{k}(F) contains {} outside F",
                c.cylinders().next().unwrap().describe(sys)
            ));
        }
    }
    let graph = space.graph();
    let m = sys.m();
    let mut ends = vec![false; m];
    let mut full = vec![true; m];
    for (c, &inside) in space.cylinders(d).iter().zip(f.members()) {
        let x = c.vertex(d);
        if inside {
            ends[x] = true;
        } else {
            full[x] = false;
        }
    }
    let mut seen: BTreeSet<(usize, usize)> = graph.live_vertices().into_iter().map(|x| (x, x)).collect();
    let mut stack: Vec<(usize, usize)> = seen.iter().copied().collect();
    while let Some((a, b)) = stack.pop() {
        if ends[b] && !full[a] {
            return Some(format!(
                "not robust: tails through {} reach F, but not every tail through {} does",
                sys.point_name(b),
                sys.point_name(a)
            ));
        }
        for i in 0..sys.n() {
            for j in 0..sys.n() {
                let next = (sys.apply(i, a), sys.apply(j, b));
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    None
}
