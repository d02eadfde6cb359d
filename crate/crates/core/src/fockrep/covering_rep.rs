use std::sync::Arc;

use super::{spanning_functions, FockBasis, FockReport, SparseMatrix, TruncatedRep, DEFAULT_MAX_DIM};
use crate::corealg::CoreElement;
use crate::covering::{CoveringSpace, CylinderFunction, InfiniteTailSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The orbit representation `λ_Q` of a point `Q ∈ X̃` for the covering
/// system, with `t_i ↦ L_i` and `f ↦ diag(f(σ̃_w Q))`.
#[derive(Clone, Debug)]
pub struct CoveringRep {
    space: Arc<CoveringSpace>,
    point: InfiniteTailSpec,
    basis: FockBasis,
    shifts: Vec<SparseMatrix>,
    /// `σ̃_w Q` truncated to the deepest cylinder level, per basis word.
    cylinders: Vec<Vec<usize>>,
}

impl CoveringRep {
    pub fn new(space: &Arc<CoveringSpace>, point: &InfiniteTailSpec, depth: usize) -> Result<Self> {
        Self::with_guard(space, point, depth, DEFAULT_MAX_DIM)
    }

    pub fn with_guard(space: &Arc<CoveringSpace>, point: &InfiniteTailSpec, depth: usize, max_dim: usize) -> Result<Self> {
        let sys = space.system();
        let basis = FockBasis::new(sys.n(), depth, max_dim)?;
        let shifts = (0..sys.n()).map(|i| basis.shift(i)).collect();
        let mut cylinders = Vec::with_capacity(basis.dim());
        for w in basis.words() {
            let q = point.sigma_word(sys, w);
            let per_depth = (0..=space.max_depth())
                .map(|d| {
                    space.index_of(&q.cylinder(d)).ok_or_else(|| {
                        Error::InvalidTail(format!("{} leaves the covering space", q.describe(sys)))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            cylinders.push(per_depth);
        }
        Ok(CoveringRep { space: space.clone(), point: point.clone(), basis, shifts, cylinders })
    }

    pub fn space(&self) -> &Arc<CoveringSpace> {
        &self.space
    }

    pub fn point(&self) -> &InfiniteTailSpec {
        &self.point
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

    pub fn shift(&self, i: usize) -> &SparseMatrix {
        &self.shifts[i]
    }

    fn value(&self, f: &CylinderFunction, k: usize) -> Scalar {
        f.value(self.cylinders[k][f.depth()]).clone()
    }

    pub fn function(&self, f: &CylinderFunction) -> Result<SparseMatrix> {
        if !Arc::ptr_eq(f.space(), &self.space) {
            return Err(Error::MismatchedSpaces);
        }
        Ok(self.basis.diagonal(|k, _| self.value(f, k)))
    }

    /// `t_u f t_v* ↦ L_u λ(f) L_v*`, summed over the canonical form of `a`.
    pub fn eval_core(&self, a: &CoreElement) -> Result<SparseMatrix> {
        if !Arc::ptr_eq(a.space(), &self.space) {
            return Err(Error::MismatchedSpaces);
        }
        let dim = self.dim();
        let mut out = SparseMatrix::zeros(dim, dim);
        for block in a.blocks().values() {
            for ((u, v), f) in block.entries() {
                for (c, w) in self.basis.words().iter().enumerate() {
                    let Some(rest) = w.strip_prefix(v) else { continue };
                    let Some(r) = self.basis.index_of(&u.concat(&rest)) else { continue };
                    let k = self.basis.index_of(&rest).expect("suffix of a basis word");
                    out.add_at(r, c, self.value(f, k));
                }
            }
        }
        Ok(out)
    }

    /// Columns on which `eval_core(a)` agrees with the untruncated operator
    /// of every term list canonicalizing to `a`: `|w|` reaches the level of
    /// each block and `|w| + d ≤ L` for each degree `d`.
    pub fn exact_columns(&self, a: &CoreElement) -> Vec<usize> {
        let (level, up) = reach(a);
        let depth = self.depth();
        self.basis.columns_where(|w| w.len() >= level && w.len() + up <= depth)
    }
}

/// Largest block level and largest positive degree.
fn reach(a: &CoreElement) -> (usize, usize) {
    let level = a.blocks().values().map(|b| b.level()).max().unwrap_or(0);
    let up = a.blocks().keys().map(|&d| d.max(0) as usize).max().unwrap_or(0);
    (level, up)
}

fn exact(a: &CoreElement) -> bool {
    a.blocks().values().all(|b| b.entries().values().all(|f| f.values().iter().all(Scalar::is_exact)))
}

/// `eval(ab) = eval(a) eval(b)` on columns where both sides are free of
/// truncation effects.
pub fn check_eval_multiplicative(rep: &CoveringRep, a: &CoreElement, b: &CoreElement) -> Result<FockReport> {
    let ab = a.checked_mul(b)?;
    let (level_ab, _) = reach(&ab);
    let (level_b, up_b) = reach(b);
    let (level_a, up_a) = reach(a);
    let low_b = b.blocks().keys().map(|&d| d.min(0)).min().unwrap_or(0);
    let depth = rep.depth() as i64;
    let cols = rep.basis.columns_where(|w| {
        let len = w.len() as i64;
        len >= level_ab as i64
            && len >= level_b as i64
            && len + low_b as i64 >= level_a as i64
            && len + (up_b + up_a) as i64 <= depth
    });
    let lhs = rep.eval_core(&ab)?;
    let rhs = rep.eval_core(a)?.mul(&rep.eval_core(b)?);
    Ok(FockReport::new("eval(ab) = eval(a)·eval(b)", lhs.deviation_on_columns(&rhs, &cols), cols.len(), exact(a) && exact(b)))
}

/// `eval(a*) = eval(a)*` on the exact columns of `a*`.
pub fn check_eval_adjoint(rep: &CoveringRep, a: &CoreElement) -> Result<FockReport> {
    let star = a.adjoint();
    let cols = rep.exact_columns(&star);
    let lhs = rep.eval_core(&star)?;
    let rhs = rep.eval_core(a)?.adjoint();
    Ok(FockReport::new("eval(a*) = eval(a)*", lhs.deviation_on_columns(&rhs, &cols), cols.len(), exact(a)))
}

/// `λ_{(i,x)} ∘ ρ = λ_x`: with `p(Q) = x`, the covering representation of
/// `f∘p` and of `t_i` coincides entrywise with `λ_x(f)` and `λ_x(s_i)`.
pub fn check_rho_intertwine(space: &Arc<CoveringSpace>, x: usize, point: &InfiniteTailSpec, depth: usize) -> Result<FockReport> {
    let sys = space.system();
    if !sys.is_surjective() {
        return Err(Error::Precondition("the intertwining check needs a surjective system".into()));
    }
    if point.base() != x {
        return Err(Error::Precondition(format!(
            "the tail {} lies over {}, not {}",
            point.describe(sys),
            sys.point_name(point.base()),
            sys.point_name(x)
        )));
    }
    let cover = CoveringRep::new(space, point, depth)?;
    let base = TruncatedRep::orbit(sys, x, depth)?;
    let mut worst: f64 = 0.0;
    let family = spanning_functions(sys);
    for f in &family {
        let lifted = CylinderFunction::lift(space, f, 0);
        worst = worst.max(cover.function(&lifted)?.deviation(&base.function(f)));
    }
    for i in 0..sys.n() {
        let ti = cover.eval_core(&CoreElement::t(space, i))?;
        worst = worst.max(ti.deviation(base.shift(i)));
    }
    Ok(FockReport::new("intertwining λ_(i,x)∘ρ = λ_x", worst, cover.dim(), true))
}

/// Up to `count` distinct points of `X̃`: the canonical continuations of the
/// deepest cylinders, in cylinder order.
pub fn covering_points(space: &Arc<CoveringSpace>, count: usize) -> Vec<InfiniteTailSpec> {
    let sys = space.system();
    let mut out: Vec<InfiniteTailSpec> = Vec::new();
    for d in (0..=space.max_depth()).rev() {
        for c in space.cylinders(d) {
            if out.len() >= count {
                return out;
            }
            if let Ok(q) = InfiniteTailSpec::extending(space.graph(), sys, c) {
                if !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        if !out.is_empty() {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::random;
    use crate::word::Word;

    fn space_and_point(sys: &crate::dynsys::FiniteDynSys) -> (Arc<CoveringSpace>, InfiniteTailSpec) {
        let s = CoveringSpace::with_depth(sys, 4);
        let q = covering_points(&s, 1).remove(0);
        (s, q)
    }

    #[test]
    fn one_is_identity() {
        let (s, q) = space_and_point(&builtin::p3());
        let r = CoveringRep::new(&s, &q, 3).unwrap();
        assert_eq!(r.eval_core(&CoreElement::one(&s)).unwrap(), SparseMatrix::identity(r.dim()));
    }

    #[test]
    fn lemma_shadow() {
        let sys = builtin::p3();
        let (s, q) = space_and_point(&sys);
        let r = CoveringRep::new(&s, &q, 4).unwrap();
        let f = CylinderFunction::from_fn(&s, 1, |c| Scalar::from_int(c.vertex(1) as i64 + 3 * c.label(0) as i64));
        for w in Word::up_to_length(2, 2) {
            let (lhs, rhs) = CoreElement::lemma_calculation(&w, &f);
            let cols = r.exact_columns(&lhs);
            assert!(!cols.is_empty());
            let dev = r.eval_core(&lhs).unwrap().deviation_on_columns(&r.eval_core(&rhs).unwrap(), &cols);
            assert_eq!(dev, 0.0, "w = {w}");
        }
    }

    #[test]
    fn v_is_an_isometry_on_the_interior() {
        let (s, q) = space_and_point(&builtin::fs2());
        let r = CoveringRep::new(&s, &q, 4).unwrap();
        let v = CoreElement::isometry_v(&s).unwrap();
        let ev = r.eval_core(&v).unwrap();
        let interior = r.basis().interior();
        assert_eq!(ev.adjoint().mul(&ev).deviation_on_columns(&SparseMatrix::identity(r.dim()), &interior), 0.0);
    }

    #[test]
    fn random_products_and_adjoints() {
        let mut rng = random::rng(7);
        for sys in [builtin::p3(), builtin::fs2(), builtin::sw2()] {
            let s = CoveringSpace::with_depth(&sys, 4);
            for q in covering_points(&s, 2) {
                let r = CoveringRep::new(&s, &q, 5).unwrap();
                for _ in 0..5 {
                    let a = random::core(&s, 2, 1, 2, &mut rng);
                    let b = random::core(&s, 2, 1, 2, &mut rng);
                    let m = check_eval_multiplicative(&r, &a, &b).unwrap();
                    assert!(m.pass && m.interior_dim > 0, "{m:?}");
                    assert!(check_eval_adjoint(&r, &a).unwrap().pass);
                }
            }
        }
    }

    #[test]
    fn intertwining() {
        for sys in [builtin::p3(), builtin::fs2(), builtin::sw2(), builtin::point1(), builtin::point2()] {
            let s = CoveringSpace::with_depth(&sys, 4);
            let pts = covering_points(&s, 3);
            assert!(!pts.is_empty());
            for q in &pts {
                let rep = check_rho_intertwine(&s, q.base(), q, 3).unwrap();
                assert!(rep.pass, "{rep:?}");
            }
        }
        let p3 = builtin::p3();
        let s = CoveringSpace::with_depth(&p3, 3);
        let q = InfiniteTailSpec::fixed(&p3, 0, 0).unwrap();
        assert!(check_rho_intertwine(&s, 0, &q, 3).unwrap().pass);
        assert!(check_rho_intertwine(&s, 1, &q, 3).is_err());
        let ns = CoveringSpace::with_depth(&builtin::ns(), 3);
        let q = InfiniteTailSpec::fixed(&builtin::ns(), 0, 0).unwrap();
        assert!(check_rho_intertwine(&ns, 0, &q, 3).is_err());
    }

    #[test]
    fn point_counts() {
        let s = CoveringSpace::with_depth(&builtin::point1(), 4);
        assert_eq!(covering_points(&s, 3).len(), 1);
        let s = CoveringSpace::with_depth(&builtin::p3(), 4);
        assert_eq!(covering_points(&s, 3).len(), 3);
    }
}
