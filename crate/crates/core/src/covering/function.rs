use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{CoveringSpace, Cylinder, CylinderSet};
use crate::scalar::Scalar;
use crate::word::Word;

/// A locally constant function on `X̃`, given by one value per cylinder of a
/// fixed depth.
#[derive(Clone)]
pub struct CylinderFunction {
    space: Arc<CoveringSpace>,
    depth: usize,
    values: Vec<Scalar>,
}

impl CylinderFunction {
    pub fn from_values(space: &Arc<CoveringSpace>, depth: usize, values: Vec<Scalar>) -> Self {
        space.check_depth(depth);
        assert_eq!(values.len(), space.count(depth), "one value per depth-{depth} cylinder");
        CylinderFunction { space: space.clone(), depth, values }
    }

    pub fn from_fn(space: &Arc<CoveringSpace>, depth: usize, f: impl Fn(&Cylinder) -> Scalar) -> Self {
        space.check_depth(depth);
        let values = space.cylinders(depth).iter().map(f).collect();
        CylinderFunction { space: space.clone(), depth, values }
    }

    pub fn constant(space: &Arc<CoveringSpace>, value: Scalar) -> Self {
        let values = vec![value; space.count(0)];
        CylinderFunction { space: space.clone(), depth: 0, values }
    }

    pub fn zero(space: &Arc<CoveringSpace>) -> Self {
        Self::constant(space, Scalar::zero())
    }

    pub fn one(space: &Arc<CoveringSpace>) -> Self {
        Self::constant(space, Scalar::one())
    }

    /// Indicator of `X̃_w`: tails whose first `|w|` labels spell `w`.
    pub fn chi(space: &Arc<CoveringSpace>, w: &Word) -> Self {
        let k = w.len();
        Self::from_fn(space, k, |c| if (0..k).all(|j| c.label(j) == w.0[j] as usize) { Scalar::one() } else { Scalar::zero() })
    }

    /// `g ∘ p_k`: the function `x ↦ g(x_k)` for `g` on the points of `X`.
    pub fn lift(space: &Arc<CoveringSpace>, g: &[Scalar], k: usize) -> Self {
        assert_eq!(g.len(), space.system().m(), "one value per point");
        Self::from_fn(space, k, |c| g[c.vertex(k)].clone())
    }

    /// Indicator of `p_k^{-1}(x)`.
    pub fn point_indicator(space: &Arc<CoveringSpace>, x: usize, k: usize) -> Self {
        Self::from_fn(space, k, |c| if c.vertex(k) == x { Scalar::one() } else { Scalar::zero() })
    }

    pub fn indicator(set: &CylinderSet) -> Self {
        let space = set.space();
        let values = set.members().iter().map(|&b| if b { Scalar::one() } else { Scalar::zero() }).collect();
        CylinderFunction { space: space.clone(), depth: set.depth(), values }
    }

    pub fn space(&self) -> &Arc<CoveringSpace> {
        &self.space
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> &Scalar {
        &self.values[idx]
    }

    /// Value on a cylinder of depth at least `self.depth()`.
    pub fn eval(&self, c: &Cylinder) -> Option<&Scalar> {
        if c.depth() < self.depth {
            return None;
        }
        self.space.index_of(&c.truncate(self.depth)).map(|k| &self.values[k])
    }

    pub fn same_space(&self, other: &CylinderFunction) -> bool {
        Arc::ptr_eq(&self.space, &other.space)
    }

    fn assert_same_space(&self, other: &CylinderFunction) {
        assert!(self.same_space(other), "cylinder functions over different covering spaces");
    }

    /// The same function written at a larger depth.
    pub fn refine(&self, depth: usize) -> Self {
        assert!(depth >= self.depth, "cannot refine from depth {} down to {depth}", self.depth);
        self.space.check_depth(depth);
        let mut values = self.values.clone();
        for d in self.depth + 1..=depth {
            values = (0..self.space.count(d)).map(|k| values[self.space.parent(d, k)].clone()).collect();
        }
        CylinderFunction { space: self.space.clone(), depth, values }
    }

    /// The smallest depth at which the function is still well defined.
    pub fn coarsen(&self) -> Self {
        let mut out = self.clone();
        while out.depth > 0 {
            let d = out.depth;
            let mut values = vec![None::<Scalar>; out.space.count(d - 1)];
            let mut ok = true;
            for (k, v) in out.values.iter().enumerate() {
                let p = out.space.parent(d, k);
                match &values[p] {
                    None => values[p] = Some(v.clone()),
                    Some(prev) if prev == v => {}
                    Some(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                break;
            }
            out = CylinderFunction {
                space: out.space.clone(),
                depth: d - 1,
                values: values.into_iter().map(|v| v.unwrap_or_else(Scalar::zero)).collect(),
            };
        }
        out
    }

    fn zip(&self, other: &CylinderFunction, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        self.assert_same_space(other);
        let depth = self.depth.max(other.depth);
        let (a, b) = (self.refine(depth), other.refine(depth));
        let values = a.values.iter().zip(&b.values).map(|(x, y)| op(x, y)).collect();
        CylinderFunction { space: self.space.clone(), depth, values }
    }

    pub fn map(&self, op: impl Fn(&Scalar) -> Scalar) -> Self {
        CylinderFunction { space: self.space.clone(), depth: self.depth, values: self.values.iter().map(op).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|v| v * s)
    }

    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// Sup norm (as a float).
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    pub fn support(&self) -> CylinderSet {
        CylinderSet::from_members(&self.space, self.depth, self.values.iter().map(|v| !v.is_zero()).collect())
    }

    /// `f ∘ τ`, one level deeper.
    pub fn compose_tau(&self) -> Self {
        let depth = self.depth + 1;
        self.space.check_depth(depth);
        let values = (0..self.space.count(depth)).map(|k| self.values[self.space.shift_index(depth, k)].clone()).collect();
        CylinderFunction { space: self.space.clone(), depth, values }
    }

    /// `f ∘ σ̃_i`, at the same depth.
    pub fn compose_sigma(&self, i: usize) -> Self {
        let values =
            (0..self.space.count(self.depth)).map(|k| self.values[self.space.sigma_index(self.depth, k, i)].clone()).collect();
        CylinderFunction { space: self.space.clone(), depth: self.depth, values }
    }

    /// `f ∘ σ̃_w = f ∘ σ̃_{w_1} ∘ … ∘ σ̃_{w_k}`.
    pub fn compose_sigma_word(&self, w: &Word) -> Self {
        let mut out = self.clone();
        for i in w.labels() {
            out = out.compose_sigma(i);
        }
        out
    }
}

impl PartialEq for CylinderFunction {
    fn eq(&self, other: &Self) -> bool {
        if !self.same_space(other) {
            return false;
        }
        let depth = self.depth.max(other.depth);
        self.refine(depth).values == other.refine(depth).values
    }
}

impl fmt::Debug for CylinderFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CylinderFunction(depth {}, [", self.depth)?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "])")
    }
}

macro_rules! function_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&CylinderFunction> for &CylinderFunction {
            type Output = CylinderFunction;
            fn $method(self, rhs: &CylinderFunction) -> CylinderFunction {
                self.zip(rhs, |a, b| a $op b)
            }
        }
        impl $tr<CylinderFunction> for CylinderFunction {
            type Output = CylinderFunction;
            fn $method(self, rhs: CylinderFunction) -> CylinderFunction {
                (&self).$method(&rhs)
            }
        }
    };
}

function_binop!(Add, add, +);
function_binop!(Sub, sub, -);
function_binop!(Mul, mul, *);

impl Neg for &CylinderFunction {
    type Output = CylinderFunction;
    fn neg(self) -> CylinderFunction {
        self.map(|v| -v)
    }
}

impl Neg for CylinderFunction {
    type Output = CylinderFunction;
    fn neg(self) -> CylinderFunction {
        -&self
    }
}
