use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{Block, CoreElement};
use crate::error::{Error, Result};
use crate::word::Word;

/// Largest singular value of a `rows × cols` matrix given by its nonzero
/// entries.
pub fn spectral_norm(rows: usize, cols: usize, entries: &[(usize, usize, Complex64)]) -> f64 {
    if rows == 0 || cols == 0 || entries.is_empty() {
        return 0.0;
    }
    if rows == 1 && cols == 1 {
        return entries.iter().map(|e| e.2).sum::<Complex64>().norm();
    }
    let mut m = DMatrix::<Complex64>::zeros(rows, cols);
    for &(r, c, v) in entries {
        m[(r, c)] += v;
    }
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Pointwise largest singular value of the coefficient matrix of a block,
/// maximized over the cylinders of the block's depth.
pub(super) fn block_norm(space: &crate::covering::CoveringSpace, block: &Block) -> f64 {
    let index = |words: Vec<&Word>| -> std::collections::BTreeMap<Word, usize> {
        let mut ws: Vec<Word> = words.into_iter().cloned().collect();
        ws.sort();
        ws.dedup();
        ws.into_iter().enumerate().map(|(k, w)| (w, k)).collect()
    };
    let rows = index(block.entries.keys().map(|(u, _)| u).collect());
    let cols = index(block.entries.keys().map(|(_, v)| v).collect());
    let mut best: f64 = 0.0;
    for c in 0..space.count(block.depth) {
        let entries: Vec<(usize, usize, Complex64)> = block
            .entries
            .iter()
            .map(|((u, v), f)| (rows[u], cols[v], f.value(c).to_complex()))
            .filter(|e| e.2 != Complex64::new(0.0, 0.0))
            .collect();
        best = best.max(spectral_norm(rows.len(), cols.len(), &entries));
    }
    best
}

/// `max_d ‖a_d‖ ≤ ‖a‖ ≤ Σ_d ‖a_d‖` over the homogeneous parts `a_d`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
}

impl CoreElement {
    /// Norm of the degree-`d` part.
    pub fn homogeneous_part_norm(&self, d: i32) -> f64 {
        self.blocks.get(&d).map_or(0.0, |b| block_norm(&self.space, b))
    }

    /// Exact norm of a homogeneous element.
    pub fn homogeneous_norm(&self) -> Result<f64> {
        match self.blocks.len() {
            0 => Ok(0.0),
            1 => Ok(self.homogeneous_part_norm(*self.blocks.keys().next().unwrap())),
            _ => Err(Error::Precondition(format!(
                "element has degrees {:?}; only bounds are available for mixed elements",
                self.degrees()
            ))),
        }
    }

    /// Bounds on the norm of a possibly mixed element.
    pub fn norm_bounds(&self) -> NormBounds {
        let parts: Vec<f64> = self.blocks.keys().map(|&d| self.homogeneous_part_norm(d)).collect();
        NormBounds { lower: parts.iter().cloned().fold(0.0, f64::max), upper: parts.iter().sum() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::covering::{CoveringSpace, CylinderFunction};
    use crate::scalar::Scalar;

    #[test]
    fn spectral_norm_basics() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(spectral_norm(2, 2, &[(0, 1, one)]), 1.0);
        assert!((spectral_norm(2, 2, &[(0, 0, one), (0, 1, one), (1, 0, one), (1, 1, one)]) - 2.0).abs() < 1e-12);
        assert!((spectral_norm(2, 1, &[(0, 0, one), (1, 0, one)]) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_examples() {
        let s = CoveringSpace::with_depth(&builtin::fs2(), 4);
        let t1 = CoreElement::t(&s, 0);
        assert!((t1.homogeneous_norm().unwrap() - 1.0).abs() < 1e-12);
        let v = CoreElement::isometry_v(&s).unwrap();
        assert!((v.homogeneous_norm().unwrap() - 1.0).abs() < 1e-12);
        let f = CylinderFunction::from_fn(&s, 1, |c| Scalar::from_int(c.label(0) as i64 * 3 - 1));
        let mixed = &CoreElement::function(&f) + &t1;
        assert!(mixed.homogeneous_norm().is_err());
        let b = mixed.norm_bounds();
        assert!((b.lower - 2.0).abs() < 1e-12 && (b.upper - 3.0).abs() < 1e-12);
    }
}
