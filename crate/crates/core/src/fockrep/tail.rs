use serde::Serialize;

use super::{fock_dimension, SparseMatrix, TruncatedRep, DEFAULT_MAX_DIM};
use crate::dynsys::TailedSys;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::word::Word;

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct TailMultiplicityReport {
    pub u: String,
    pub k: usize,
    pub fock_depth: usize,
    /// Interior basis vectors annihilated by every generator image.
    pub alpha: usize,
    pub expected_alpha: usize,
    /// Suffix blocks entrywise equal to the truncated `π_u`.
    pub beta: usize,
    pub expected_beta: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Restricts `π^T_{(u,-k)}` along `C(X) → C(X^T)` (functions extended by zero
/// on the tail) and splits it as `0^{(α)} ⊕ π_u^{(β)}`.
///
/// The generators are `δ_y` for `y ∈ X` and `s_i χ_X`. The vectors `ξ_w` with
/// `|w| < k` sit over tail points and are killed; for each `w` with `|w| = k`
/// the span of `ξ_{vw}` is matched with `π_u` through `ξ_{vw} ↔ ξ_v`.
pub fn tail_multiplicity(sys_t: &TailedSys, u: usize, k: usize, depth: usize) -> Result<TailMultiplicityReport> {
    let base = sys_t.base();
    if !base.range_deficiency().deficiency.contains(&u) {
        return Err(Error::Precondition(format!("{u} is not a deficiency point of the base system")));
    }
    if k > sys_t.depth() {
        return Err(Error::Precondition(format!("tail point (u,-{k}) lies beyond the tail depth {}", sys_t.depth())));
    }
    if k >= depth {
        return Err(Error::Precondition(format!("Fock depth {depth} must exceed k = {k}")));
    }
    let sys = sys_t.system();
    let start = if k == 0 { u } else { sys_t.tail_index(u, k).expect("tail point exists") };
    let n = sys.n();
    let rep = TruncatedRep::orbit_with_guard(sys, start, depth, DEFAULT_MAX_DIM)?;
    let pi_u = TruncatedRep::orbit(base, u, depth - k)?;

    let on_x = |y: usize| -> Vec<Scalar> { (0..sys.m()).map(|x| Scalar::from_int((x == y) as i64)).collect() };
    let chi_x: Vec<Scalar> = (0..sys.m()).map(|x| Scalar::from_int((x < base.m()) as i64)).collect();
    let mut generators: Vec<SparseMatrix> = (0..base.m()).map(|y| rep.function(&on_x(y))).collect();
    let lchi = rep.function(&chi_x);
    generators.extend((0..n).map(|i| rep.shift(i).mul(&lchi)));

    let base_point = |y: usize| -> Vec<Scalar> { (0..base.m()).map(|x| Scalar::from_int((x == y) as i64)).collect() };
    let mut expected: Vec<SparseMatrix> = (0..base.m()).map(|y| pi_u.function(&base_point(y))).collect();
    expected.extend((0..n).map(|i| pi_u.shift(i).clone()));

    let mut killed_cols = vec![true; rep.dim()];
    for g in &generators {
        for (_, c, _) in g.entries() {
            killed_cols[c] = false;
        }
    }
    let interior = rep.interior();
    let killed: Vec<usize> = interior.iter().copied().filter(|&c| killed_cols[c]).collect();
    let predicted: Vec<usize> = interior.iter().copied().filter(|&c| rep.basis().word(c).len() < k).collect();
    let alpha = killed.len();

    let mut max_deviation: f64 = 0.0;
    let mut beta = 0;
    let small_words = Word::up_to_length(n, depth - k);
    for w in Word::all_of_length(n, k) {
        let block: Vec<usize> =
            small_words.iter().map(|v| rep.basis().index_of(&v.concat(&w)).expect("block word fits")).collect();
        let mut block_dev: f64 = 0.0;
        for (g, e) in generators.iter().zip(&expected) {
            block_dev = block_dev.max(g.compress(&block, &block).deviation(e));
            // Nothing may leak out of the block.
            let inside: std::collections::BTreeSet<usize> = block.iter().copied().collect();
            for (r, c, v) in g.entries() {
                if inside.contains(&c) && !inside.contains(&r) {
                    block_dev = block_dev.max(v.modulus());
                }
            }
        }
        if block_dev == 0.0 {
            beta += 1;
        }
        max_deviation = max_deviation.max(block_dev);
    }

    let expected_alpha = if k == 0 { 0 } else { fock_dimension(n, k - 1) };
    let expected_beta = n.pow(k as u32);
    let pass = killed == predicted && alpha == expected_alpha && beta == expected_beta && max_deviation == 0.0;
    Ok(TailMultiplicityReport {
        u: base.point_name(u).to_string(),
        k,
        fock_depth: depth,
        alpha,
        expected_alpha,
        beta,
        expected_beta,
        max_deviation,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn ns_tail_counts() {
        let t = builtin::ns().add_tail(3).unwrap();
        for (k, a, b) in [(0, 0, 1), (1, 1, 2), (2, 3, 4), (3, 7, 8)] {
            let r = tail_multiplicity(&t, 1, k, 4).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!((r.alpha, r.beta), (a, b));
        }
    }

    #[test]
    fn invalid_arguments() {
        let t = builtin::ns().add_tail(3).unwrap();
        assert!(tail_multiplicity(&t, 0, 1, 4).is_err());
        assert!(tail_multiplicity(&t, 1, 4, 6).is_err());
        assert!(tail_multiplicity(&t, 1, 3, 3).is_err());
    }
}
