//! Seeded random elements for property suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corealg::{CoreElement, TowerElement};
use crate::covering::{CoveringSpace, CylinderFunction};
use crate::scalar::Scalar;
use crate::word::Word;

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational values, zero about a third of the time.
pub fn scalar(rng: &mut SuiteRng) -> Scalar {
    match rng.gen_range(0..6) {
        0 | 1 => Scalar::zero(),
        2 => Scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
        _ => Scalar::from_int(rng.gen_range(-3..=3)),
    }
}

pub fn function(space: &Arc<CoveringSpace>, depth: usize, rng: &mut SuiteRng) -> CylinderFunction {
    let values = (0..space.count(depth)).map(|_| scalar(rng)).collect();
    CylinderFunction::from_values(space, depth, values)
}

pub fn word(n: usize, max_len: usize, rng: &mut SuiteRng) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word((0..len).map(|_| rng.gen_range(0..n) as u8).collect())
}

/// A sum of `terms` random `t_u f t_v*` with `|u|, |v| ≤ max_len` and
/// coefficient depth at most `max_depth`.
pub fn core(space: &Arc<CoveringSpace>, terms: usize, max_len: usize, max_depth: usize, rng: &mut SuiteRng) -> CoreElement {
    let n = space.n();
    let list = (0..terms)
        .map(|_| {
            let u = word(n, max_len, rng);
            let v = word(n, max_len, rng);
            let d = rng.gen_range(0..=max_depth);
            (u, function(space, d, rng), v)
        })
        .collect();
    CoreElement::from_terms(space, list)
}

/// A random element of `B_k` with a few nonzero entries.
pub fn tower(space: &Arc<CoveringSpace>, level: usize, depth: usize, rng: &mut SuiteRng) -> TowerElement {
    let n = space.n();
    let mut entries = BTreeMap::new();
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let u = Word((0..level).map(|_| rng.gen_range(0..n) as u8).collect());
        let v = Word((0..level).map(|_| rng.gen_range(0..n) as u8).collect());
        entries.insert((u, v), function(space, depth, rng));
    }
    TowerElement::new(space, level, entries)
}

/// A random diagonal element of `B_k`.
pub fn diagonal_tower(space: &Arc<CoveringSpace>, level: usize, depth: usize, rng: &mut SuiteRng) -> TowerElement {
    let entries = Word::all_of_length(space.n(), level)
        .into_iter()
        .map(|u| ((u.clone(), u), function(space, depth, rng)))
        .collect();
    TowerElement::new(space, level, entries)
}
