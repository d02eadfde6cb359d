#![allow(dead_code)]

use mvdyn_core::{FiniteDynSys, PointSet};
use proptest::prelude::*;

/// Systems with `1..=max_m` points and `1..=max_n` maps.
pub fn system(max_m: usize, max_n: usize) -> impl Strategy<Value = FiniteDynSys> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(0..m, m), n)
            .prop_map(|maps| FiniteDynSys::from_maps("random", maps).expect("valid maps"))
    })
}

pub fn surjective_system(max_m: usize) -> impl Strategy<Value = FiniteDynSys> {
    system(max_m, 2).prop_filter("surjective", |s| s.is_surjective() && s.n() == 2)
}

pub fn subsets(m: usize) -> impl Iterator<Item = PointSet> {
    (0u32..1 << m).map(move |mask| (0..m).filter(|x| mask >> x & 1 == 1).collect())
}

pub fn closed_forward(sys: &FiniteDynSys, s: &PointSet) -> bool {
    s.iter().all(|&x| sys.maps().iter().all(|map| s.contains(&map[x])))
}

pub fn closed_backward(sys: &FiniteDynSys, s: &PointSet) -> bool {
    (0..sys.m()).all(|x| sys.maps().iter().all(|map| !s.contains(&map[x]) || s.contains(&x)))
}

pub fn all_systems(max_m: usize, n: usize) -> impl Iterator<Item = FiniteDynSys> {
    (1..=max_m).flat_map(move |m| FiniteDynSys::enumerate(m, n))
}
