mod common;

use std::collections::BTreeSet;

use common::system;
use mvdyn_core::covering::separation_test;
use mvdyn_core::random;
use mvdyn_core::{CoveringSpace, Cylinder, CylinderFunction, CylinderSet, FiniteDynSys, Scalar, TailGraph, Word};
use proptest::prelude::*;

/// Points with a backward path of length `|X|`, which then continues forever.
fn live_oracle(sys: &FiniteDynSys) -> Vec<bool> {
    let m = sys.m();
    let mut reach: Vec<bool> = vec![true; m];
    for _ in 0..m {
        reach = (0..m).map(|x| (0..sys.n()).any(|i| (0..m).any(|y| sys.apply(i, y) == x && reach[y]))).collect();
    }
    reach
}

/// All consistent depth-`d` backward paths ending at a live vertex.
fn cylinders_oracle(sys: &FiniteDynSys, d: usize) -> BTreeSet<Cylinder> {
    let live = live_oracle(sys);
    let mut paths: Vec<(Vec<u8>, Vec<usize>)> = (0..sys.m()).map(|x| (vec![], vec![x])).collect();
    for _ in 0..d {
        let mut next = Vec::new();
        for (labels, vertices) in &paths {
            let last = *vertices.last().unwrap();
            for i in 0..sys.n() {
                for y in 0..sys.m() {
                    if sys.apply(i, y) == last {
                        let mut l = labels.clone();
                        l.push(i as u8);
                        let mut v = vertices.clone();
                        v.push(y);
                        next.push((l, v));
                    }
                }
            }
        }
        paths = next;
    }
    paths.into_iter().filter(|(_, v)| live[*v.last().unwrap()]).map(|(l, v)| Cylinder::new(l, v)).collect()
}

fn with_seed() -> impl Strategy<Value = (FiniteDynSys, u64)> {
    (system(3, 2), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tail_graph_structure(sys in system(5, 3)) {
        let g = TailGraph::new(&sys);
        for x in 0..sys.m() {
            let out: Vec<usize> = g.edges().iter().filter(|e| e.source == x).map(|e| e.label).collect();
            prop_assert_eq!(out, (0..sys.n()).collect::<Vec<_>>());
        }
        let oracle = live_oracle(&sys);
        for x in 0..sys.m() {
            prop_assert_eq!(g.is_live(x), oracle[x]);
        }
        if sys.is_surjective() {
            prop_assert_eq!(g.live_vertices().len(), sys.m());
        }
    }

    #[test]
    fn cylinders_are_the_live_backward_paths(sys in system(3, 2)) {
        let space = CoveringSpace::with_depth(&sys, 3);
        for d in 0..=3 {
            let got: BTreeSet<Cylinder> = space.cylinders(d).iter().cloned().collect();
            prop_assert_eq!(got.len(), space.count(d));
            prop_assert_eq!(got, cylinders_oracle(&sys, d));
        }
    }

    #[test]
    fn partition_of_unity(sys in system(3, 2)) {
        let space = CoveringSpace::with_depth(&sys, 4);
        let one = CylinderFunction::one(&space);
        for k in 0..=3 {
            let sum = Word::all_of_length(sys.n(), k)
                .iter()
                .map(|w| CylinderFunction::chi(&space, w))
                .fold(CylinderFunction::zero(&space), |a, b| a + b);
            prop_assert!(sum == one);
            let cyl = (0..space.count(k))
                .map(|j| CylinderFunction::indicator(&CylinderSet::from_fn(&space, k, |c| *c == *space.cylinder(k, j))))
                .fold(CylinderFunction::zero(&space), |a, b| a + b);
            prop_assert!(cyl == one);
        }
    }

    #[test]
    fn refinement_preserves_values((sys, seed) in with_seed()) {
        let space = CoveringSpace::with_depth(&sys, 4);
        let mut rng = random::rng(seed);
        for d in 0..3 {
            let f = random::function(&space, d, &mut rng);
            let r = f.refine(d + 1);
            for c in space.cylinders(d + 1) {
                prop_assert_eq!(r.eval(c), f.eval(&c.truncate(d)));
            }
        }
    }

    #[test]
    fn sigma_action_matches_path_prepending((sys, seed) in with_seed()) {
        let space = CoveringSpace::with_depth(&sys, 4);
        let mut rng = random::rng(seed);
        let f = random::function(&space, 2, &mut rng);
        for i in 0..sys.n() {
            let g = f.compose_sigma(i);
            for c in space.cylinders(2) {
                let image = c.prepend(i, sys.apply(i, c.vertex(0))).truncate(2);
                prop_assert_eq!(g.eval(c), f.eval(&image));
            }
            let chi = CylinderFunction::chi(&space, &Word::letter(i));
            prop_assert!(&chi * &g.compose_tau() == &chi * &f);
        }
    }

    #[test]
    fn projection_is_equivariant((sys, seed) in with_seed()) {
        let space = CoveringSpace::with_depth(&sys, 3);
        let mut rng = random::rng(seed);
        let g: Vec<Scalar> = (0..sys.m()).map(|_| random::scalar(&mut rng)).collect();
        for i in 0..sys.n() {
            let lhs = CylinderFunction::lift(&space, &g, 0).compose_sigma(i);
            let pulled: Vec<Scalar> = (0..sys.m()).map(|x| g[sys.apply(i, x)].clone()).collect();
            prop_assert!(lhs == CylinderFunction::lift(&space, &pulled, 0));
        }
    }

    #[test]
    fn cylinder_sets_are_supports((sys, seed) in with_seed()) {
        let space = CoveringSpace::with_depth(&sys, 4);
        let mut rng = random::rng(seed);
        let a = random::function(&space, 1, &mut rng).support();
        let b = random::function(&space, 2, &mut rng).support();
        prop_assert!(CylinderFunction::indicator(&a).support() == a);
        let (u, n) = (a.union(&b), a.intersection(&b));
        for c in space.cylinders(2) {
            let (x, y) = (a.contains(c), b.contains(c));
            prop_assert_eq!(u.contains(c), x || y);
            prop_assert_eq!(n.contains(c), x && y);
            prop_assert_eq!(a.difference(&b).contains(c), x && !y);
            prop_assert_eq!(a.complement().contains(c), !x);
        }
        prop_assert!(n.is_subset(&a) && a.is_subset(&u));
    }

    #[test]
    fn separation_witnesses_are_genuine(sys in system(4, 2)) {
        let sep = separation_test(&TailGraph::new(&sys), &sys);
        prop_assert_eq!(sep.separates, sep.witness.is_none());
        prop_assert_eq!(sep.separates, sep.pair_fixpoint_size == 0);
        if let Some((a, b)) = sep.witness_tails {
            let depth = 2 * sys.m() * sys.m();
            prop_assert_eq!(a.labels(depth), b.labels(depth));
            prop_assert_ne!(a.base(), b.base());
            prop_assert!(a.cylinder(depth).is_consistent(&sys) && b.cylinder(depth).is_consistent(&sys));
        }
    }
}
