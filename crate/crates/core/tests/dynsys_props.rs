mod common;

use common::{all_systems, closed_backward, closed_forward, subsets, system};
use mvdyn_core::PointSet;
use proptest::prelude::*;

proptest! {
    #[test]
    fn invariant_sets_are_closed_and_complete(sys in system(5, 3)) {
        let inv = sys.invariant_sets(20).unwrap();
        for a in &inv {
            for i in 0..sys.n() {
                prop_assert!(sys.image(i, a).is_subset(a));
            }
        }
        let brute: Vec<PointSet> = subsets(sys.m()).filter(|s| closed_forward(&sys, s)).collect();
        prop_assert_eq!(inv.len(), brute.len());
        for s in &brute {
            prop_assert!(inv.contains(s));
        }
    }

    #[test]
    fn bi_invariant_sets_inside_invariant_sets(sys in system(5, 3)) {
        let inv = sys.invariant_sets(20).unwrap();
        for b in sys.bi_invariant_sets(20).unwrap() {
            prop_assert!(inv.contains(&b));
            prop_assert!(closed_backward(&sys, &b));
        }
    }

    #[test]
    fn minimal_iff_no_proper_invariant_set(sys in system(5, 3)) {
        let m = sys.m();
        let proper = sys.invariant_sets(20).unwrap().iter().any(|s| !s.is_empty() && s.len() < m);
        prop_assert_eq!(sys.is_minimal(), !proper);
        if sys.is_minimal() {
            prop_assert!(sys.is_surjective());
        } else {
            let (x, orbit) = sys.minimality().witness.unwrap();
            prop_assert_eq!(&orbit, &sys.forward_orbit(x).unwrap());
            prop_assert!(orbit.len() < m && closed_forward(&sys, &orbit));
        }
    }

    #[test]
    fn forward_orbit_is_least_invariant_superset(sys in system(5, 2), x in 0usize..5) {
        let x = x % sys.m();
        let orbit = sys.forward_orbit(x).unwrap();
        prop_assert!(orbit.contains(&x) && closed_forward(&sys, &orbit));
        for s in subsets(sys.m()).filter(|s| s.contains(&x) && closed_forward(&sys, s)) {
            prop_assert!(orbit.is_subset(&s));
        }
    }

    #[test]
    fn tail_adding_moves_the_deficiency(sys in system(4, 2), k in 1usize..4) {
        let u = sys.range_deficiency().deficiency;
        let tailed = sys.add_tail(k).unwrap();
        let ext = tailed.system();
        if u.is_empty() {
            prop_assert_eq!(ext.m(), sys.m());
        } else {
            let expected: PointSet = u.iter().map(|&p| tailed.tail_index(p, k).unwrap()).collect();
            prop_assert_eq!(ext.range_deficiency().deficiency, expected);
            prop_assert!(closed_forward(ext, &tailed.base_points()));
            for &p in &u {
                for i in 0..ext.n() {
                    prop_assert_eq!(ext.apply(i, tailed.tail_index(p, 1).unwrap()), p);
                    for level in 2..=k {
                        let from = tailed.tail_index(p, level).unwrap();
                        prop_assert_eq!(ext.apply(i, from), tailed.tail_index(p, level - 1).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip(sys in system(4, 3)) {
        let back = mvdyn_core::FiniteDynSys::from_json(&sys.to_json()).unwrap();
        prop_assert_eq!(back.maps(), sys.maps());
        prop_assert_eq!(back.points(), sys.points());
    }
}

#[test]
fn bi_invariant_components_match_subset_scan_exhaustively() {
    for n in 1..=2 {
        for sys in all_systems(4, n) {
            let brute: Vec<PointSet> =
                subsets(sys.m()).filter(|s| closed_forward(&sys, s) && closed_backward(&sys, s)).collect();
            let got = sys.bi_invariant_sets(20).unwrap();
            assert_eq!(got.len(), brute.len(), "{}", sys.to_json());
            assert!(brute.iter().all(|s| got.contains(s)), "{}", sys.to_json());
        }
    }
}

#[test]
fn minimality_implies_surjectivity_exhaustively() {
    for sys in all_systems(3, 2) {
        assert!(!sys.is_minimal() || sys.is_surjective(), "{}", sys.to_json());
    }
}
