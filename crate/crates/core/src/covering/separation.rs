use std::collections::HashMap;

use serde::Serialize;

use super::{InfiniteTailSpec, TailGraph};
use crate::dynsys::FiniteDynSys;

/// Outcome of the test whether the sets `X̃_w` separate the points of `X̃`.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationResult {
    pub separates: bool,
    /// Smallest pair `(x, y)`, `x ≠ y`, starting two distinct tails with the
    /// same label sequence.
    pub witness: Option<(usize, usize)>,
    /// Two such tails, when a witness exists.
    #[serde(skip)]
    pub witness_tails: Option<(InfiniteTailSpec, InfiniteTailSpec)>,
    /// Size of the greatest fixpoint of the off-diagonal pair graph.
    pub pair_fixpoint_size: usize,
}

/// Two distinct tails share a label sequence iff some off-diagonal pair
/// `(x, y)` of live points admits an infinite backward path in the pair
/// graph with edges `(x', y') -> (σ_i x', σ_i y')`; the set of such pairs
/// is the greatest fixpoint computed here.
pub fn separation_test(graph: &TailGraph, sys: &FiniteDynSys) -> SeparationResult {
    let live = graph.live_vertices();
    let mut pairs: Vec<(usize, usize)> =
        live.iter().flat_map(|&x| live.iter().map(move |&y| (x, y))).filter(|(x, y)| x != y).collect();
    let preds = |(x, y): (usize, usize), alive: &dyn Fn((usize, usize)) -> bool| -> Vec<(usize, (usize, usize))> {
        let mut out = Vec::new();
        for (i, xs) in graph.live_preimages(x) {
            for (j, ys) in graph.live_preimages(y) {
                if i == j && xs != ys && alive((xs, ys)) {
                    out.push((i, (xs, ys)));
                }
            }
        }
        out.sort();
        out
    };
    loop {
        let current: std::collections::HashSet<(usize, usize)> = pairs.iter().copied().collect();
        let next: Vec<(usize, usize)> =
            pairs.iter().copied().filter(|&p| !preds(p, &|q| current.contains(&q)).is_empty()).collect();
        if next.len() == pairs.len() {
            break;
        }
        pairs = next;
    }
    pairs.sort();
    let alive: std::collections::HashSet<(usize, usize)> = pairs.iter().copied().collect();
    let witness = pairs.first().copied();
    let witness_tails = witness.map(|start| {
        // Follow smallest predecessors inside the fixpoint until a pair repeats.
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut path = vec![start];
        let mut labels: Vec<u8> = Vec::new();
        loop {
            let cur = *path.last().unwrap();
            if let Some(&j) = seen.get(&cur) {
                path.pop();
                let cyc_pairs = path.split_off(j);
                let cyc_labels = labels.split_off(j);
                let build = |pick: fn(&(usize, usize)) -> usize| {
                    InfiniteTailSpec::new(
                        sys,
                        labels.clone(),
                        path.iter().map(pick).collect(),
                        cyc_labels.clone(),
                        cyc_pairs.iter().map(pick).collect(),
                    )
                    .expect("pair-graph paths are consistent tails")
                };
                return (build(|p| p.0), build(|p| p.1));
            }
            seen.insert(cur, path.len() - 1);
            let (label, next) = preds(cur, &|q| alive.contains(&q))[0];
            labels.push(label as u8);
            path.push(next);
        }
    });
    SeparationResult { separates: pairs.is_empty(), witness, witness_tails, pair_fixpoint_size: pairs.len() }
}
