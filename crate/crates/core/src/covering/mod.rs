//! The covering system `(X̃, σ̃, τ)` as the space of backward paths in the
//! tail graph.
//!
//! A point of `X̃` is an infinite tail: labels `i_0 i_1 …` and points
//! `x_0 x_1 …` with `σ_{i_k}(x_{k+1}) = x_k`. Points are never stored one by
//! one. A depth-`D` [`Cylinder`] pins the first `D` labels and `D+1` points,
//! and the depth-`D` cylinders of live paths partition `X̃` into clopen sets.
//! [`CoveringSpace`] precomputes these partitions level by level together
//! with the index maps that realize truncation, `τ` and every `σ̃_i`, so
//! that locally constant functions and clopen sets can be manipulated
//! exactly by index arithmetic.

mod function;
mod separation;
mod set;
mod tail;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::dynsys::{FiniteDynSys, PointSet};
use crate::word::Word;

pub use function::CylinderFunction;
pub use separation::{separation_test, SeparationResult};
pub use set::CylinderSet;
pub use tail::InfiniteTailSpec;

/// Depth up to which [`CoveringSpace::new`] materializes cylinders.
pub const DEFAULT_MAX_DEPTH: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub source: usize,
    /// Zero-based label.
    pub label: usize,
    pub target: usize,
}

/// The labeled graph on `X` with an edge `y --i--> σ_i(y)`.
#[derive(Clone, Debug)]
pub struct TailGraph {
    n: usize,
    m: usize,
    edges: Vec<Edge>,
    live: Vec<bool>,
    boundary: Vec<bool>,
    /// `preimages[x]` lists `(label, source)` with `σ_label(source) = x`.
    preimages: Vec<Vec<(usize, usize)>>,
}

impl TailGraph {
    pub fn new(sys: &FiniteDynSys) -> Self {
        Self::with_boundary(sys, &PointSet::new())
    }

    /// Vertices in `boundary` are treated as live regardless of their
    /// preimages: they stand for points whose backward continuation lies
    /// outside a truncated system.
    pub fn with_boundary(sys: &FiniteDynSys, boundary: &PointSet) -> Self {
        let (n, m) = (sys.n(), sys.m());
        let mut edges = Vec::with_capacity(n * m);
        let mut preimages = vec![Vec::new(); m];
        for label in 0..n {
            for source in 0..m {
                let target = sys.apply(label, source);
                edges.push(Edge { source, label, target });
                preimages[target].push((label, source));
            }
        }
        let boundary: Vec<bool> = (0..m).map(|x| boundary.contains(&x)).collect();
        // Greatest fixpoint of "has an incoming edge from a live vertex".
        let mut live = vec![true; m];
        loop {
            let mut changed = false;
            for x in 0..m {
                if live[x] && !boundary[x] && !preimages[x].iter().any(|&(_, y)| live[y]) {
                    live[x] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        TailGraph { n, m, edges, live, boundary, preimages }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Edges ordered by label, then source.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_live(&self, x: usize) -> bool {
        self.live[x]
    }

    pub fn live_vertices(&self) -> PointSet {
        (0..self.m).filter(|&x| self.live[x]).collect()
    }

    pub fn is_boundary(&self, x: usize) -> bool {
        self.boundary[x]
    }

    pub fn target(&self, label: usize, source: usize) -> usize {
        self.edges[label * self.m + source].target
    }

    /// Live `(label, source)` pairs with `σ_label(source) = x`.
    pub fn live_preimages(&self, x: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.preimages[x].iter().copied().filter(|&(_, y)| self.live[y])
    }

    /// DOT rendering. Non-live vertices are dashed and grey.
    pub fn to_dot(&self, sys: &FiniteDynSys) -> String {
        let mut out = String::new();
        let name = sys.name().unwrap_or("system");
        writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
        for x in 0..self.m {
            let label = escape(sys.point_name(x));
            if self.live[x] {
                writeln!(out, "  v{x} [label=\"{label}\"];").unwrap();
            } else {
                writeln!(out, "  v{x} [label=\"{label}\", style=dashed, color=grey];").unwrap();
            }
        }
        for e in &self.edges {
            writeln!(out, "  v{} -> v{} [label=\"{}\"];", e.source, e.target, e.label + 1).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// A depth-`D` cylinder: labels `i_0 … i_{D-1}` and points `x_0 … x_D` with
/// `σ_{i_k}(x_{k+1}) = x_k` and `x_D` live.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cylinder {
    labels: Vec<u8>,
    vertices: Vec<usize>,
}

impl Cylinder {
    pub fn new(labels: Vec<u8>, vertices: Vec<usize>) -> Self {
        assert_eq!(labels.len() + 1, vertices.len(), "a depth-D cylinder has D labels and D+1 vertices");
        Cylinder { labels, vertices }
    }

    pub fn depth(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> Word {
        Word(self.labels.clone())
    }

    pub fn label(&self, k: usize) -> usize {
        self.labels[k] as usize
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex(&self, k: usize) -> usize {
        self.vertices[k]
    }

    pub fn truncate(&self, depth: usize) -> Cylinder {
        Cylinder { labels: self.labels[..depth].to_vec(), vertices: self.vertices[..=depth].to_vec() }
    }

    /// Drops `i_0` and `x_0`.
    pub fn shift(&self) -> Cylinder {
        Cylinder { labels: self.labels[1..].to_vec(), vertices: self.vertices[1..].to_vec() }
    }

    /// The cylinder of `σ̃_i` applied to this one, one level deeper.
    pub fn prepend(&self, label: usize, image: usize) -> Cylinder {
        let mut labels = Vec::with_capacity(self.labels.len() + 1);
        labels.push(label as u8);
        labels.extend_from_slice(&self.labels);
        let mut vertices = Vec::with_capacity(self.vertices.len() + 1);
        vertices.push(image);
        vertices.extend_from_slice(&self.vertices);
        Cylinder { labels, vertices }
    }

    pub fn is_consistent(&self, sys: &FiniteDynSys) -> bool {
        (0..self.depth()).all(|k| sys.apply(self.label(k), self.vertices[k + 1]) == self.vertices[k])
    }

    /// `(i_0 … ; x_0, x_1, …)` with one-based labels.
    pub fn describe(&self, sys: &FiniteDynSys) -> String {
        let labels: Vec<String> = self.labels.iter().map(|l| (l + 1).to_string()).collect();
        let vertices: Vec<&str> = self.vertices.iter().map(|&x| sys.point_name(x)).collect();
        format!("({};{})", labels.join(""), vertices.join(","))
    }
}

/// All cylinders of one depth, with the structural index maps.
#[derive(Clone, Debug)]
struct Level {
    cylinders: Vec<Cylinder>,
    index: HashMap<Cylinder, usize>,
    /// Truncation to the previous level (empty at depth 0).
    parent: Vec<usize>,
    /// `τ`: index at the previous level of the shifted cylinder.
    shift: Vec<usize>,
    /// `prepend[c][i]`: index at the next level of `σ̃_i(c)`.
    prepend: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

/// The covering space of a finite system, materialized to a fixed depth.
#[derive(Debug)]
pub struct CoveringSpace {
    sys: FiniteDynSys,
    graph: TailGraph,
    levels: Vec<Level>,
    max_depth: usize,
}

impl CoveringSpace {
    pub fn new(sys: &FiniteDynSys) -> Arc<Self> {
        Self::with_depth(sys, DEFAULT_MAX_DEPTH)
    }

    pub fn with_depth(sys: &FiniteDynSys, max_depth: usize) -> Arc<Self> {
        Self::build(sys, TailGraph::new(sys), max_depth)
    }

    /// Covering space of a truncated system whose `boundary` vertices are
    /// assumed to continue backwards outside the truncation.
    pub fn with_boundary(sys: &FiniteDynSys, boundary: &PointSet, max_depth: usize) -> Arc<Self> {
        Self::build(sys, TailGraph::with_boundary(sys, boundary), max_depth)
    }

    fn build(sys: &FiniteDynSys, graph: TailGraph, max_depth: usize) -> Arc<Self> {
        let n = graph.n();
        let mut levels: Vec<Level> = Vec::with_capacity(max_depth + 2);
        let base: Vec<Cylinder> = graph.live_vertices().into_iter().map(|x| Cylinder::new(vec![], vec![x])).collect();
        levels.push(Level::from_cylinders(base));
        for depth in 1..=max_depth + 1 {
            let prev = &levels[depth - 1];
            let mut next: Vec<Cylinder> = Vec::new();
            for c in &prev.cylinders {
                let last = c.vertex(depth - 1);
                for (label, source) in graph.live_preimages(last) {
                    let mut labels = c.labels.clone();
                    labels.push(label as u8);
                    let mut vertices = c.vertices.clone();
                    vertices.push(source);
                    next.push(Cylinder { labels, vertices });
                }
            }
            next.sort();
            let mut level = Level::from_cylinders(next);
            level.parent = level.cylinders.iter().map(|c| prev.index[&c.truncate(depth - 1)]).collect();
            level.shift = level.cylinders.iter().map(|c| prev.index[&c.shift()]).collect();
            let mut children = vec![Vec::new(); prev.cylinders.len()];
            for (k, &p) in level.parent.iter().enumerate() {
                children[p].push(k);
            }
            levels[depth - 1].children = children;
            levels.push(level);
        }
        for depth in 0..=max_depth {
            let prepend: Vec<Vec<usize>> = levels[depth]
                .cylinders
                .iter()
                .map(|c| {
                    (0..n)
                        .map(|i| levels[depth + 1].index[&c.prepend(i, graph.target(i, c.vertex(0)))])
                        .collect()
                })
                .collect();
            levels[depth].prepend = prepend;
        }
        Arc::new(CoveringSpace { sys: sys.clone(), graph, levels, max_depth })
    }

    pub fn system(&self) -> &FiniteDynSys {
        &self.sys
    }

    pub fn graph(&self) -> &TailGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    /// Largest depth at which functions and sets may live.
    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    fn level(&self, depth: usize) -> &Level {
        assert!(
            depth <= self.max_depth + 1,
            "depth {depth} exceeds the covering space's materialized depth {}",
            self.max_depth
        );
        &self.levels[depth]
    }

    pub(crate) fn check_depth(&self, depth: usize) {
        assert!(
            depth <= self.max_depth,
            "depth {depth} exceeds the covering space's max depth {}; build the space deeper",
            self.max_depth
        );
    }

    /// The depth-`D` cylinders, in canonical order.
    pub fn cylinders(&self, depth: usize) -> &[Cylinder] {
        &self.level(depth).cylinders
    }

    pub fn count(&self, depth: usize) -> usize {
        self.level(depth).cylinders.len()
    }

    pub fn index_of(&self, c: &Cylinder) -> Option<usize> {
        self.levels.get(c.depth()).and_then(|l| l.index.get(c).copied())
    }

    pub fn cylinder(&self, depth: usize, idx: usize) -> &Cylinder {
        &self.level(depth).cylinders[idx]
    }

    pub(crate) fn parent(&self, depth: usize, idx: usize) -> usize {
        self.level(depth).parent[idx]
    }

    /// Index of the ancestor of `idx` at a shallower depth.
    pub fn ancestor(&self, depth: usize, idx: usize, target: usize) -> usize {
        let mut d = depth;
        let mut k = idx;
        while d > target {
            k = self.parent(d, k);
            d -= 1;
        }
        k
    }

    pub(crate) fn shift_index(&self, depth: usize, idx: usize) -> usize {
        self.level(depth).shift[idx]
    }

    pub(crate) fn prepend_index(&self, depth: usize, idx: usize, label: usize) -> usize {
        self.level(depth).prepend[idx][label]
    }

    /// Index, at the same depth, of the cylinder of `σ̃_i(y)` for `y` in
    /// cylinder `idx` (the first `D` levels of `σ̃_i(y)` only depend on the
    /// first `D-1` levels of `y`).
    pub(crate) fn sigma_index(&self, depth: usize, idx: usize, label: usize) -> usize {
        let up = self.prepend_index(depth, idx, label);
        self.parent(depth + 1, up)
    }

    pub(crate) fn children(&self, depth: usize, idx: usize) -> &[usize] {
        &self.level(depth).children[idx]
    }

    /// Indices at depth `target >= depth` of all descendants of `idx`.
    pub fn descendants(&self, depth: usize, idx: usize, target: usize) -> Vec<usize> {
        let mut current = vec![idx];
        for d in depth..target {
            current = current.iter().flat_map(|&k| self.children(d, k).iter().copied()).collect();
        }
        current
    }

    /// JSON `{depth, cylinders: [{labels, vertices}]}` with one-based labels
    /// and point names.
    pub fn complex_json(&self, depth: usize) -> serde_json::Value {
        let cylinders: Vec<serde_json::Value> = self
            .cylinders(depth)
            .iter()
            .map(|c| {
                serde_json::json!({
                    "labels": c.labels.iter().map(|l| l + 1).collect::<Vec<_>>(),
                    "vertices": c.vertices.iter().map(|&x| self.sys.point_name(x)).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "depth": depth, "cylinders": cylinders })
    }

    /// Structural check that each tail has a unique `τ`-history: at every
    /// depth `1..=depth`, each cylinder has exactly one parent, the parents'
    /// children partition the level, the first label splits the level into
    /// the disjoint pieces `X̃_i`, and `σ̃_{i_0} ∘ τ` restores every cylinder.
    pub fn tau_determinism(&self, depth: usize) -> TauDeterminismReport {
        let mut failures = Vec::new();
        let depth = depth.min(self.max_depth);
        for d in 1..=depth {
            let level = self.level(d);
            let prev = self.level(d - 1);
            let child_total: usize = (0..prev.cylinders.len()).map(|k| prev.children[k].len()).sum();
            if child_total != level.cylinders.len() {
                failures.push(format!("depth {d}: children of depth {} do not cover the level", d - 1));
            }
            for (k, c) in level.cylinders.iter().enumerate() {
                if !c.is_consistent(&self.sys) {
                    failures.push(format!("depth {d}: inconsistent cylinder {}", c.describe(&self.sys)));
                }
                let p = level.parent[k];
                if prev.cylinders[p] != c.truncate(d - 1) || !prev.children[p].contains(&k) {
                    failures.push(format!("depth {d}: bad parent for {}", c.describe(&self.sys)));
                }
                let back = self.prepend_index(d - 1, level.shift[k], c.label(0));
                if back != k {
                    failures.push(format!("depth {d}: σ̃_i∘τ does not restore {}", c.describe(&self.sys)));
                }
            }
            let mut per_label = vec![0usize; self.n()];
            for c in &level.cylinders {
                per_label[c.label(0)] += 1;
            }
            if per_label.iter().sum::<usize>() != level.cylinders.len() {
                failures.push(format!("depth {d}: first labels do not partition the level"));
            }
        }
        TauDeterminismReport { depth, pass: failures.is_empty(), failures }
    }
}

impl Level {
    fn from_cylinders(cylinders: Vec<Cylinder>) -> Self {
        let index = cylinders.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect();
        Level { cylinders, index, parent: Vec::new(), shift: Vec::new(), prepend: Vec::new(), children: Vec::new() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TauDeterminismReport {
    pub depth: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn tail_graph_examples() {
        let p3 = builtin::p3();
        let g = TailGraph::new(&p3);
        let edges: Vec<(usize, usize, usize)> = g.edges().iter().map(|e| (e.source, e.label + 1, e.target)).collect();
        assert_eq!(edges, vec![(0, 1, 0), (1, 1, 1), (2, 1, 0), (0, 2, 0), (1, 2, 0), (2, 2, 2)]);
        assert_eq!(g.live_vertices(), p3.all_points());

        let id = FiniteDynSys::from_maps("id", vec![vec![0, 1, 2]]).unwrap();
        let g = TailGraph::new(&id);
        assert!(g.edges().iter().all(|e| e.source == e.target));
        assert_eq!(g.live_vertices().len(), 3);

        let g = TailGraph::new(&builtin::ns());
        assert_eq!(g.live_vertices(), PointSet::from([0]));
    }

    #[test]
    fn surjective_systems_are_all_live() {
        for sys in FiniteDynSys::enumerate(3, 2).filter(FiniteDynSys::is_surjective) {
            assert_eq!(TailGraph::new(&sys).live_vertices(), sys.all_points());
        }
    }

    #[test]
    fn cylinder_examples() {
        let p3 = builtin::p3();
        let space = CoveringSpace::with_depth(&p3, 3);
        let described: Vec<String> = space.cylinders(1).iter().map(|c| c.describe(&p3)).collect();
        assert_eq!(described, vec!["(1;0,0)", "(1;0,2)", "(1;1,1)", "(2;0,0)", "(2;0,1)", "(2;2,2)"]);
        assert_eq!(space.count(0), 3);

        let fs2 = builtin::fs2();
        let space = CoveringSpace::with_depth(&fs2, 3);
        assert_eq!(space.count(2), 8);
        for c in space.cylinders(2) {
            for k in 0..2 {
                assert_eq!(c.vertex(k), c.label(k));
            }
        }
    }

    #[test]
    fn tau_determinism_passes() {
        assert!(CoveringSpace::with_depth(&builtin::p3(), 3).tau_determinism(3).pass);
        assert!(CoveringSpace::with_depth(&builtin::fs2(), 4).tau_determinism(4).pass);
        let r = CoveringSpace::with_depth(&builtin::sw2(), 2).tau_determinism(0);
        assert!(r.pass && r.depth == 0);
    }

    #[test]
    fn dot_export() {
        let p3 = builtin::p3();
        let dot = TailGraph::new(&p3).to_dot(&p3);
        assert_eq!(dot.matches("->").count(), 6);
        let pt = builtin::point2();
        let dot = TailGraph::new(&pt).to_dot(&pt);
        assert_eq!(dot.matches("v0 -> v0").count(), 2);
        let ns = builtin::ns();
        let dot = TailGraph::new(&ns).to_dot(&ns);
        assert!(dot.contains("v1 [label=\"1\", style=dashed"));
    }

    #[test]
    fn complex_json_shape() {
        let space = CoveringSpace::with_depth(&builtin::p3(), 2);
        let v = space.complex_json(1);
        assert_eq!(v["depth"], 1);
        assert_eq!(v["cylinders"].as_array().unwrap().len(), 6);
        assert_eq!(v["cylinders"][1]["labels"], serde_json::json!([1]));
        assert_eq!(v["cylinders"][1]["vertices"], serde_json::json!(["0", "2"]));
    }
}
