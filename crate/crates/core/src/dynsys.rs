//! Finite multivariable dynamical systems `(X, σ_1, …, σ_n)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Word;

pub type PointSet = BTreeSet<usize>;

/// Default bound on `|X|` for exhaustive subset scans.
pub const DEFAULT_SCAN_GUARD: usize = 20;

/// A finite point set with `n` total self-maps. `maps[i][x]` is the index of
/// `σ_{i+1}(points[x])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteDynSys {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    points: Vec<String>,
    maps: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct SystemInput {
    name: Option<String>,
    points: Vec<String>,
    maps: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RangeDeficiency {
    pub range_union: PointSet,
    /// `U = X \ ∪ σ_i(X)`.
    pub deficiency: PointSet,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minimality {
    pub minimal: bool,
    /// A point whose forward orbit is a proper invariant set, with that orbit.
    pub witness: Option<(usize, PointSet)>,
}

/// Orders point sets by size, then lexicographically.
pub fn sort_point_sets(sets: &mut [PointSet]) {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
}

impl FiniteDynSys {
    pub fn new(name: Option<String>, points: Vec<String>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let m = points.len();
        if m == 0 {
            return Err(Error::InvalidSystem("points: at least one point is required".into()));
        }
        if maps.is_empty() {
            return Err(Error::InvalidSystem("maps: at least one map is required".into()));
        }
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != m {
            return Err(Error::InvalidSystem("points: identifiers must be distinct".into()));
        }
        for (i, map) in maps.iter().enumerate() {
            if map.len() != m {
                return Err(Error::InvalidSystem(format!(
                    "maps[{i}]: has {} entries, expected {m}",
                    map.len()
                )));
            }
            if let Some((x, &target)) = map.iter().enumerate().find(|(_, &t)| t >= m) {
                return Err(Error::MapOutOfRange { map: i, point: x, target, m });
            }
        }
        if maps.len() > 255 {
            return Err(Error::InvalidSystem("maps: at most 255 maps are supported".into()));
        }
        Ok(FiniteDynSys { name, points, maps })
    }

    /// Points named `0, 1, …, m-1`.
    pub fn from_maps(name: &str, maps: Vec<Vec<usize>>) -> Result<Self> {
        let m = maps.first().map(Vec::len).unwrap_or(0);
        let points = (0..m).map(|x| x.to_string()).collect();
        FiniteDynSys::new(Some(name.to_string()), points, maps)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let input: SystemInput = serde_json::from_str(text)?;
        FiniteDynSys::new(input.name, input.points, input.maps)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system serializes")
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of maps.
    pub fn n(&self) -> usize {
        self.maps.len()
    }

    /// Number of points.
    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn point_name(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn point_index(&self, name: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x < self.m() {
            Ok(())
        } else {
            Err(Error::UnknownPoint(x.to_string()))
        }
    }

    /// `σ_i(x)` with zero-based `i`.
    pub fn apply(&self, i: usize, x: usize) -> usize {
        self.maps[i][x]
    }

    /// `σ_w(x) = σ_{w_1} ∘ ⋯ ∘ σ_{w_k}(x)`.
    pub fn apply_word(&self, w: &Word, x: usize) -> usize {
        w.labels().rev().fold(x, |y, i| self.apply(i, y))
    }

    pub fn image(&self, i: usize, set: &PointSet) -> PointSet {
        set.iter().map(|&x| self.apply(i, x)).collect()
    }

    pub fn preimage(&self, i: usize, set: &PointSet) -> PointSet {
        (0..self.m()).filter(|&x| set.contains(&self.apply(i, x))).collect()
    }

    pub fn all_points(&self) -> PointSet {
        (0..self.m()).collect()
    }

    pub fn range_deficiency(&self) -> RangeDeficiency {
        let range_union: PointSet = self.maps.iter().flatten().copied().collect();
        let deficiency: PointSet = (0..self.m()).filter(|x| !range_union.contains(x)).collect();
        RangeDeficiency { surjective: deficiency.is_empty(), range_union, deficiency }
    }

    pub fn is_surjective(&self) -> bool {
        self.range_deficiency().surjective
    }

    /// Least set containing `x` and closed under every `σ_i`.
    pub fn forward_orbit(&self, x: usize) -> Result<PointSet> {
        self.check_point(x)?;
        let mut seen = PointSet::from([x]);
        let mut frontier = vec![x];
        while let Some(y) = frontier.pop() {
            for i in 0..self.n() {
                let z = self.apply(i, y);
                if seen.insert(z) {
                    frontier.push(z);
                }
            }
        }
        Ok(seen)
    }

    pub fn is_invariant(&self, set: &PointSet) -> bool {
        set.iter().all(|&x| (0..self.n()).all(|i| set.contains(&self.apply(i, x))))
    }

    pub fn is_bi_invariant(&self, set: &PointSet) -> bool {
        self.is_invariant(set)
            && (0..self.n()).all(|i| (0..self.m()).all(|x| !set.contains(&self.apply(i, x)) || set.contains(&x)))
    }

    /// Every invariant subset of `X`, by exhaustive scan.
    pub fn invariant_sets(&self, guard: usize) -> Result<Vec<PointSet>> {
        let m = self.m();
        if m > guard || m >= usize::BITS as usize {
            return Err(Error::GuardExceeded { size: m, guard });
        }
        let mut out: Vec<PointSet> = (0u64..1 << m)
            .map(|mask| (0..m).filter(|x| mask >> x & 1 == 1).collect::<PointSet>())
            .filter(|set| self.is_invariant(set))
            .collect();
        sort_point_sets(&mut out);
        Ok(out)
    }

    /// Weakly connected components of the graph with edges `{x, σ_i(x)}`,
    /// ordered by smallest member.
    pub fn weak_components(&self) -> Vec<PointSet> {
        let m = self.m();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for map in &self.maps {
            for (x, &y) in map.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                }
            }
        }
        let mut comps: Vec<PointSet> = Vec::new();
        let mut root_of = vec![usize::MAX; m];
        for x in 0..m {
            let r = find(&mut parent, x);
            if root_of[r] == usize::MAX {
                root_of[r] = comps.len();
                comps.push(PointSet::new());
            }
            comps[root_of[r]].insert(x);
        }
        comps
    }

    /// Every bi-invariant subset: exactly the unions of weak components.
    pub fn bi_invariant_sets(&self, guard: usize) -> Result<Vec<PointSet>> {
        let comps = self.weak_components();
        if comps.len() > guard {
            return Err(Error::GuardExceeded { size: comps.len(), guard });
        }
        let mut out: Vec<PointSet> = (0u64..1 << comps.len())
            .map(|mask| {
                comps
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .flat_map(|(_, c)| c.iter().copied())
                    .collect()
            })
            .collect();
        sort_point_sets(&mut out);
        Ok(out)
    }

    /// Least bi-invariant set containing `x`.
    pub fn full_orbit(&self, x: usize) -> Result<PointSet> {
        self.check_point(x)?;
        Ok(self
            .weak_components()
            .into_iter()
            .find(|c| c.contains(&x))
            .expect("every point lies in a component"))
    }

    /// Minimal iff every forward orbit is all of `X`.
    pub fn minimality(&self) -> Minimality {
        let all = self.all_points();
        for x in 0..self.m() {
            let orbit = self.forward_orbit(x).expect("valid point");
            if orbit != all {
                return Minimality { minimal: false, witness: Some((x, orbit)) };
            }
        }
        Minimality { minimal: true, witness: None }
    }

    pub fn is_minimal(&self) -> bool {
        self.minimality().minimal
    }

    /// Every system on `m` points named `0..m` with `n` maps.
    pub fn enumerate(m: usize, n: usize) -> impl Iterator<Item = FiniteDynSys> {
        let cells = m * n;
        let total = (m as u64).pow(cells as u32);
        (0..total).map(move |mut code| {
            let mut maps = vec![vec![0; m]; n];
            for cell in 0..cells {
                maps[cell / m][cell % m] = (code % m as u64) as usize;
                code /= m as u64;
            }
            FiniteDynSys::from_maps(&format!("enum-{m}-{n}"), maps).expect("enumerated systems are valid")
        })
    }

    /// Extends a non-surjective system by a backward chain of depth `depth`
    /// under each deficiency point.
    pub fn add_tail(&self, depth: usize) -> Result<TailedSys> {
        TailedSys::new(self, depth)
    }
}

/// A tail point `(u, -k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TailPoint {
    pub base: usize,
    pub level: usize,
}

/// `(X^T, σ^T)` materialized to depth `K`: points `(u, -k)` for `u ∈ U` and
/// `1 ≤ k ≤ K`, with `σ_i^T(u,-k) = (u,-k+1)` and `σ_i^T(u,-1) = u`.
#[derive(Clone, Debug, Serialize)]
pub struct TailedSys {
    base: FiniteDynSys,
    depth: usize,
    system: FiniteDynSys,
    tail: Vec<TailPoint>,
    note: Option<String>,
    truncation_stable: bool,
}

impl TailedSys {
    fn build(base: &FiniteDynSys, depth: usize) -> Result<(FiniteDynSys, Vec<TailPoint>)> {
        let deficiency = base.range_deficiency().deficiency;
        let m = base.m();
        let mut points = base.points.clone();
        let mut maps = base.maps.clone();
        let mut tail = Vec::new();
        for &u in &deficiency {
            for k in 1..=depth {
                tail.push(TailPoint { base: u, level: k });
                points.push(format!("({},-{k})", base.point_name(u)));
            }
        }
        let index_of = |tp: TailPoint| m + tail.iter().position(|&t| t == tp).expect("tail point exists");
        for map in maps.iter_mut() {
            for &tp in &tail {
                let target = if tp.level == 1 { tp.base } else { index_of(TailPoint { base: tp.base, level: tp.level - 1 }) };
                map.push(target);
            }
        }
        let name = base.name.as_ref().map(|s| format!("{s}+tail{depth}"));
        Ok((FiniteDynSys::new(name, points, maps)?, tail))
    }

    pub fn new(base: &FiniteDynSys, depth: usize) -> Result<Self> {
        if depth < 1 {
            return Err(Error::Precondition("tail depth K must be at least 1".into()));
        }
        if base.is_surjective() {
            return Ok(TailedSys {
                base: base.clone(),
                depth,
                system: base.clone(),
                tail: Vec::new(),
                note: Some("system is surjective; no tail added".into()),
                truncation_stable: true,
            });
        }
        let (system, tail) = Self::build(base, depth)?;
        let (deeper, _) = Self::build(base, depth + 1)?;
        let truncation_stable = fingerprint(base, &system) == fingerprint(base, &deeper);
        Ok(TailedSys {
            base: base.clone(),
            depth,
            system,
            tail,
            note: Some(format!(
                "truncated tail: the points (u,-{depth}) are deficiency points of the truncation only"
            )),
            truncation_stable,
        })
    }

    pub fn base(&self) -> &FiniteDynSys {
        &self.base
    }

    /// The truncated extended system `(X^T, σ^T)`.
    pub fn system(&self) -> &FiniteDynSys {
        &self.system
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn tail_points(&self) -> &[TailPoint] {
        &self.tail
    }

    pub fn truncation_stable(&self) -> bool {
        self.truncation_stable
    }

    pub fn tail_index(&self, base: usize, level: usize) -> Option<usize> {
        self.tail
            .iter()
            .position(|t| t.base == base && t.level == level)
            .map(|k| self.base.m() + k)
    }

    /// Indices of the original points inside the extended system.
    pub fn base_points(&self) -> PointSet {
        (0..self.base.m()).collect()
    }

    /// The deepest tail points `(u, -K)`. In the untruncated tail these have
    /// preimages; the truncation cuts them off.
    pub fn boundary(&self) -> PointSet {
        self.tail
            .iter()
            .filter(|t| t.level == self.depth)
            .map(|t| self.tail_index(t.base, t.level).expect("tail point"))
            .collect()
    }

    /// Re-runs `analysis` on the depth `K+1` truncation and reports whether it
    /// agrees with the depth `K` result.
    pub fn stable_under<T: PartialEq>(&self, analysis: impl Fn(&FiniteDynSys) -> T) -> Result<bool> {
        if self.tail.is_empty() {
            return Ok(true);
        }
        let deeper = TailedSys::new(&self.base, self.depth + 1)?;
        Ok(analysis(&self.system) == analysis(&deeper.system))
    }
}

fn fingerprint(base: &FiniteDynSys, sys: &FiniteDynSys) -> (bool, usize, bool) {
    let rd = sys.range_deficiency();
    let x: PointSet = (0..base.m()).collect();
    (sys.is_minimal(), rd.deficiency.len(), sys.is_invariant(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn set(xs: &[usize]) -> PointSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn range_deficiency_examples() {
        let p3 = builtin::p3();
        let rd = p3.range_deficiency();
        assert!(rd.surjective && rd.deficiency.is_empty());
        let id = FiniteDynSys::from_maps("id", vec![vec![0, 1, 2, 3]]).unwrap();
        assert!(id.range_deficiency().surjective);
        let ns = builtin::ns();
        let rd = ns.range_deficiency();
        assert_eq!(rd.range_union, set(&[0]));
        assert_eq!(rd.deficiency, set(&[1]));
        assert!(!rd.surjective);
    }

    #[test]
    fn forward_orbit_examples() {
        assert_eq!(builtin::p3().forward_orbit(1).unwrap(), set(&[0, 1]));
        let fixed = FiniteDynSys::from_maps("fx", vec![vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(fixed.forward_orbit(0).unwrap(), set(&[0]));
        assert_eq!(builtin::fs2().forward_orbit(0).unwrap(), set(&[0, 1]));
        assert!(builtin::p3().forward_orbit(7).is_err());
    }

    #[test]
    fn invariant_sets_examples() {
        let sets = builtin::p3().invariant_sets(DEFAULT_SCAN_GUARD).unwrap();
        assert_eq!(sets, vec![set(&[]), set(&[0]), set(&[0, 1]), set(&[0, 2]), set(&[0, 1, 2])]);
        let sets = builtin::fs2().invariant_sets(DEFAULT_SCAN_GUARD).unwrap();
        assert_eq!(sets, vec![set(&[]), set(&[0, 1])]);
    }

    #[test]
    fn invariant_scan_guard_refuses() {
        let big = FiniteDynSys::from_maps("big", vec![(0..21).collect()]).unwrap();
        assert!(matches!(big.invariant_sets(DEFAULT_SCAN_GUARD), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn bi_invariant_examples() {
        assert_eq!(builtin::p3().bi_invariant_sets(DEFAULT_SCAN_GUARD).unwrap(), vec![set(&[]), set(&[0, 1, 2])]);
        // two disjoint 2-cycles
        let two = FiniteDynSys::from_maps("two", vec![vec![1, 0, 3, 2]]).unwrap();
        assert_eq!(
            two.bi_invariant_sets(DEFAULT_SCAN_GUARD).unwrap(),
            vec![set(&[]), set(&[0, 1]), set(&[2, 3]), set(&[0, 1, 2, 3])]
        );
    }

    #[test]
    fn minimality_examples() {
        let m = builtin::p3().minimality();
        assert!(!m.minimal);
        assert_eq!(m.witness, Some((0, set(&[0]))));
        assert!(builtin::fs2().is_minimal());
        assert!(builtin::point1().is_minimal());
    }

    #[test]
    fn full_orbit_examples() {
        assert_eq!(builtin::p3().full_orbit(1).unwrap(), set(&[0, 1, 2]));
        let iso = FiniteDynSys::from_maps("iso", vec![vec![0, 2, 1]]).unwrap();
        assert_eq!(iso.full_orbit(0).unwrap(), set(&[0]));
        assert_eq!(builtin::ns().full_orbit(1).unwrap(), set(&[0, 1]));
    }

    #[test]
    fn add_tail_examples() {
        let ns = builtin::ns();
        let t = ns.add_tail(2).unwrap();
        assert_eq!(t.system().points(), &["0", "1", "(1,-1)", "(1,-2)"]);
        let p = t.tail_index(1, 1).unwrap();
        for i in 0..2 {
            assert_eq!(t.system().apply(i, p), 1);
            assert_eq!(t.system().apply(i, t.tail_index(1, 2).unwrap()), p);
        }
        assert_eq!(t.system().range_deficiency().deficiency, t.boundary());
        assert!(t.system().is_invariant(&t.base_points()));
        assert!(t.truncation_stable());

        let one = ns.add_tail(1).unwrap();
        assert_eq!(one.tail_points(), &[TailPoint { base: 1, level: 1 }]);

        let p3 = builtin::p3().add_tail(3).unwrap();
        assert!(p3.tail_points().is_empty());
        assert!(p3.note().unwrap().contains("surjective"));
        assert!(ns.add_tail(0).is_err());
    }

    #[test]
    fn json_validation() {
        let ok = FiniteDynSys::from_json(r#"{"points":["a","b"],"maps":[[1,0]]}"#).unwrap();
        assert_eq!(ok.n(), 1);
        assert!(matches!(
            FiniteDynSys::from_json(r#"{"points":["a","b"],"maps":[[0,0],[1,5]]}"#),
            Err(Error::MapOutOfRange { map: 1, point: 1, target: 5, m: 2 })
        ));
        assert!(FiniteDynSys::from_json(r#"{"points":[],"maps":[[]]}"#).is_err());
        assert!(FiniteDynSys::from_json(r#"{"points":["a"],"maps":[]}"#).is_err());
        assert!(FiniteDynSys::from_json(r#"{"points":["a"]"#).is_err());
    }

    #[test]
    fn enumeration_size() {
        assert_eq!(FiniteDynSys::enumerate(3, 2).count(), 729);
        assert_eq!(FiniteDynSys::enumerate(2, 2).count(), 16);
    }
}
