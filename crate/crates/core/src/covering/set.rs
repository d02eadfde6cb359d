use std::fmt;
use std::sync::Arc;

use super::{CoveringSpace, Cylinder, CylinderFunction};
use crate::dynsys::PointSet;
use crate::word::Word;

/// A clopen subset of `X̃`: a union of cylinders of one depth.
#[derive(Clone)]
pub struct CylinderSet {
    space: Arc<CoveringSpace>,
    depth: usize,
    members: Vec<bool>,
    /// Number of silent refinements performed by `image_tau` on the way to
    /// this set.
    refinements: usize,
}

impl CylinderSet {
    pub fn from_members(space: &Arc<CoveringSpace>, depth: usize, members: Vec<bool>) -> Self {
        space.check_depth(depth);
        assert_eq!(members.len(), space.count(depth), "one flag per depth-{depth} cylinder");
        CylinderSet { space: space.clone(), depth, members, refinements: 0 }
    }

    pub fn from_fn(space: &Arc<CoveringSpace>, depth: usize, f: impl Fn(&Cylinder) -> bool) -> Self {
        space.check_depth(depth);
        let members = space.cylinders(depth).iter().map(f).collect();
        CylinderSet { space: space.clone(), depth, members, refinements: 0 }
    }

    pub fn empty(space: &Arc<CoveringSpace>) -> Self {
        Self::from_members(space, 0, vec![false; space.count(0)])
    }

    pub fn full(space: &Arc<CoveringSpace>) -> Self {
        Self::from_members(space, 0, vec![true; space.count(0)])
    }

    /// `X̃_w`.
    pub fn word(space: &Arc<CoveringSpace>, w: &Word) -> Self {
        let k = w.len();
        Self::from_fn(space, k, |c| (0..k).all(|j| c.label(j) == w.0[j] as usize))
    }

    /// `p_k^{-1}(A)`.
    pub fn point_preimage(space: &Arc<CoveringSpace>, points: &PointSet, k: usize) -> Self {
        Self::from_fn(space, k, |c| points.contains(&c.vertex(k)))
    }

    pub fn space(&self) -> &Arc<CoveringSpace> {
        &self.space
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn refinements(&self) -> usize {
        self.refinements
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.members[idx]
    }

    /// Whether the cylinder (of depth at least `self.depth()`) lies in the set.
    pub fn contains(&self, c: &Cylinder) -> bool {
        c.depth() >= self.depth
            && self.space.index_of(&c.truncate(self.depth)).map(|k| self.members[k]).unwrap_or(false)
    }

    pub fn cylinders(&self) -> impl Iterator<Item = &Cylinder> + '_ {
        self.space.cylinders(self.depth).iter().zip(&self.members).filter(|(_, &m)| m).map(|(c, _)| c)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&m| m)
    }

    pub fn refine(&self, depth: usize) -> Self {
        assert!(depth >= self.depth, "cannot refine from depth {} down to {depth}", self.depth);
        self.space.check_depth(depth);
        let mut members = self.members.clone();
        for d in self.depth + 1..=depth {
            members = (0..self.space.count(d)).map(|k| members[self.space.parent(d, k)]).collect();
        }
        CylinderSet { space: self.space.clone(), depth, members, refinements: self.refinements }
    }

    /// The same set at the smallest depth where it is a union of cylinders.
    pub fn coarsen(&self) -> Self {
        let f = CylinderFunction::indicator(self).coarsen();
        CylinderSet {
            space: self.space.clone(),
            depth: f.depth(),
            members: f.values().iter().map(|v| !v.is_zero()).collect(),
            refinements: self.refinements,
        }
    }

    fn zip(&self, other: &CylinderSet, op: impl Fn(bool, bool) -> bool) -> Self {
        assert!(Arc::ptr_eq(&self.space, &other.space), "cylinder sets over different covering spaces");
        let depth = self.depth.max(other.depth);
        let (a, b) = (self.refine(depth), other.refine(depth));
        let members = a.members.iter().zip(&b.members).map(|(&x, &y)| op(x, y)).collect();
        CylinderSet { space: self.space.clone(), depth, members, refinements: self.refinements.max(other.refinements) }
    }

    pub fn union(&self, other: &CylinderSet) -> Self {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &CylinderSet) -> Self {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &CylinderSet) -> Self {
        self.zip(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        CylinderSet { members: self.members.iter().map(|&m| !m).collect(), ..self.clone() }
    }

    pub fn is_subset(&self, other: &CylinderSet) -> bool {
        self.difference(other).is_empty()
    }

    /// `σ̃_i(A)`, one level deeper.
    pub fn image_sigma(&self, i: usize) -> Self {
        let depth = self.depth + 1;
        self.space.check_depth(depth);
        let members = (0..self.space.count(depth))
            .map(|k| self.space.cylinder(depth, k).label(0) == i && self.members[self.space.shift_index(depth, k)])
            .collect();
        CylinderSet { space: self.space.clone(), depth, members, refinements: self.refinements }
    }

    /// `τ(A)`, one level shallower. A depth-0 set is refined to depth 1 first.
    pub fn image_tau(&self) -> Self {
        let src = if self.depth == 0 {
            let mut r = self.refine(1);
            r.refinements += 1;
            r
        } else {
            self.clone()
        };
        let depth = src.depth - 1;
        let mut members = vec![false; self.space.count(depth)];
        for (k, &m) in src.members.iter().enumerate() {
            if m {
                members[self.space.shift_index(src.depth, k)] = true;
            }
        }
        CylinderSet { space: self.space.clone(), depth, members, refinements: src.refinements }
    }

    /// `σ̃_i^{-1}(A)`, at the same depth.
    pub fn preimage_sigma(&self, i: usize) -> Self {
        let members = (0..self.space.count(self.depth)).map(|k| self.members[self.space.sigma_index(self.depth, k, i)]).collect();
        CylinderSet { space: self.space.clone(), depth: self.depth, members, refinements: self.refinements }
    }

    /// `τ^{-1}(A)`, one level deeper.
    pub fn preimage_tau(&self) -> Self {
        let depth = self.depth + 1;
        self.space.check_depth(depth);
        let members = (0..self.space.count(depth)).map(|k| self.members[self.space.shift_index(depth, k)]).collect();
        CylinderSet { space: self.space.clone(), depth, members, refinements: self.refinements }
    }

    /// `p_k(A)` for `k` at most the depth.
    pub fn project(&self, k: usize) -> PointSet {
        assert!(k <= self.depth, "projection index beyond the set's depth");
        self.cylinders().map(|c| c.vertex(k)).collect()
    }
}

impl PartialEq for CylinderSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) && {
            let depth = self.depth.max(other.depth);
            self.refine(depth).members == other.refine(depth).members
        }
    }
}

impl fmt::Debug for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sys = self.space.system();
        let cyls: Vec<String> = self.cylinders().map(|c| c.describe(sys)).collect();
        write!(f, "CylinderSet(depth {}, {{{}}})", self.depth, cyls.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn tau_of_depth_zero_set_is_refined_and_recorded() {
        let s = CoveringSpace::with_depth(&builtin::fs2(), 3);
        let a = CylinderSet::point_preimage(&s, &PointSet::from([0]), 0);
        let t = a.image_tau();
        assert_eq!(t.refinements(), 1);
        assert_eq!(t.depth(), 0);
        assert!(t.is_full());
        let b = CylinderSet::point_preimage(&s, &PointSet::from([0]), 1);
        assert_eq!(b.image_tau().refinements(), 0);
    }

    #[test]
    fn preimage_sigma_two_ways() {
        for sys in builtin::all() {
            let s = CoveringSpace::with_depth(&sys, 3);
            for d in 0..3 {
                let bits = s.count(d).min(6);
                for mask in 0..(1u64 << bits) {
                    let a = CylinderSet::from_fn(&s, d, |c| {
                        let k = s.index_of(c).unwrap();
                        k < bits && mask >> k & 1 == 1
                    });
                    for i in 0..sys.n() {
                        let direct = a.preimage_sigma(i);
                        let via_tau = a.intersection(&CylinderSet::word(&s, &Word::letter(i))).image_tau();
                        assert_eq!(direct, via_tau);
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_and_tau_images_are_inverse() {
        let s = CoveringSpace::with_depth(&builtin::p3(), 4);
        let a = CylinderSet::from_fn(&s, 2, |c| c.vertex(2) != 1 && c.label(1) == 0);
        for i in 0..2 {
            assert_eq!(a.image_sigma(i).image_tau(), a);
            assert!(a.image_sigma(i).is_subset(&CylinderSet::word(&s, &Word::letter(i))));
            assert_eq!(a.image_sigma(i).preimage_sigma(i), a);
        }
        assert!(a.is_subset(&a.image_tau().preimage_tau()));
    }

    #[test]
    fn coarsen_finds_minimal_depth() {
        let s = CoveringSpace::with_depth(&builtin::sw2(), 4);
        let a = CylinderSet::word(&s, &Word::parse("21", 2).unwrap()).refine(4);
        assert_eq!(a.coarsen().depth(), 2);
        assert_eq!(CylinderSet::full(&s).refine(3).coarsen().depth(), 0);
    }
}
