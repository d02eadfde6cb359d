use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::{Cylinder, TailGraph};
use crate::dynsys::FiniteDynSys;
use crate::error::{Error, Result};
use crate::word::Word;

/// An eventually periodic point of `X̃`: a finite prefix followed by a cycle
/// repeated forever.
///
/// Position `k` carries label `i_k` and point `x_k`; the prefix covers
/// positions `0..P` and position `P + j` repeats cycle entry `j mod C`.
#[derive(Clone, Serialize)]
pub struct InfiniteTailSpec {
    prefix_labels: Vec<u8>,
    prefix_vertices: Vec<usize>,
    cycle_labels: Vec<u8>,
    cycle_vertices: Vec<usize>,
}

impl InfiniteTailSpec {
    pub fn new(
        sys: &FiniteDynSys,
        prefix_labels: Vec<u8>,
        prefix_vertices: Vec<usize>,
        cycle_labels: Vec<u8>,
        cycle_vertices: Vec<usize>,
    ) -> Result<Self> {
        if prefix_labels.len() != prefix_vertices.len() || cycle_labels.len() != cycle_vertices.len() {
            return Err(Error::InvalidTail("labels and vertices must have equal lengths".into()));
        }
        if cycle_labels.is_empty() {
            return Err(Error::InvalidTail("the cycle must be nonempty".into()));
        }
        let spec = InfiniteTailSpec { prefix_labels, prefix_vertices, cycle_labels, cycle_vertices };
        for k in 0..spec.period_end() {
            let (i, x) = (spec.label(k), spec.vertex(k));
            if i >= sys.n() {
                return Err(Error::BadLabel { label: i + 1, n: sys.n() });
            }
            let y = spec.vertex(k + 1);
            if y >= sys.m() || x >= sys.m() {
                return Err(Error::InvalidTail(format!("point index out of range at position {k}")));
            }
            if sys.apply(i, y) != x {
                return Err(Error::InvalidTail(format!(
                    "σ_{}({}) = {} but position {k} holds {}",
                    i + 1,
                    sys.point_name(y),
                    sys.point_name(sys.apply(i, y)),
                    sys.point_name(x)
                )));
            }
        }
        Ok(spec)
    }

    /// The tail that stays at a fixed point `x` of `σ_label` forever.
    pub fn fixed(sys: &FiniteDynSys, label: usize, x: usize) -> Result<Self> {
        Self::new(sys, vec![], vec![], vec![label as u8], vec![x])
    }

    /// The tail beginning with cylinder `c` and continuing by always taking
    /// the smallest live `(label, source)` preimage.
    pub fn extending(graph: &TailGraph, sys: &FiniteDynSys, c: &Cylinder) -> Result<Self> {
        let mut labels: Vec<u8> = (0..c.depth()).map(|k| c.label(k) as u8).collect();
        let mut vertices: Vec<usize> = c.vertices().to_vec();
        let start = c.depth();
        let mut seen = std::collections::HashMap::new();
        loop {
            let k = vertices.len() - 1;
            let x = vertices[k];
            if k >= start {
                if let Some(&j) = seen.get(&x) {
                    vertices.pop();
                    let cycle_labels = labels.split_off(j);
                    let cycle_vertices = vertices.split_off(j);
                    return Self::new(sys, labels, vertices, cycle_labels, cycle_vertices);
                }
                seen.insert(x, k);
            }
            let (label, source) = graph
                .live_preimages(x)
                .next()
                .ok_or_else(|| Error::InvalidTail(format!("point {} has no live preimage", sys.point_name(x))))?;
            labels.push(label as u8);
            vertices.push(source);
        }
    }

    /// A canonical tail with `x_0 = x`.
    pub fn through(graph: &TailGraph, sys: &FiniteDynSys, x: usize) -> Result<Self> {
        Self::extending(graph, sys, &Cylinder::new(vec![], vec![x]))
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_labels.len()
    }

    pub fn period(&self) -> usize {
        self.cycle_labels.len()
    }

    fn period_end(&self) -> usize {
        self.prefix_len() + self.period()
    }

    pub fn label(&self, k: usize) -> usize {
        let p = self.prefix_len();
        if k < p {
            self.prefix_labels[k] as usize
        } else {
            self.cycle_labels[(k - p) % self.period()] as usize
        }
    }

    pub fn vertex(&self, k: usize) -> usize {
        let p = self.prefix_len();
        if k < p {
            self.prefix_vertices[k]
        } else {
            self.cycle_vertices[(k - p) % self.period()]
        }
    }

    /// `p(i, x) = x_0`.
    pub fn base(&self) -> usize {
        self.vertex(0)
    }

    pub fn labels(&self, k: usize) -> Word {
        Word((0..k).map(|j| self.label(j) as u8).collect())
    }

    pub fn cylinder(&self, depth: usize) -> Cylinder {
        Cylinder::new((0..depth).map(|k| self.label(k) as u8).collect(), (0..=depth).map(|k| self.vertex(k)).collect())
    }

    pub fn tau(&self) -> Self {
        if self.prefix_len() > 0 {
            InfiniteTailSpec {
                prefix_labels: self.prefix_labels[1..].to_vec(),
                prefix_vertices: self.prefix_vertices[1..].to_vec(),
                cycle_labels: self.cycle_labels.clone(),
                cycle_vertices: self.cycle_vertices.clone(),
            }
        } else {
            let mut cycle_labels = self.cycle_labels.clone();
            let mut cycle_vertices = self.cycle_vertices.clone();
            cycle_labels.rotate_left(1);
            cycle_vertices.rotate_left(1);
            InfiniteTailSpec { prefix_labels: vec![], prefix_vertices: vec![], cycle_labels, cycle_vertices }
        }
    }

    pub fn tau_pow(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |t, _| t.tau())
    }

    /// `σ̃_i` applied to this tail.
    pub fn sigma(&self, sys: &FiniteDynSys, i: usize) -> Self {
        let mut out = self.clone();
        out.prefix_labels.insert(0, i as u8);
        out.prefix_vertices.insert(0, sys.apply(i, self.base()));
        out
    }

    /// `σ̃_w = σ̃_{w_1} ∘ … ∘ σ̃_{w_k}`.
    pub fn sigma_word(&self, sys: &FiniteDynSys, w: &Word) -> Self {
        w.labels().rev().fold(self.clone(), |t, i| t.sigma(sys, i))
    }

    pub fn describe(&self, sys: &FiniteDynSys) -> String {
        let part = |labels: &[u8], vertices: &[usize]| {
            labels
                .iter()
                .zip(vertices)
                .map(|(l, &x)| format!("{}:{}", l + 1, sys.point_name(x)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "{}({})^∞",
            if self.prefix_len() > 0 { format!("{} ", part(&self.prefix_labels, &self.prefix_vertices)) } else { String::new() },
            part(&self.cycle_labels, &self.cycle_vertices)
        )
    }
}

impl PartialEq for InfiniteTailSpec {
    fn eq(&self, other: &Self) -> bool {
        let span = self.prefix_len().max(other.prefix_len()) + self.period().lcm(&other.period());
        (0..span).all(|k| self.label(k) == other.label(k) && self.vertex(k) == other.vertex(k))
    }
}

impl Eq for InfiniteTailSpec {}

impl fmt::Debug for InfiniteTailSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InfiniteTailSpec")
            .field("prefix_labels", &self.prefix_labels)
            .field("prefix_vertices", &self.prefix_vertices)
            .field("cycle_labels", &self.cycle_labels)
            .field("cycle_vertices", &self.cycle_vertices)
            .finish()
    }
}
