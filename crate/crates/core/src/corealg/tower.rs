use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use super::{norm, Block, CoreElement};
use crate::covering::{CoveringSpace, CylinderFunction};
use crate::error::{Error, Result};
use crate::scalar::{rational_abs, Scalar};
use crate::word::Word;

/// An element of `B_k ≅ M_{n^k}(C(X̃))`: entries `(u, v)` with `|u| = |v| = k`.
#[derive(Clone, Debug)]
pub struct TowerElement {
    space: Arc<CoveringSpace>,
    block: Block,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerNorm {
    pub value: f64,
    /// Present when every pointwise matrix is diagonal with rational
    /// entries, in which case the norm is a maximum of absolute values.
    #[serde(serialize_with = "serialize_exact")]
    pub exact: Option<BigRational>,
}

fn serialize_exact<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}

impl TowerElement {
    pub fn new(space: &Arc<CoveringSpace>, level: usize, entries: BTreeMap<(Word, Word), CylinderFunction>) -> Self {
        let depth = entries.values().map(CylinderFunction::depth).max().unwrap_or(0);
        let entries = entries
            .into_iter()
            .map(|((u, v), f)| {
                assert!(u.len() == level && v.len() == level, "tower entries must have |u| = |v| = level");
                ((u, v), f.refine(depth))
            })
            .filter(|(_, f)| !f.is_zero())
            .collect();
        TowerElement { space: space.clone(), block: Block { level, depth, entries } }
    }

    pub fn from_function(f: &CylinderFunction) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert((Word::empty(), Word::empty()), f.clone());
        Self::new(f.space(), 0, entries)
    }

    pub fn identity(space: &Arc<CoveringSpace>) -> Self {
        Self::from_function(&CylinderFunction::one(space))
    }

    /// The degree-0 part of a core element, which must be its only part.
    pub fn from_core(a: &CoreElement) -> Result<Self> {
        if a.blocks.keys().any(|&d| d != 0) {
            return Err(Error::Precondition("tower elements have degree 0 only".into()));
        }
        let block = a.blocks.get(&0).cloned().unwrap_or_else(|| Block::empty(0, 0));
        Ok(TowerElement { space: a.space.clone(), block })
    }

    pub fn to_core(&self) -> CoreElement {
        let terms = self.block.entries.iter().map(|((u, v), f)| (u.clone(), f.clone(), v.clone())).collect();
        CoreElement::from_terms(&self.space, terms)
    }

    pub fn space(&self) -> &Arc<CoveringSpace> {
        &self.space
    }

    pub fn level(&self) -> usize {
        self.block.level
    }

    pub fn depth(&self) -> usize {
        self.block.depth
    }

    pub fn entries(&self) -> &BTreeMap<(Word, Word), CylinderFunction> {
        &self.block.entries
    }

    pub fn entry(&self, u: &Word, v: &Word) -> Option<&CylinderFunction> {
        self.block.entry(u, v)
    }

    /// `E_{u,v} ⊗ f ↦ Σ_i E_{ui,vi} ⊗ (f∘σ̃_i)`.
    pub fn embed(&self) -> Self {
        TowerElement { space: self.space.clone(), block: self.block.raise_once(self.space.n()) }
    }

    pub fn embed_to(&self, level: usize) -> Self {
        TowerElement { space: self.space.clone(), block: self.block.raise(self.space.n(), level, self.block.depth) }
    }

    /// `E_{u,v} ⊗ f ↦ (1/n) Σ_{i,j} E_{iu,jv} ⊗ f`.
    pub fn alpha(&self) -> Self {
        let n = self.space.n();
        let scale = Scalar::ratio(1, n as i64);
        let mut entries = BTreeMap::new();
        for ((u, v), f) in &self.block.entries {
            let g = f.scale(&scale);
            for i in 0..n {
                for j in 0..n {
                    entries.insert((u.prepend(i), v.prepend(j)), g.clone());
                }
            }
        }
        TowerElement {
            space: self.space.clone(),
            block: Block { level: self.block.level + 1, depth: self.block.depth, entries },
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.block.entries.keys().all(|(u, v)| u == v)
    }

    pub fn norm(&self) -> TowerNorm {
        let value = norm::block_norm(&self.space, &self.block);
        let exact = if self.is_diagonal() {
            let mut best = Some(BigRational::from_integer(0.into()));
            for f in self.block.entries.values() {
                for s in f.values() {
                    best = match (best, rational_abs(s)) {
                        (Some(b), Some(q)) => Some(if q > b { q } else { b }),
                        _ => None,
                    };
                }
            }
            best
        } else {
            None
        };
        TowerNorm { value, exact }
    }
}

impl PartialEq for TowerElement {
    fn eq(&self, other: &Self) -> bool {
        self.to_core() == other.to_core()
    }
}
