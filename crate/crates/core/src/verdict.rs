//! Structural conclusions for a finite system: simplicity of the C*-envelope,
//! detection of `O_n`, and the clopen chains certifying non-simplicity.

use serde::Serialize;

use crate::covering::{separation_test, CoveringSpace, CylinderSet, TailGraph};
use crate::dynsys::{FiniteDynSys, PointSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Simplicity {
    Simple,
    NotSimple,
    TheoremInapplicableN1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OnDetection {
    IsomorphicToOn,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OnResult {
    pub detection: OnDetection,
    pub n: usize,
    /// Two points starting distinct tails with equal label sequences.
    pub witness: Option<(String, String)>,
    /// The first labels of the common sequence, one-based.
    pub witness_labels: Option<String>,
    pub pair_fixpoint_size: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainLevel {
    pub k: usize,
    pub cylinders: usize,
    pub total: usize,
    pub nonempty: bool,
    pub proper: bool,
    /// `W_k ⊆ W_{k-1}`.
    pub nested: bool,
    /// `τ(W_k) ⊆ W_{k-1}`.
    pub tau_step: bool,
    /// `σ̃_i(W_{k-1}) ⊆ W_k` for every `i`.
    pub sigma_step: bool,
    pub members: Vec<String>,
}

/// The chain `W_0 = p⁻¹(A)`, `W_{k+1} = ∪_i σ̃_i(W_k)`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BiInvariantChain {
    pub invariant_set: Vec<String>,
    pub max_depth: usize,
    pub levels: Vec<ChainLevel>,
    pub valid: bool,
    #[serde(skip)]
    pub sets: Vec<CylinderSet>,
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_set: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_chain: Option<BiInvariantChain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation_pair: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peters_note: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reasoning: Vec<String>,
    pub structure: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TruncationDepths {
    pub chain_depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_depth: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub n: usize,
    pub minimal: bool,
    pub surjective: bool,
    pub simplicity: Simplicity,
    pub on_detection: OnDetection,
    pub witnesses: Witnesses,
    pub truncation_depths: TruncationDepths,
}

pub const DEFAULT_CHAIN_DEPTH: usize = 3;
pub const DEFAULT_TAIL_DEPTH: usize = 3;

fn names(sys: &FiniteDynSys, set: &PointSet) -> Vec<String> {
    set.iter().map(|&x| sys.point_name(x).to_string()).collect()
}

/// Whether the sets `X̃_w` separate the points of `X̃`, which makes the
/// C*-envelope `O_n`. Failing separation proves nothing.
pub fn on_detect(sys: &FiniteDynSys) -> Result<OnResult> {
    if !sys.is_surjective() {
        return Err(Error::Precondition("O_n detection needs a surjective system".into()));
    }
    let sep = separation_test(&TailGraph::new(sys), sys);
    let witness = sep.witness.map(|(a, b)| (sys.point_name(a).to_string(), sys.point_name(b).to_string()));
    let witness_labels = sep.witness_tails.as_ref().map(|(t, _)| t.labels(3).to_string());
    Ok(OnResult {
        detection: if sep.separates { OnDetection::IsomorphicToOn } else { OnDetection::Inconclusive },
        n: sys.n(),
        witness,
        witness_labels,
        pair_fixpoint_size: sep.pair_fixpoint_size,
    })
}

/// Builds and certifies the chain `W_k` for `k ≤ max_depth`.
pub fn bi_invariant_witness(sys: &FiniteDynSys, a: &PointSet, max_depth: usize) -> Result<BiInvariantChain> {
    if !sys.is_surjective() {
        return Err(Error::Precondition("the witness chain needs a surjective system".into()));
    }
    if a.iter().any(|&x| x >= sys.m()) {
        return Err(Error::Precondition("the set contains indices outside X".into()));
    }
    if a.is_empty() || a.len() == sys.m() {
        return Err(Error::Precondition("the set must be nonempty and proper".into()));
    }
    if !sys.is_invariant(a) {
        return Err(Error::Precondition(format!("{{{}}} is not invariant", names(sys, a).join(","))));
    }
    let space = CoveringSpace::with_depth(sys, max_depth + 1);
    let mut sets = vec![CylinderSet::point_preimage(&space, a, 0)];
    for k in 0..max_depth {
        let next = (0..sys.n()).map(|i| sets[k].image_sigma(i)).reduce(|x, y| x.union(&y)).expect("n ≥ 1");
        sets.push(next);
    }
    let mut levels = Vec::new();
    for (k, w) in sets.iter().enumerate() {
        let (nested, tau_step, sigma_step) = if k == 0 {
            (true, true, true)
        } else {
            let prev = &sets[k - 1];
            (
                w.is_subset(prev),
                w.image_tau().is_subset(prev),
                (0..sys.n()).all(|i| prev.image_sigma(i).is_subset(w)),
            )
        };
        levels.push(ChainLevel {
            k,
            cylinders: w.len(),
            total: space.count(w.depth()),
            nonempty: !w.is_empty(),
            proper: !w.is_full(),
            nested,
            tau_step,
            sigma_step,
            members: w.cylinders().map(|c| c.describe(sys)).collect(),
        });
    }
    let valid = levels.iter().all(|l| l.nonempty && l.proper && l.nested && l.tau_step && l.sigma_step);
    Ok(BiInvariantChain { invariant_set: names(sys, a), max_depth, levels, valid, sets })
}

pub fn simplicity_verdict(sys: &FiniteDynSys) -> Result<Verdict> {
    verdict_with_depths(sys, DEFAULT_CHAIN_DEPTH, DEFAULT_TAIL_DEPTH)
}

pub fn verdict_with_depths(sys: &FiniteDynSys, chain_depth: usize, tail_depth: usize) -> Result<Verdict> {
    let n = sys.n();
    let minimality = sys.minimality();
    let surjective = sys.is_surjective();
    let mut witnesses = Witnesses {
        structure: "B ⋊_α ℕ over the computed tower data".into(),
        invariant_set: minimality.witness.as_ref().map(|(_, orbit)| names(sys, orbit)),
        ..Witnesses::default()
    };
    let mut truncation_depths = TruncationDepths { chain_depth, tail_depth: None };

    let on_detection = if surjective {
        let on = on_detect(sys)?;
        witnesses.separation_pair = on.witness.clone();
        if on.detection == OnDetection::IsomorphicToOn {
            witnesses.structure = format!("O_{n}");
        }
        on.detection
    } else {
        OnDetection::Inconclusive
    };

    let simplicity = if n == 1 {
        witnesses.peters_note = Some(
            "n = 1: the C*-envelope is a crossed product by Z (for a single point, the C*-envelope is C(T), which is not simple); the minimality criterion does not apply"
                .into(),
        );
        Simplicity::TheoremInapplicableN1
    } else if minimality.minimal {
        Simplicity::Simple
    } else if surjective {
        let (_, orbit) = minimality.witness.as_ref().expect("non-minimal systems have a witness");
        let chain = bi_invariant_witness(sys, orbit, chain_depth)?;
        witnesses.reasoning.push(format!(
            "the forward orbit {{{}}} is a proper invariant set, so the system is not minimal",
            names(sys, orbit).join(",")
        ));
        witnesses.reasoning.push(format!(
            "its lift generates a nested chain of proper clopen sets (certified to depth {chain_depth}) whose intersection is a proper closed bi-invariant subset of the covering space"
        ));
        witnesses.reasoning.push("a proper bi-invariant set gives a proper nonzero ideal".into());
        witnesses.witness_chain = Some(chain);
        Simplicity::NotSimple
    } else {
        let tailed = sys.add_tail(tail_depth)?;
        truncation_depths.tail_depth = Some(tail_depth);
        let base = tailed.base_points();
        let tail_invariant = tailed.system().is_invariant(&base);
        witnesses.reasoning.push(format!(
            "the system is not surjective (U = {{{}}}), hence not minimal: a minimal system is surjective",
            names(sys, &sys.range_deficiency().deficiency).join(",")
        ));
        witnesses.reasoning.push(format!(
            "after adding a tail, X is a proper invariant subset of X^T ({}), so the tail system is not minimal",
            if tail_invariant { "checked on the depth-K truncation" } else { "CHECK FAILED on the truncation" }
        ));
        witnesses.reasoning.push(
            "the C*-envelope of (X, σ) is a full corner of that of the surjective tail system; Morita equivalence preserves the ideal lattice, so neither is simple"
                .into(),
        );
        Simplicity::NotSimple
    };

    Ok(Verdict { n, minimal: minimality.minimal, surjective, simplicity, on_detection, witnesses, truncation_depths })
}

/// Outcome of comparing `O_n` detection with the simplicity verdict over a
/// collection of systems. Separation does not by itself force minimality,
/// so disagreements are collected, not asserted away.
#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossCheck {
    pub systems: usize,
    pub detected: usize,
    pub disagreements: Vec<String>,
}

pub fn on_simplicity_cross_check(systems: impl IntoIterator<Item = FiniteDynSys>) -> Result<CrossCheck> {
    let mut out = CrossCheck::default();
    for sys in systems {
        out.systems += 1;
        if sys.n() < 2 || !sys.is_surjective() {
            continue;
        }
        if on_detect(&sys)?.detection == OnDetection::IsomorphicToOn {
            out.detected += 1;
            if simplicity_verdict(&sys)?.simplicity != Simplicity::Simple {
                out.disagreements.push(sys.to_json());
            }
        }
    }
    Ok(out)
}
