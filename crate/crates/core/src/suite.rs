//! Named check suites over one system, and the exhaustive scan over all
//! small systems.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::corealg::{correspondence_unitary, CoreElement, IdealData, TowerElement};
use crate::covering::{CoveringSpace, CylinderFunction, CylinderSet};
use crate::dynsys::{FiniteDynSys, PointSet};
use crate::error::Result;
use crate::fockrep::{self, CoveringRep, FockReport, TruncatedRep};
use crate::random::{self, SuiteRng};
use crate::scalar::Scalar;
use crate::verdict::{self, Simplicity};
use crate::word::Word;
use crate::Cylinder;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteConfig {
    /// Word length and cylinder depth `D` for symbolic checks.
    pub depth: usize,
    pub fock_depth: usize,
    /// Fock depth for evaluating core elements, which needs room above the
    /// block levels of products.
    pub eval_depth: usize,
    pub tail_window: usize,
    pub tail_k: usize,
    pub seed: u64,
    pub max_dim: usize,
    pub random_pairs: usize,
    pub tower_samples: usize,
    pub covering_points: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            depth: 3,
            fock_depth: 3,
            eval_depth: 6,
            tail_window: 2,
            tail_k: 3,
            seed: 0,
            max_dim: fockrep::DEFAULT_MAX_DIM,
            random_pairs: 10,
            tower_samples: 20,
            covering_points: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub group: &'static str,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub system: String,
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("system {}\n", self.system);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            writeln!(out, "{tag}  [{}] {}: {}", c.group, c.name, c.detail).unwrap();
        }
        let count = |s| self.checks.iter().filter(|c| c.status == s).count();
        writeln!(out, "{} passed, {} failed, {} skipped", count(Status::Pass), count(Status::Fail), count(Status::Skip))
            .unwrap();
        out
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn push(&mut self, group: &'static str, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.checks.push(CheckResult { group, name: name.into(), status, detail: detail.into() });
    }

    fn skip(&mut self, group: &'static str, name: impl Into<String>, why: impl Into<String>) {
        self.checks.push(CheckResult { group, name: name.into(), status: Status::Skip, detail: why.into() });
    }

    /// Records a check whose failures are collected as strings.
    fn tally(&mut self, group: &'static str, name: &str, cases: usize, failures: Vec<String>) {
        let detail = match failures.first() {
            None => format!("{cases} cases"),
            Some(first) => format!("{} of {cases} cases fail; first: {first}", failures.len()),
        };
        self.push(group, name, failures.is_empty(), detail);
    }

    fn fock(&mut self, name: &str, reports: &[FockReport]) {
        let worst = reports.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
        let dims: usize = reports.iter().map(|r| r.interior_dim).sum();
        let ok = reports.iter().all(|r| r.pass);
        self.push(
            "numeric",
            name,
            ok,
            format!("{} representations, {dims} checked columns, max deviation {worst:e}", reports.len()),
        );
    }

    fn error(&mut self, group: &'static str, name: &str, e: crate::error::Error) {
        match e {
            crate::error::Error::GuardExceeded { .. } => self.skip(group, name, e.to_string()),
            other => self.push(group, name, false, other.to_string()),
        }
    }
}

pub fn run_suite(sys: &FiniteDynSys, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rec = Recorder { checks: Vec::new() };
    let mut rng = random::rng(cfg.seed);
    let space = CoveringSpace::with_depth(sys, cfg.depth + 2);
    symbolic(&mut rec, &space, cfg, &mut rng);
    tower(&mut rec, &space, cfg, &mut rng);
    numeric(&mut rec, sys, &space, cfg, &mut rng);
    if !sys.is_surjective() {
        tails(&mut rec, sys, cfg, &mut rng)?;
    }
    sets(&mut rec, sys, &space, cfg)?;
    Ok(SuiteReport { system: sys.name().unwrap_or("system").to_string(), config: cfg.clone(), checks: rec.checks })
}

fn symbolic(rec: &mut Recorder, space: &Arc<CoveringSpace>, cfg: &SuiteConfig, rng: &mut SuiteRng) {
    let sys = space.system();
    let n = sys.n();
    let d = cfg.depth;

    let mut failures = Vec::new();
    let words = Word::up_to_length(n, d);
    for w in &words {
        let f = random::function(space, 1, rng);
        let (l, r) = CoreElement::lemma_calculation(w, &f);
        if l != r {
            failures.push(format!("w = {w}"));
        }
    }
    rec.tally("symbolic", "calculation lemma t_w f t_w* = χ_w (f∘τ^|w|)", words.len(), failures);

    let mut failures = Vec::new();
    let short = Word::up_to_length(n, d.min(2));
    let mut cases = 0;
    for u in &short {
        for v in &short {
            cases += 1;
            let f = random::function(space, 1, rng);
            let lhs = CoreElement::term(u, &f, v);
            let rhs = CoreElement::from_terms(space, (0..n).map(|i| (u.push(i), f.compose_sigma(i), v.push(i))).collect());
            if lhs != rhs {
                failures.push(format!("u = {u}, v = {v}"));
            }
        }
    }
    rec.tally("symbolic", "refinement identity t_u f t_v* = Σ_i t_ui (f∘σ̃_i) t_vi*", cases, failures);

    let mut failures = Vec::new();
    for k in 0..=d {
        let sum = Word::all_of_length(n, k)
            .iter()
            .map(|w| CylinderFunction::chi(space, w))
            .fold(CylinderFunction::zero(space), |a, b| a + b);
        if sum != CylinderFunction::one(space) {
            failures.push(format!("k = {k}"));
        }
    }
    rec.tally("symbolic", "partition of unity Σ_|w|=k χ_w = 1", d + 1, failures);

    let mut failures = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = &CoreElement::t(space, i).adjoint() * &CoreElement::t(space, j);
            let expected = if i == j { CoreElement::one(space) } else { CoreElement::zero(space) };
            if p != expected {
                failures.push(format!("t_{}* t_{}", i + 1, j + 1));
            }
        }
    }
    let sum = (0..n)
        .map(|i| &CoreElement::t(space, i) * &CoreElement::t(space, i).adjoint())
        .fold(CoreElement::zero(space), |a, b| &a + &b);
    // X̃ keeps only live points, so the ranges of σ̃_i cover it even when
    // the base system is not surjective.
    if sum != CoreElement::one(space) {
        failures.push("Σ t_i t_i* ≠ 1".into());
    }
    rec.tally("symbolic", "Cuntz relations", n * n + 1, failures);

    match CoreElement::isometry_v(space) {
        Err(_) => {
            rec.skip("symbolic", "V*V = 1", "system is not surjective");
            rec.skip("symbolic", "recovery identity", "system is not surjective");
        }
        Ok(v) => {
            let vv = &v * &v.adjoint();
            let ok = &v.adjoint() * &v == CoreElement::one(space) && &vv * &vv == vv;
            rec.push("symbolic", "V*V = 1", ok, "V = n^{-1/2} Σ t_i; VV* idempotent");
            let mut failures = Vec::new();
            let mut cases = 0;
            for k in 0..=2u32 {
                let vk = v.pow(k);
                let t1k = CoreElement::t_word(space, &Word::repeat(0, k as usize)).adjoint();
                let scale = Scalar::sqrt((n as u64).pow(k));
                for _ in 0..4 {
                    cases += 1;
                    let u = random::word(n, 2, rng);
                    let w = random::word(n, 2, rng);
                    let f = random::function(space, 1, rng);
                    let target = CoreElement::term(&u, &f, &w);
                    let lhs = &(&target * &t1k).scale(&scale) * &vk;
                    if lhs != target {
                        failures.push(format!("k = {k}, u = {u}, v = {w}"));
                    }
                }
            }
            rec.tally("symbolic", "recovery identity (n^{k/2} a t_1^{*k}) V^k = a", cases, failures);
        }
    }

    let mut failures = Vec::new();
    for s in 0..cfg.random_pairs {
        let a = random::core(space, 3, 2, 1, rng);
        let psi = a.gauge_expect();
        if a.gauge_average(a.max_abs_degree() + 1) != psi {
            failures.push(format!("sample {s}: Ψ ≠ gauge average"));
        }
        if psi.gauge_expect() != psi {
            failures.push(format!("sample {s}: Ψ² ≠ Ψ"));
        }
    }
    rec.tally("symbolic", "gauge expectation Ψ = finite gauge average, Ψ² = Ψ", cfg.random_pairs, failures);
}

fn tower(rec: &mut Recorder, space: &Arc<CoveringSpace>, cfg: &SuiteConfig, rng: &mut SuiteRng) {
    let surjective = space.system().is_surjective();
    let mut alpha_failures = Vec::new();
    let mut embed_failures = Vec::new();
    let mut diag_failures = Vec::new();
    for s in 0..cfg.tower_samples {
        let level = s % 3;
        let b = if s % 2 == 0 { random::tower(space, level, 1, rng) } else { random::diagonal_tower(space, level, 1, rng) };
        if surjective {
            match b.to_core().alpha() {
                Ok(via_v) if b.alpha().to_core() == via_v => {}
                _ => alpha_failures.push(format!("sample {s}")),
            }
        }
        let (n0, n1) = (b.norm(), b.embed().norm());
        let exact_ok = match (&n0.exact, &n1.exact) {
            (Some(a), Some(c)) => a == c,
            _ => true,
        };
        if (n0.value - n1.value).abs() > 1e-10 || !exact_ok {
            embed_failures.push(format!("sample {s}: {} vs {}", n0.value, n1.value));
        }
        let f = random::function(space, 1, rng);
        let e = TowerElement::from_function(&f).embed_to(level + 1);
        let ok = e.is_diagonal()
            && Word::all_of_length(space.n(), level + 1)
                .iter()
                .all(|w| e.entry(w, w).cloned().unwrap_or_else(|| CylinderFunction::zero(space)) == f.compose_sigma_word(w));
        if !ok {
            diag_failures.push(format!("sample {s}"));
        }
    }
    if surjective {
        rec.tally("symbolic", "α = Ad V on tower elements", cfg.tower_samples, alpha_failures);
    } else {
        rec.skip("symbolic", "α = Ad V on tower elements", "system is not surjective");
    }
    rec.tally("tower", "tower embedding is isometric", cfg.tower_samples, embed_failures);
    rec.tally("tower", "B_0 lands on the diagonal of B_k", cfg.tower_samples, diag_failures);
}

fn numeric(rec: &mut Recorder, sys: &FiniteDynSys, space: &Arc<CoveringSpace>, cfg: &SuiteConfig, rng: &mut SuiteRng) {
    let l = cfg.fock_depth;
    let mut cov = Vec::new();
    let mut iso = Vec::new();
    for x in 0..sys.m() {
        match TruncatedRep::orbit_with_guard(sys, x, l, cfg.max_dim) {
            Ok(rep) => {
                cov.push(fockrep::check_covariance(&rep, &rep.spanning_functions()));
                iso.push(fockrep::check_row_isometry(&rep));
            }
            Err(e) => {
                rec.error("numeric", "orbit representations", e);
                return;
            }
        }
    }
    rec.fock("covariance f s_i = s_i (f∘σ_i)", &cov);
    rec.fock("row isometry s_i* s_j = δ_ij", &iso);

    if !sys.is_surjective() {
        rec.skip("numeric", "intertwining λ_(i,x)∘ρ = λ_x", "system is not surjective");
        return;
    }
    let points = fockrep::covering_points(space, cfg.covering_points);
    let mut tail_reports = Vec::new();
    let mut window_reports = Vec::new();
    let mut inter = Vec::new();
    for q in &points {
        match TruncatedRep::tail_with_guard(sys, &q.cylinder(cfg.tail_window), l, cfg.max_dim)
            .and_then(|rep| Ok((fockrep::check_cuntz_completeness(&rep)?, fockrep::check_window_coherence(&rep, &rep.spanning_functions())?)))
        {
            Ok((c, w)) => {
                tail_reports.push(c);
                window_reports.push(w);
            }
            Err(e) => return rec.error("numeric", "tail representations", e),
        }
        match fockrep::check_rho_intertwine(space, q.base(), q, l) {
            Ok(r) => inter.push(r),
            Err(e) => return rec.error("numeric", "intertwining λ_(i,x)∘ρ = λ_x", e),
        }
    }
    rec.fock("Cuntz completeness on tail windows", &tail_reports);
    rec.fock("tail-window coherence", &window_reports);
    rec.fock(&format!("intertwining λ_(i,x)∘ρ = λ_x ({} covering points)", points.len()), &inter);

    let rep = match CoveringRep::with_guard(space, &points[0], cfg.eval_depth, cfg.max_dim) {
        Ok(r) => r,
        Err(e) => return rec.error("numeric", "core evaluation", e),
    };
    let mut mult = Vec::new();
    let mut adj = Vec::new();
    for _ in 0..cfg.random_pairs {
        let a = random::core(space, 2, 1, 1, rng);
        let b = random::core(space, 2, 1, 1, rng);
        mult.push(fockrep::check_eval_multiplicative(&rep, &a, &b).expect("same space"));
        adj.push(fockrep::check_eval_adjoint(&rep, &a).expect("same space"));
    }
    let empty = mult.iter().filter(|r| r.interior_dim == 0).count();
    if empty > 0 {
        rec.push("numeric", "eval(ab) = eval(a)·eval(b)", false, format!("{empty} pairs had no exact columns"));
    } else {
        rec.fock("eval(ab) = eval(a)·eval(b)", &mult);
    }
    rec.fock("eval(a*) = eval(a)*", &adj);
}

fn tails(rec: &mut Recorder, sys: &FiniteDynSys, cfg: &SuiteConfig, rng: &mut SuiteRng) -> Result<()> {
    let tailed = sys.add_tail(cfg.tail_k)?;
    let deficiency = sys.range_deficiency().deficiency;
    let mut failures = Vec::new();
    let mut cases = 0;
    for &u in &deficiency {
        for k in 0..=cfg.tail_k.min(cfg.fock_depth.saturating_sub(1)) {
            cases += 1;
            match fockrep::tail_multiplicity(&tailed, u, k, cfg.fock_depth) {
                Ok(r) if r.pass => {}
                Ok(r) => failures.push(format!(
                    "u = {}, k = {k}: α = {} (expected {}), β = {} (expected {})",
                    r.u, r.alpha, r.expected_alpha, r.beta, r.expected_beta
                )),
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    rec.tally("numeric", "tail multiplicity 0^(α) ⊕ π_u^(β)", cases, failures);

    let tsys = tailed.system();
    let mut windows = Vec::new();
    for &u in &deficiency {
        let s = cfg.tail_window.min(cfg.tail_k);
        let vertices: Vec<usize> =
            std::iter::once(u).chain((1..=s).map(|k| tailed.tail_index(u, k).expect("tail point"))).collect();
        let path = Cylinder::new(vec![0; s], vertices);
        match TruncatedRep::tail_with_guard(tsys, &path, cfg.fock_depth, cfg.max_dim) {
            Ok(rep) => {
                windows.push(fockrep::check_window_coherence(&rep, &rep.spanning_functions())?);
                windows.push(fockrep::check_cuntz_completeness(&rep)?);
            }
            Err(e) => {
                rec.error("numeric", "tail-window coherence on the added tail", e);
                return Ok(());
            }
        }
    }
    rec.fock("tail-window coherence on the added tail", &windows);

    let space = CoveringSpace::with_boundary(tsys, &tailed.boundary(), cfg.depth + 2);
    let x = tailed.base_points();
    let mut failures = Vec::new();
    let mut cases = 0;
    for w in Word::up_to_length(tsys.n(), cfg.depth.min(cfg.tail_k - 1)) {
        for adjoint_right in [true, false] {
            cases += 1;
            let u = random::word(tsys.n(), 1, rng);
            let v = random::word(tsys.n(), 1, rng);
            let f = random::function(&space, 1, rng);
            let g = random::function(&space, 1, rng);
            let (l, r) = CoreElement::corner_identity(&x, &u, &f, &w, &g, &v, adjoint_right);
            if l != r {
                failures.push(format!("w = {w}, u = {u}, v = {v}, adjoint = {adjoint_right}"));
            }
        }
    }
    let stable = tailed.truncation_stable();
    let name = "corner identity (t_u f t_w*) χ_X (t_w g t_v) = t_u (f g χ_τ^k(X)) t_v";
    if stable {
        rec.tally("symbolic", name, cases, failures);
    } else {
        rec.skip("symbolic", name, format!("tail depth {} is not truncation-stable", cfg.tail_k));
    }

    let points = fockrep::covering_points(&space, cfg.covering_points);
    let mut shadow = Vec::new();
    for q in &points {
        let rep = match CoveringRep::with_guard(&space, q, cfg.eval_depth, cfg.max_dim) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let chi = CoreElement::function(&CylinderFunction::indicator(&CylinderSet::point_preimage(&space, &x, 0)));
        let a = random::core(&space, 2, 1, 1, rng);
        let compressed = &(&chi * &a) * &chi;
        let p = rep.eval_core(&chi).expect("same space");
        let cols = rep.exact_columns(&compressed);
        let cols: Vec<usize> = cols.into_iter().filter(|c| rep.exact_columns(&a).contains(c)).collect();
        let lhs = rep.eval_core(&compressed).expect("same space");
        let rhs = p.mul(&rep.eval_core(&a).expect("same space")).mul(&p);
        shadow.push(FockReport::new("full-corner shadow", lhs.deviation_on_columns(&rhs, &cols), cols.len(), true));
    }
    if shadow.is_empty() {
        rec.skip("numeric", "full-corner shadow χ_X a χ_X", "no infinite tail in the truncation");
    } else {
        rec.fock("full-corner shadow χ_X a χ_X", &shadow);
    }
    Ok(())
}

fn sets(rec: &mut Recorder, sys: &FiniteDynSys, space: &Arc<CoveringSpace>, cfg: &SuiteConfig) -> Result<()> {
    let det = space.tau_determinism(cfg.depth);
    rec.push("sets", "τ is determined on cylinders", det.pass, format!("depth {}", cfg.depth));

    let inv = sys.invariant_sets(20)?;
    let brute: Vec<PointSet> = (0u32..1 << sys.m())
        .map(|mask| (0..sys.m()).filter(|x| mask >> x & 1 == 1).collect::<PointSet>())
        .filter(|s| sys.is_invariant(s))
        .collect();
    let mut sorted = brute.clone();
    crate::dynsys::sort_point_sets(&mut sorted);
    rec.push("sets", "invariant sets match subset scan", inv == sorted, format!("{} invariant sets", inv.len()));

    let mut failures = Vec::new();
    let mut cases = 0;
    for a in &inv {
        let lifted = CylinderSet::point_preimage(space, a, 0);
        let data = IdealData::from_set(&lifted);
        cases += 1;
        if sys.is_surjective() && data.bi_invariant != sys.is_bi_invariant(a) {
            failures.push(format!("bi-invariance of p⁻¹({a:?})"));
        }
        for k in 0..4 {
            if data.set(k + 1) != &data.set(k).image_tau().coarsen() {
                failures.push(format!("F_{} ≠ τ(F_{k}) for A = {a:?}", k + 1));
            }
            if data.robust {
                let up = (0..sys.n())
                    .map(|i| data.set(k + 1).refine(data.set(k + 1).depth().min(space.max_depth() - 1)).image_sigma(i))
                    .reduce(|x, y| x.union(&y))
                    .expect("n ≥ 1");
                if up.coarsen() != data.set(k).coarsen() {
                    failures.push(format!("F_{k} ≠ ∪ σ̃_i(F_{}) for A = {a:?}", k + 1));
                }
            }
        }
    }
    rec.tally("sets", "ideal data F_k+1 = τ(F_k), robust F_k = ∪ σ̃_i(F_k+1)", cases, failures);

    if sys.is_surjective() {
        let depth = 2.min(space.max_depth() - 1);
        match correspondence_unitary(space, depth) {
            Ok(r) => rec.push(
                "sets",
                "correspondence unitary E ≅ F",
                r.pass,
                format!("{} checks over {} cylinder indicators", r.checks, r.family_size),
            ),
            Err(e) => rec.error("sets", "correspondence unitary E ≅ F", e),
        }
    } else {
        rec.skip("sets", "correspondence unitary E ≅ F", "system is not surjective");
    }

    let v = verdict::simplicity_verdict(sys)?;
    let consistent = match v.simplicity {
        Simplicity::TheoremInapplicableN1 => sys.n() == 1,
        Simplicity::Simple => sys.n() >= 2 && v.minimal,
        Simplicity::NotSimple => sys.n() >= 2 && !v.minimal,
    } && v.witnesses.witness_chain.as_ref().map_or(true, |c| c.valid);
    rec.push("sets", "verdict consistency", consistent, format!("{:?}", v.simplicity));
    Ok(())
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanReport {
    pub systems: usize,
    pub by_size: Vec<(usize, usize)>,
    pub simple: usize,
    pub minimal: usize,
    pub failures: Vec<String>,
    /// Systems detected as `O_n` whose verdict is not `Simple`; empirical.
    pub on_disagreements: Vec<String>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks on every system with `1..=max_points` points and `n` maps:
/// Simple ⟺ minimal ⟺ no nonempty proper invariant set; minimal ⟹
/// surjective; the witness chain exists exactly for non-minimal surjective
/// systems.
pub fn enumeration_scan(max_points: usize, n: usize, max_systems: usize) -> Result<ScanReport> {
    let mut total: usize = 0;
    for m in 1..=max_points {
        total = total.saturating_add(m.saturating_pow((m * n) as u32));
    }
    if total > max_systems {
        return Err(crate::error::Error::GuardExceeded { size: total, guard: max_systems });
    }
    let mut out = ScanReport::default();
    for m in 1..=max_points {
        let mut count = 0;
        for sys in FiniteDynSys::enumerate(m, n) {
            count += 1;
            let label = sys.to_json();
            let minimal = sys.is_minimal();
            let v = verdict::simplicity_verdict(&sys)?;
            let proper = sys.invariant_sets(20)?.iter().any(|s| !s.is_empty() && s.len() < m);
            if minimal {
                out.minimal += 1;
            }
            if v.simplicity == Simplicity::Simple {
                out.simple += 1;
            }
            if n >= 2 && ((v.simplicity == Simplicity::Simple) != minimal) {
                out.failures.push(format!("verdict vs minimality: {label}"));
            }
            if minimal == proper {
                out.failures.push(format!("minimality vs invariant sets: {label}"));
            }
            if minimal && !sys.is_surjective() {
                out.failures.push(format!("minimal but not surjective: {label}"));
            }
            if sys.is_surjective() && !minimal {
                let orbit = sys.minimality().witness.expect("non-minimal").1;
                match verdict::bi_invariant_witness(&sys, &orbit, 2) {
                    Ok(c) if c.valid => {}
                    _ => out.failures.push(format!("no valid witness chain: {label}")),
                }
            }
            if n >= 2 && sys.is_surjective() {
                let on = verdict::on_detect(&sys)?;
                if on.detection == verdict::OnDetection::IsomorphicToOn && v.simplicity != Simplicity::Simple {
                    out.on_disagreements.push(label);
                }
            }
        }
        out.by_size.push((m, count));
        out.systems += count;
    }
    Ok(out)
}
