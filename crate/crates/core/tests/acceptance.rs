//! Acceptance suite: eight criteria, one PASS/FAIL line each. Runs as its own
//! harness so the lines always reach the test log.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mvdyn_core::corealg::correspondence_unitary;
use mvdyn_core::covering::separation_test;
use mvdyn_core::fockrep::{self, CoveringRep, TruncatedRep};
use mvdyn_core::random::{self, SuiteRng};
use mvdyn_core::verdict::{self, OnDetection, Simplicity};
use mvdyn_core::{
    builtin, CoreElement, CoveringSpace, Cylinder, CylinderFunction, CylinderSet, FiniteDynSys, IdealData, PointSet,
    Scalar, TailGraph, TowerElement, Word,
};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(xs: &[usize]) -> PointSet {
    xs.iter().copied().collect()
}

fn subsets(m: usize) -> impl Iterator<Item = PointSet> {
    (0u32..1 << m).map(move |mask| (0..m).filter(|x| mask >> x & 1 == 1).collect())
}

fn invariant_oracle(sys: &FiniteDynSys, s: &PointSet) -> bool {
    s.iter().all(|&x| (0..sys.n()).all(|i| s.contains(&sys.maps()[i][x])))
}

fn bi_invariant_oracle(sys: &FiniteDynSys, s: &PointSet) -> bool {
    invariant_oracle(sys, s)
        && (0..sys.m()).all(|x| (0..sys.n()).all(|i| !s.contains(&sys.maps()[i][x]) || s.contains(&x)))
}

/// `τ^k(S)` at depth `d`, by enumerating depth-`d+k` cylinders.
fn tau_power_oracle(space: &Arc<CoveringSpace>, s: &CylinderSet, k: usize, d: usize) -> CylinderSet {
    let deep = s.refine(d + k);
    let hits: BTreeSet<Cylinder> = deep
        .cylinders()
        .map(|c| {
            let mut c = c.clone();
            for _ in 0..k {
                c = c.shift();
            }
            c
        })
        .collect();
    CylinderSet::from_fn(space, d, |c| hits.contains(c))
}

/// `∪_i σ̃_i(S)` at depth `d + 1` for a set `S` given at depth `d`.
fn sigma_union_oracle(space: &Arc<CoveringSpace>, s: &CylinderSet, d: usize) -> CylinderSet {
    let base = s.refine(d);
    let members: BTreeSet<Cylinder> = base.cylinders().cloned().collect();
    let sys = space.system();
    CylinderSet::from_fn(space, d + 1, |c| {
        let rest = c.shift();
        members.contains(&rest) && sys.apply(c.label(0), rest.vertex(0)) == c.vertex(0)
    })
}

/// Two distinct tails with one label sequence exist iff some off-diagonal
/// pair starts a backward lasso of length at most `2|X|²` in the pair graph.
fn two_tail_oracle(sys: &FiniteDynSys) -> Option<(usize, usize)> {
    let m = sys.m();
    let bound = 2 * m * m;
    let preds = |(x, y): (usize, usize)| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..sys.n() {
            for a in 0..m {
                for b in 0..m {
                    if sys.apply(i, a) == x && sys.apply(i, b) == y {
                        out.push((a, b));
                    }
                }
            }
        }
        out
    };
    fn dfs(
        path: &mut Vec<(usize, usize)>,
        bound: usize,
        preds: &dyn Fn((usize, usize)) -> Vec<(usize, usize)>,
    ) -> bool {
        if path.len() > bound {
            return false;
        }
        let cur = *path.last().unwrap();
        for p in preds(cur) {
            if path.contains(&p) {
                return true;
            }
            path.push(p);
            if dfs(path, bound, preds) {
                return true;
            }
            path.pop();
        }
        false
    }
    for x in 0..m {
        for y in 0..m {
            if x != y && dfs(&mut vec![(x, y)], bound, &preds) {
                return Some((x, y));
            }
        }
    }
    None
}

fn all_small_systems() -> Vec<FiniteDynSys> {
    (1..=3).flat_map(|m| FiniteDynSys::enumerate(m, 2)).collect()
}

fn criterion_1() -> Outcome {
    let p3 = builtin::p3();
    let inv = p3.invariant_sets(20).map_err(|e| e.to_string())?;
    let expected = vec![set(&[]), set(&[0]), set(&[0, 1]), set(&[0, 2]), set(&[0, 1, 2])];
    ensure(inv == expected, || format!("invariant sets {inv:?}"))?;
    let bi = p3.bi_invariant_sets(20).map_err(|e| e.to_string())?;
    ensure(bi == vec![set(&[]), set(&[0, 1, 2])], || format!("bi-invariant sets {bi:?}"))?;

    let space = CoveringSpace::with_depth(&p3, 4);
    let a = CylinderSet::point_preimage(&space, &set(&[0]), 0);
    for i in 0..2 {
        ensure(a.image_sigma(i).is_subset(&a), || format!("σ̃_{}(p⁻¹(0)) ⊄ p⁻¹(0)", i + 1))?;
    }
    let pre = a.preimage_sigma(0).refine(2);
    ensure(!pre.is_subset(&a), || "σ̃_1⁻¹(p⁻¹(0)) ⊆ p⁻¹(0)".into())?;
    let escapee = pre.difference(&a).cylinders().next().cloned().ok_or("no escaping cylinder")?;
    ensure(escapee.vertex(0) == 2, || format!("unexpected escaping cylinder {escapee:?}"))?;

    let chain = verdict::bi_invariant_witness(&p3, &set(&[0]), 3).map_err(|e| e.to_string())?;
    ensure(chain.valid && chain.levels.len() == 4, || format!("chain {chain:?}"))?;
    for (k, level) in chain.levels.iter().enumerate() {
        ensure(level.nonempty && level.proper, || format!("level {k} empty or full"))?;
        if k > 0 {
            ensure(chain.sets[k].is_subset(&chain.sets[k - 1]), || format!("W_{k} ⊄ W_{}", k - 1))?;
        }
    }
    let v = verdict::simplicity_verdict(&p3).map_err(|e| e.to_string())?;
    ensure(v.simplicity == Simplicity::NotSimple, || format!("verdict {:?}", v.simplicity))?;
    Ok("P3 lattices, p⁻¹(0) invariant not bi-invariant, chain to depth 3, NotSimple".into())
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    let mut simple = 0;
    for sys in all_small_systems() {
        count += 1;
        let m = sys.m();
        let proper_invariant = subsets(m).any(|s| !s.is_empty() && s.len() < m && invariant_oracle(&sys, &s));
        let surjective = (0..m).all(|y| (0..sys.n()).any(|i| (0..m).any(|x| sys.apply(i, x) == y)));
        let v = verdict::simplicity_verdict(&sys).map_err(|e| e.to_string())?;
        let is_simple = v.simplicity == Simplicity::Simple;
        simple += is_simple as usize;
        ensure(is_simple == sys.is_minimal() && sys.is_minimal() == !proper_invariant, || {
            format!("equivalence fails on {}", sys.to_json())
        })?;
        ensure(!sys.is_minimal() || surjective, || format!("minimal but not surjective: {}", sys.to_json()))?;
        ensure(v.surjective == surjective, || format!("surjectivity flag on {}", sys.to_json()))?;
    }
    ensure(count == 1 + 16 + 729, || format!("{count} systems"))?;
    let scan = mvdyn_core::suite::enumeration_scan(3, 2, 1000).map_err(|e| e.to_string())?;
    ensure(scan.passed(), || format!("library scan failures: {:?}", scan.failures))?;
    Ok(format!("{count} systems, {simple} simple, zero exceptions"))
}

fn random_terms(space: &Arc<CoveringSpace>, rng: &mut SuiteRng) -> Vec<(Word, CylinderFunction, Word)> {
    (0..3)
        .map(|_| (random::word(space.n(), 2, rng), random::function(space, rng.gen_range(0..=1), rng), random::word(space.n(), 2, rng)))
        .collect()
}

fn criterion_3() -> Outcome {
    let mut rng = random::rng(3);
    let mut identities = 0usize;
    for sys in builtin::all() {
        let name = sys.name().unwrap_or("?").to_string();
        let n = sys.n();
        let space = CoveringSpace::with_depth(&sys, 5);
        let words = Word::up_to_length(n, 3);

        for w in &words {
            let f = random::function(&space, 1, &mut rng);
            let mut shifted = f.clone();
            for _ in 0..w.len() {
                shifted = shifted.compose_tau();
            }
            let lhs = CoreElement::term(w, &f, w);
            let rhs = CoreElement::function(&(&CylinderFunction::chi(&space, w) * &shifted));
            ensure(lhs == rhs, || format!("{name}: t_w f t_w* ≠ χ_w (f∘τ^|w|) at w = {w}"))?;
            identities += 1;
        }

        for u in &words {
            for v in &words {
                let f = random::function(&space, 1, &mut rng);
                let refined = (0..n)
                    .map(|i| CoreElement::term(&u.push(i), &f.compose_sigma(i), &v.push(i)))
                    .fold(CoreElement::zero(&space), |a, b| &a + &b);
                ensure(CoreElement::term(u, &f, v) == refined, || format!("{name}: refinement at u = {u}, v = {v}"))?;
                identities += 1;
            }
        }

        for k in 0..=3 {
            let sum = Word::all_of_length(n, k)
                .iter()
                .map(|w| CylinderFunction::chi(&space, w))
                .fold(CylinderFunction::zero(&space), |a, b| a + b);
            ensure(sum == CylinderFunction::one(&space), || format!("{name}: Σ χ_w ≠ 1 at k = {k}"))?;
            identities += 1;
        }

        if sys.is_surjective() {
            let v = CoreElement::isometry_v(&space).map_err(|e| e.to_string())?;
            ensure(&v.adjoint() * &v == CoreElement::one(&space), || format!("{name}: V*V ≠ 1"))?;
            for s in 0..100 {
                let level = s % 3;
                let b = if s % 2 == 0 {
                    random::tower(&space, level, 1, &mut rng)
                } else {
                    random::diagonal_tower(&space, level, 1, &mut rng)
                };
                let ad = &(&v * &b.to_core()) * &v.adjoint();
                ensure(b.alpha().to_core() == ad, || format!("{name}: α ≠ Ad V on sample {s}"))?;
            }
            for k in 0..=2u32 {
                for _ in 0..5 {
                    let (u, f, w) = random_terms(&space, &mut rng).remove(0);
                    let a = CoreElement::term(&u, &f, &w);
                    let t1k = CoreElement::t_word(&space, &Word::repeat(0, k as usize)).adjoint();
                    let lhs = &(&a * &t1k).scale(&Scalar::sqrt((n as u64).pow(k))) * &v.pow(k);
                    ensure(lhs == a, || format!("{name}: recovery fails at k = {k}, u = {u}, v = {w}"))?;
                }
            }
            identities += 1 + 100 + 15;
        }

        for s in 0..20 {
            let terms = random_terms(&space, &mut rng);
            let a = CoreElement::from_terms(&space, terms.clone());
            let degree_zero: Vec<_> = terms.into_iter().filter(|(u, _, v)| u.len() == v.len()).collect();
            let psi_oracle = CoreElement::from_terms(&space, degree_zero);
            let m = a.max_abs_degree() + 1;
            let mut avg = CoreElement::zero(&space);
            for j in 0..m {
                avg = &avg + &a.gauge_scale(&Scalar::root_of_unity(m, j as i64));
            }
            let avg = avg.scale(&Scalar::ratio(1, m as i64));
            let psi = a.gauge_expect();
            ensure(psi == psi_oracle, || format!("{name}: Ψ ≠ degree-0 terms on sample {s}"))?;
            ensure(avg == psi, || format!("{name}: Ψ ≠ gauge average over {m} roots on sample {s}"))?;
            ensure(psi.gauge_expect() == psi, || format!("{name}: Ψ² ≠ Ψ on sample {s}"))?;
            identities += 3;
        }
    }
    Ok(format!("{identities} exact identities across {} shipped systems", builtin::all().len()))
}

fn criterion_4() -> Outcome {
    let mut rng = random::rng(4);
    let mut reps = 0;
    let mut intertwined = 0;
    let mut pairs = 0;
    for sys in builtin::all() {
        let name = sys.name().unwrap_or("?").to_string();
        for l in 1..=4 {
            for x in 0..sys.m() {
                let rep = TruncatedRep::orbit(&sys, x, l).map_err(|e| e.to_string())?;
                let cov = fockrep::check_covariance(&rep, &rep.spanning_functions());
                let iso = fockrep::check_row_isometry(&rep);
                ensure(cov.max_deviation == 0.0 && iso.max_deviation == 0.0, || {
                    format!("{name}, x = {x}, L = {l}: deviations {} / {}", cov.max_deviation, iso.max_deviation)
                })?;
                reps += 1;
            }
        }
        let space = CoveringSpace::with_depth(&sys, 4);
        let points = fockrep::covering_points(&space, 3);
        let available = covering_space_size_at_least(&space, 3);
        ensure(points.len() >= available, || format!("{name}: only {} covering points", points.len()))?;
        if sys.is_surjective() {
            for q in &points {
                let r = fockrep::check_rho_intertwine(&space, q.base(), q, 3).map_err(|e| e.to_string())?;
                ensure(r.max_deviation == 0.0 && r.interior_dim > 0, || format!("{name}: intertwining {r:?}"))?;
                intertwined += 1;
            }
        }
        let rep = CoveringRep::new(&space, &points[0], 6).map_err(|e| e.to_string())?;
        for s in 0..50 {
            let a = random::core(&space, 2, 1, 1, &mut rng);
            let b = random::core(&space, 2, 1, 1, &mut rng);
            let r = fockrep::check_eval_multiplicative(&rep, &a, &b).map_err(|e| e.to_string())?;
            ensure(r.max_deviation == 0.0 && r.interior_dim > 0, || format!("{name}: pair {s}: {r:?}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{reps} orbit reps exact, {intertwined} intertwinings, {pairs} multiplicative pairs"))
}

/// `min(want, |X̃|)`, counting tails by their depth-`D` cylinders; a
/// single-point covering space has one point only.
fn covering_space_size_at_least(space: &Arc<CoveringSpace>, want: usize) -> usize {
    space.count(space.max_depth()).min(want)
}

fn criterion_5() -> Outcome {
    let ns = builtin::ns();
    let tailed = ns.add_tail(3).map_err(|e| e.to_string())?;
    for (k, alpha, beta) in [(1, 1, 2), (2, 3, 4)] {
        let r = fockrep::tail_multiplicity(&tailed, 1, k, 4).map_err(|e| e.to_string())?;
        let expected_alpha: usize = (0..k).map(|s| 2usize.pow(s as u32)).sum();
        ensure(expected_alpha == alpha, || "oracle mismatch".into())?;
        ensure(r.alpha == alpha && r.beta == beta && r.max_deviation == 0.0 && r.pass, || format!("k = {k}: {r:?}"))?;
    }

    ensure(tailed.truncation_stable(), || "tail depth 3 is not truncation-stable".into())?;
    let tsys = tailed.system();
    let space = CoveringSpace::with_boundary(tsys, &tailed.boundary(), 5);
    let x = tailed.base_points();
    let chi_x = CylinderSet::point_preimage(&space, &x, 0);
    let mut rng = random::rng(5);
    let mut cases = 0;
    for w in Word::up_to_length(tsys.n(), 2) {
        let tk = tau_power_oracle(&space, &chi_x, w.len(), 1);
        for _ in 0..3 {
            let u = random::word(tsys.n(), 1, &mut rng);
            let v = random::word(tsys.n(), 1, &mut rng);
            let f = random::function(&space, 1, &mut rng);
            let g = random::function(&space, 1, &mut rng);
            let chi = CoreElement::function(&CylinderFunction::indicator(&chi_x));
            let lhs = &(&CoreElement::term(&u, &f, &w) * &chi) * &CoreElement::term(&w, &g, &v);
            let rhs = CoreElement::term(&u, &(&(&f * &g) * &CylinderFunction::indicator(&tk)), &v);
            ensure(lhs == rhs, || format!("corner identity fails at u = {u}, w = {w}, v = {v}"))?;
            cases += 1;
        }
    }
    Ok(format!("α = (1, 3), β = (2, 4); corner identity on {cases} cases"))
}

fn criterion_6() -> Outcome {
    let mut rng = random::rng(6);
    let mut worst: f64 = 0.0;
    let mut exact = 0;
    let mut ideal_checks = 0;
    for sys in builtin::all() {
        let name = sys.name().unwrap_or("?").to_string();
        let space = CoveringSpace::with_depth(&sys, 6);
        for s in 0..100 {
            let level = s % 3;
            let diagonal = s % 2 == 1 || level == 0;
            let b = if diagonal {
                random::diagonal_tower(&space, level, 1, &mut rng)
            } else {
                random::tower(&space, level, 1, &mut rng)
            };
            let (n0, n1) = (b.norm(), b.embed().norm());
            worst = worst.max((n0.value - n1.value).abs());
            ensure((n0.value - n1.value).abs() <= 1e-10, || format!("{name}: {} vs {}", n0.value, n1.value))?;
            if diagonal {
                ensure(n0.exact.is_some() && n0.exact == n1.exact, || format!("{name}: exact norms {n0:?} / {n1:?}"))?;
                exact += 1;
            }
            let f = random::function(&space, 1, &mut rng);
            let e = TowerElement::from_function(&f).embed_to(level + 1);
            for u in Word::all_of_length(sys.n(), level + 1) {
                for v in Word::all_of_length(sys.n(), level + 1) {
                    let got = e.entry(&u, &v).cloned().unwrap_or_else(|| CylinderFunction::zero(&space));
                    let want = if u == v { f.compose_sigma_word(&u) } else { CylinderFunction::zero(&space) };
                    ensure(got == want, || format!("{name}: B_0 entry ({u}, {v})"))?;
                }
            }
        }

        for a in subsets(sys.m()).filter(|s| invariant_oracle(&sys, s)) {
            let data = IdealData::from_set(&CylinderSet::point_preimage(&space, &a, 0));
            for k in 0..3 {
                let fk = data.set(k);
                let d = fk.depth().max(1);
                ensure(data.set(k + 1) == &tau_power_oracle(&space, fk, 1, d - 1), || {
                    format!("{name}: F_{} ≠ τ(F_{k}) for A = {a:?}", k + 1)
                })?;
                if data.robust {
                    let next = data.set(k + 1);
                    ensure(fk == &sigma_union_oracle(&space, next, next.depth()), || {
                        format!("{name}: F_{k} ≠ ∪ σ̃_i(F_{}) for A = {a:?}", k + 1)
                    })?;
                }
                ideal_checks += 1;
            }
            if sys.is_surjective() {
                ensure(data.bi_invariant == bi_invariant_oracle(&sys, &a), || format!("{name}: bi-invariance flag {a:?}"))?;
            }
        }
    }
    Ok(format!("worst norm drift {worst:e}, {exact} exact norms, {ideal_checks} ideal-data steps"))
}

fn criterion_7() -> Outcome {
    let mut total = 0;
    for sys in [builtin::p3(), builtin::fs2()] {
        let space = CoveringSpace::with_depth(&sys, 3);
        let r = correspondence_unitary(&space, 2).map_err(|e| e.to_string())?;
        ensure(r.family_size == space.count(2), || format!("family of {} indicators", r.family_size))?;
        ensure(r.pass && r.failures.is_empty(), || format!("{:?}", r.failures))?;
        total += r.checks;
    }
    Ok(format!("{total} exact inner-product and bimodule checks on P3, FS2"))
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    let mut separating = 0;
    for sys in all_small_systems() {
        let sep = separation_test(&TailGraph::new(&sys), &sys);
        let oracle = two_tail_oracle(&sys);
        ensure(sep.separates == oracle.is_none(), || format!("detector {} vs oracle {oracle:?} on {}", sep.separates, sys.to_json()))?;
        if let (Some(w), Some(o)) = (sep.witness, oracle) {
            ensure(w == o, || format!("witness {w:?} vs {o:?} on {}", sys.to_json()))?;
        }
        if sys.is_surjective() {
            let on = verdict::on_detect(&sys).map_err(|e| e.to_string())?;
            ensure((on.detection == OnDetection::IsomorphicToOn) == sep.separates, || "O_n flag".into())?;
        }
        separating += sep.separates as usize;
        count += 1;
    }
    let fs2 = verdict::on_detect(&builtin::fs2()).map_err(|e| e.to_string())?;
    ensure(fs2.detection == OnDetection::IsomorphicToOn, || "FS2 not detected".into())?;
    let sw2 = verdict::on_detect(&builtin::sw2()).map_err(|e| e.to_string())?;
    ensure(
        sw2.detection == OnDetection::Inconclusive && sw2.witness == Some(("a".into(), "b".into())),
        || format!("SW2: {sw2:?}"),
    )?;
    Ok(format!("{count} systems agree with the lasso search ({separating} separate); FS2 → O_2, SW2 witness (a,b)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 8] = [
        ("1 example reproduction on P3", criterion_1, Some(Duration::from_secs(1))),
        ("2 exhaustive equivalence scan", criterion_2, Some(Duration::from_secs(10))),
        ("3 symbolic identity suite", criterion_3, Some(Duration::from_secs(10))),
        ("4 numeric representation suite", criterion_4, None),
        ("5 tail-adding suite on NS", criterion_5, Some(Duration::from_secs(5))),
        ("6 tower suite", criterion_6, None),
        ("7 correspondence unitary", criterion_7, None),
        ("8 separation detector", criterion_8, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
