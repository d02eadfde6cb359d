use std::sync::Arc;

use serde::Serialize;

use crate::covering::{CoveringSpace, CylinderFunction};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub depth: usize,
    pub family_size: usize,
    pub checks: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// `E = C(X̃)` with `⟨ξ,η⟩(x) = Σ_i conj(ξ(σ̃_i x)) η(σ̃_i x)`, left action
/// `f·ξ = fξ` and right action `ξ·f = ξ (f∘τ)`.
fn inner_e(xi: &CylinderFunction, eta: &CylinderFunction) -> CylinderFunction {
    let prod = &xi.conj() * eta;
    (0..xi.space().n()).map(|i| prod.compose_sigma(i)).reduce(|a, b| a + b).unwrap()
}

/// `F = C(X̃ × n)`, stored as `n` functions, with
/// `⟨ξ,η⟩(x) = Σ_i conj(ξ(x,i)) η(x,i)`, `(f·ξ)(x,i) = f(σ̃_i x) ξ(x,i)` and
/// `(ξ·f)(x,i) = ξ(x,i) f(x)`.
fn inner_f(xi: &[CylinderFunction], eta: &[CylinderFunction]) -> CylinderFunction {
    xi.iter().zip(eta).map(|(a, b)| &a.conj() * b).reduce(|a, b| a + b).unwrap()
}

fn left_f(f: &CylinderFunction, xi: &[CylinderFunction]) -> Vec<CylinderFunction> {
    xi.iter().enumerate().map(|(i, x)| &f.compose_sigma(i) * x).collect()
}

fn right_f(xi: &[CylinderFunction], f: &CylinderFunction) -> Vec<CylinderFunction> {
    xi.iter().map(|x| x * f).collect()
}

/// `Uξ = ξ ∘ h` with `h(x, i) = σ̃_i(x)`.
pub fn unitary(xi: &CylinderFunction) -> Vec<CylinderFunction> {
    (0..xi.space().n()).map(|i| xi.compose_sigma(i)).collect()
}

/// `U^{-1}ζ(y) = ζ(τy, i)` for `y ∈ X̃_i`.
pub fn unitary_inverse(space: &Arc<CoveringSpace>, zeta: &[CylinderFunction]) -> CylinderFunction {
    zeta.iter()
        .enumerate()
        .map(|(i, z)| &CylinderFunction::chi(space, &crate::word::Word::letter(i)) * &z.compose_tau())
        .reduce(|a, b| a + b)
        .unwrap()
}

/// Checks that `U` preserves inner products, intertwines both actions and
/// is invertible, over the spanning family of depth-`D` cylinder indicators.
pub fn correspondence_unitary(space: &Arc<CoveringSpace>, depth: usize) -> Result<CorrespondenceReport> {
    if !space.system().is_surjective() {
        return Err(Error::Precondition("the correspondence picture needs a surjective system".into()));
    }
    if depth + 1 > space.max_depth() {
        return Err(Error::Precondition(format!("depth {depth} needs a covering space of depth {}", depth + 1)));
    }
    let sys = space.system();
    let family: Vec<CylinderFunction> = (0..space.count(depth))
        .map(|k| CylinderFunction::from_fn(space, depth, |c| crate::scalar::Scalar::from_int((space.index_of(c) == Some(k)) as i64)))
        .collect();
    let name = |k: usize| space.cylinder(depth, k).describe(sys);
    let mut failures = Vec::new();
    let mut checks = 0;
    let images: Vec<Vec<CylinderFunction>> = family.iter().map(unitary).collect();
    for (a, xi) in family.iter().enumerate() {
        checks += 1;
        if unitary_inverse(space, &images[a]) != *xi {
            failures.push(format!("U^-1 U ≠ id on χ{}", name(a)));
        }
        for (b, eta) in family.iter().enumerate() {
            checks += 1;
            if inner_f(&images[a], &images[b]) != inner_e(xi, eta) {
                failures.push(format!("⟨Uξ,Uη⟩ ≠ ⟨ξ,η⟩ for χ{}, χ{}", name(a), name(b)));
            }
            let f = eta;
            checks += 2;
            if unitary(&(f * xi)) != left_f(f, &images[a]) {
                failures.push(format!("U(f·ξ) ≠ f·Uξ for ξ = χ{}, f = χ{}", name(a), name(b)));
            }
            if unitary(&(xi * &f.compose_tau())) != right_f(&images[a], f) {
                failures.push(format!("U(ξ·f) ≠ Uξ·f for ξ = χ{}, f = χ{}", name(a), name(b)));
            }
        }
    }
    // U is onto: every ζ in the spanning family of F is U of U^{-1}ζ.
    for i in 0..space.n() {
        for (a, xi) in family.iter().enumerate() {
            let mut zeta = vec![CylinderFunction::zero(space); space.n()];
            zeta[i] = xi.clone();
            checks += 1;
            if unitary(&unitary_inverse(space, &zeta)) != zeta {
                failures.push(format!("U U^-1 ≠ id on χ{} in slot {}", name(a), i + 1));
            }
        }
    }
    Ok(CorrespondenceReport { depth, family_size: family.len(), checks, pass: failures.is_empty(), failures })
}
