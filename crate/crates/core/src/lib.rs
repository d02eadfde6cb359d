//! Exact computations for the C*-envelope of the tensor algebra of a finite
//! multivariable dynamical system `(X, σ_1, …, σ_n)`.
//!
//! * [`dynsys`]: the system itself, orbits, invariant sets, minimality, tails.
//! * [`covering`]: the covering system `X̃` as backward paths, with exact
//!   cylinder functions and clopen sets.
//! * [`corealg`]: the dense `*`-algebra spanned by `t_u f t_v*`, the tower
//!   `B_k`, the endomorphism `α` and ideal data.
//! * [`fockrep`]: truncated Fock representations as exact sparse matrices.
//! * [`verdict`]: simplicity verdicts, `O_n` detection and witness chains.
//! * [`suite`]: the named check suites and the exhaustive small-system scan.

pub mod builtin;
pub mod corealg;
pub mod covering;
pub mod dynsys;
pub mod error;
pub mod fockrep;
pub mod random;
pub mod scalar;
pub mod suite;
pub mod verdict;
pub mod word;

pub use corealg::{CoreElement, IdealData, TowerElement};
pub use covering::{CoveringSpace, Cylinder, CylinderFunction, CylinderSet, InfiniteTailSpec, TailGraph};
pub use dynsys::{FiniteDynSys, PointSet, TailedSys};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use word::Word;
