//! Exact computer algebra for the Virasoro-like algebra of Hamiltonian vector
//! fields on the 2-torus.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`scalar`], [`lattice`], [`matrix`]: exact rationals, the grading lattice
//!   `Γ = ℤ²` and dense exact matrices.
//! * [`liealg`]: structure constants of `𝔄 ⋊ Der 𝔄` and its Hamiltonian
//!   subalgebra.
//! * [`sl2rep`]: the simple `sl₂`-modules `V(λ)` in a Chevalley basis.
//! * [`lsmodule`]: the Larsson–Shen modules `M_μ^α(λ)` with exact actions.
//! * [`tcalc`]: the formal algebra spanned by `T(u)` and its difference calculus.
//! * [`identify`]: recovery of `(α, λ)` from a black-box family of matrices.
//! * [`sampling`]: seeded generators shared by tests and verification suites.

#![no_std]

extern crate alloc;

mod combination;

pub mod identify;
pub mod lattice;
pub mod liealg;
pub mod lsmodule;
pub mod matrix;
pub mod sampling;
pub mod scalar;
pub mod sl2rep;
pub mod tcalc;

pub use lattice::{apply_integral_matrix, det, IntegralMatrix, LatticeVector};
pub use matrix::{matrix_commutator, ExactMatrix, MatrixError};
pub use scalar::Scalar;
