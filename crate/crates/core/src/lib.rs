//! Symplectic eigenvalues of real positive definite matrices.
//!
//! The crate computes Williamson normal forms `Mᵀ A M = diag(D, D)` with `M`
//! symplectic, implements the symplectic-basis toolkit (B-inner products,
//! B-complements, sharp subspaces, constructive chain lemmas), and verifies
//! the Wielandt-type extremal principle and the additive and multiplicative
//! Lidskii inequalities for symplectic eigenvalues by explicit witnesses.

pub mod error;
pub mod extremal;
pub mod geometry;
pub mod inequalities;
pub mod linalg;
pub mod symplectic;

pub use error::{Error, Result};
