//! Geometry relative to a symplectic basis `B`: the inner product
//! `⟨·,·⟩_B`, the B-complement `x ↦ x′`, sharp subspaces, symplectic
//! complements and the constructive chain results.
//!
//! Internally everything B-specific is done in B-coordinates, where
//! `⟨·,·⟩_B` is the Euclidean product and the prime is the fixed map
//! `(α, β) ↦ (−β, α)`.

mod basis;
mod construct;
mod gram_schmidt;
mod spaces;
mod trace;

pub use basis::{BDiagonalOperator, SymplecticBasis, BASIS_TOL, SPAN_TOL};
pub use construct::{
    chain_extend, dual_chain_construct, verify_dual_chain, ChainExtension, DualChain,
    DualChainReport, CONSTRUCTION_TOL, MAX_ATTEMPTS,
};
pub use gram_schmidt::{b_gram_schmidt, SKEW_TOL};
pub use spaces::{
    is_isotropic, subspace_prime_sharp, symplectic_complement, PrimeSharp, ISOTROPY_TOL,
    MEMBERSHIP_TOL, NONDEGENERACY_TOL,
};
pub use trace::{same_span_trace_check, TraceCheck};
