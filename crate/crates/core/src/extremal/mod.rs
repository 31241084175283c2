//! Witness-based verification of the extremal characterisations of
//! symplectic eigenvalues: the maxmin principle, Wielandt's principle, its
//! generalisation to Schur-concave functionals, and the determinant form.

mod certificate;
mod certify;
mod chain;

pub use certificate::{ExtremalCertificate, TupleWitness};
pub use certify::{
    det_product_check, maxmin_check, phi_extremal_check, poincare_witness, wielandt_certify, PoincareWitness,
    FUNCTIONAL_TRIALS,
};
pub use chain::{sample_tuple_in_chain, Direction, SubspaceChain, NESTING_TOL, SAMPLE_ATTEMPTS};
