//! Majorization, the matrix geometric mean, and the additive and
//! multiplicative Lidskii inequalities for symplectic eigenvalues.

mod functional;
mod lidskii;
mod majorization;
mod mean;

pub use functional::{schur_concave_monotone_check, FunctionalCheck, FunctionalCounterexample, SpectralFunctional, FUNCTIONAL_TOL};
pub use lidskii::{
    additive_lidskii_records, additive_lidskii_trial, multiplicative_lidskii_records, multiplicative_lidskii_trial,
    InequalityRecord, InstanceDigest, Relation, INEQUALITY_TOL,
};
pub use majorization::{
    majorize, random_dominated_pair, random_majorization_pair, random_positive, random_supermajorization_pair,
    supermajorization_margin, supermajorize, supermajorize_within, weakly_below, MajorizationVector, TOTAL_SUM_TOL,
};
pub use mean::{
    geometric_mean, half_congruence_spectra, polar_factor_check, search_half_congruence_counterexample,
    HalfCongruencePair,
};
