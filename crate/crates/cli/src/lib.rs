//! Front end for `sympspec-core`: matrix files, seeded verification suites
//! and their JSON reports.

pub mod commands;
pub mod exit;
pub mod format;
pub mod io;
pub mod report;
pub mod suites;

/// Environment variable holding the default master seed.
pub const SEED_ENV: &str = "SYMPSPEC_SEED";
