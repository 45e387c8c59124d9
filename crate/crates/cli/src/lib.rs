//! Check runner, bundle format and machine-readable reports for the
//! finite-category correspondence toolkit.

pub mod bundle;
pub mod report;
pub mod run;
pub mod suite;
