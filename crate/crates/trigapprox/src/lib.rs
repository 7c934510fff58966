//! Experiment runner for the interpolation error estimates in `trigapprox-core`.
//!
//! Generates seeded test functions, evaluates both sides of every inequality on
//! `(ψ, n, x)` grids and writes CSV/JSON reports.
pub mod config;
pub mod error;
pub mod harness;
pub mod report;
pub mod spec;
pub mod testfn;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use harness::{BoundReport, ClassicalRow, SharpnessRow, SharpnessSummary, VerifyOutcome};
