//! Command-line front end for `invshift-core`: JSON request documents, seeded
//! Monte Carlo checks and deterministic reports.

pub mod error;
pub mod format;
pub mod run;
pub mod sample;

pub use error::{CliError, Result};
pub use format::{parse_request, AnalysisRequest, CircleInput, Command};
pub use run::{run, RunOutcome};
pub use sample::{empirical_shift_check, sample, EmpiricalTable};
