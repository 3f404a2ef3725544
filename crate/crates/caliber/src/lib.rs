//! Parallel scans, verification suites, output formats and the command line
//! for [`caliber_core`].
//!
//! Records are produced in increasing `d` whatever the job count, so output
//! bytes depend only on the range and the filter.

pub mod cli;
mod error;
pub mod output;
pub mod runner;
pub mod suites;

pub use error::RunError;
pub use output::OutputRecord;
pub use runner::{scan_range, scan_range_vec};
pub use suites::{verify_suite, Suite, SuiteReport};
