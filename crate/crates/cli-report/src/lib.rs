//! Command-line driver for the verification suites: TOML configs in, a
//! versioned JSON report and CSV tables out.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;

pub use commands::{converge, sample, spectrum, summarize, verify, CommandOutcome, RunOptions};
pub use config::SuiteConfig;
pub use error::{CliError, Result, EXIT_CAPACITY, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
pub use report::{CheckKind, CheckRecord, Table, VerificationReport, REPORT_SCHEMA, SCHEMA_VERSION};
pub use suites::{find_suite, Suite, SuiteOutput, SUITES};
