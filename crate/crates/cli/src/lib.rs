//! Library side of the `frax` command: grid file I/O, verification reports
//! and the verification suite.

pub mod error;
pub mod grid_file;
pub mod report;
pub mod suite;

pub use error::CliError;
pub use report::{CheckEntry, VerificationReport};
pub use suite::{run_verification_suite, Suite, SuiteConfig};
