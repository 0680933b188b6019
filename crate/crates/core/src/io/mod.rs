//! Case files, result files, bundled fixtures and the command line.

pub mod case_file;
pub mod cli;
pub mod fixtures;
pub mod report;
pub mod results;

pub use case_file::{parse_case, parse_case_str, read_case_file, serialize_case, CaseError, CaseFile, SCHEMA_VERSION};
pub use cli::cli_main;
pub use report::{write_report, ReportError};
pub use results::{write_results, ResultsError};
