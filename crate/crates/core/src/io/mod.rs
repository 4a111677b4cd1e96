//! Durable artifacts: plain-text solution files and JSON reports.

pub mod report;
pub mod solution_file;

pub use report::Report;
pub use solution_file::SolutionFile;

/// Version string written into every artifact.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
