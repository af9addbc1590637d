//! Problem files, command dispatch and JSON reports for the `eqs` tool.

pub mod commands;
pub mod problem;
pub mod report;

pub use commands::{modules_by_id, replay, run, run_cached, COMMANDS};
pub use problem::{Overrides, Problem, ProblemFile};
pub use report::Report;
