//! Instance files, the verification pipeline and its reports.

pub mod emit;
pub mod instance;
pub mod pipeline;
pub mod report;

pub use emit::{emit, render, Format};
pub use instance::{parse_instance, parse_instance_str, InstanceError, InstanceSpec};
pub use pipeline::{run_command, run_pipeline, Command};
pub use report::{Report, Verdict};

/// Exit code for unusable input or arguments.
pub const EXIT_USAGE: i32 = 3;
