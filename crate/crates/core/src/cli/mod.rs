//! Configuration, built-in examples, pipeline orchestration and artifact emission.

pub mod config;
pub mod emit;
pub mod fixtures;
pub mod pipeline;
pub mod report;
pub mod run;

pub use config::{Overrides, ProblemConfig};
pub use emit::{emit, Formats};
pub use report::{RunReport, Verdict};
pub use run::{run, run_and_emit, Command, RunOutput};

/// Exit status for a finished run: `0`, or `2` for an unstable sweep.
pub fn exit_status(report: &RunReport) -> i32 {
    match report.verdict {
        Verdict::Unstable => 2,
        _ => 0,
    }
}
