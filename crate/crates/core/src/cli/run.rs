//! Command dispatch.

use std::path::PathBuf;

use super::config::ProblemConfig;
use super::emit::{emit, Formats};
use super::pipeline::{analyze, solve, synthesize, Analysis, Solved, Synthesis};
use super::report::{CeeReport, DataSummary, RunReport, SynthesisReport, Verdict, ZeroEntry};
use crate::par::Execution;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Pencil zeros and interpolation data.
    Analyze,
    /// Adds the interpolant and its checks.
    Solve,
    /// Adds the compensator and the λ-sweep.
    Sweep,
    /// [`Command::Sweep`] on a built-in example.
    Reproduce,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Reproduce => "reproduce",
        }
    }
}

/// Report together with the in-memory intermediate results.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: RunReport,
    pub analysis: Analysis,
    pub solved: Option<Solved>,
    pub synthesis: Option<Synthesis>,
}

/// Runs `command` on `cfg`; `source` names the config in the report.
pub fn run(command: Command, source: &str, cfg: &ProblemConfig, exec: Execution) -> Result<RunOutput> {
    cfg.validate()?;
    let pp = cfg.plant_pair()?;
    let grid = cfg.lambda_grid()?;
    let analysis = analyze(&pp, cfg.alpha, cfg.mode, &cfg.tolerances)?;
    let solved = match command {
        Command::Analyze => None,
        _ => Some(solve(&analysis, cfg.sigma_matrix()?.as_ref())?),
    };
    let synthesis = match (&solved, command) {
        (Some(s), Command::Sweep | Command::Reproduce) => Some(synthesize(&analysis, s, &grid, exec)?),
        _ => None,
    };
    let verdict = match (&solved, &synthesis) {
        (_, Some(sy)) if sy.sweep.stable => Verdict::Stable,
        (_, Some(_)) => Verdict::Unstable,
        (Some(_), None) => Verdict::Solved,
        (None, None) => Verdict::Analyzed,
    };
    let report = RunReport {
        command: command.name().to_string(),
        source: source.to_string(),
        plant_size: pp.size(),
        zeros: analysis.zeros.iter().map(|z| ZeroEntry { s: z.s, tag: z.tag }).collect(),
        data: DataSummary::new(&analysis, cfg.alpha),
        cee: solved.as_ref().map(CeeReport::new),
        synthesis: synthesis.as_ref().map(SynthesisReport::new),
        verdict,
        artifacts: Vec::new(),
    };
    Ok(RunOutput { report, analysis, solved, synthesis })
}

/// [`run`] followed by [`emit`] into `out`.
pub fn run_and_emit(
    command: Command,
    source: &str,
    cfg: &ProblemConfig,
    exec: Execution,
    out: &std::path::Path,
    formats: Formats,
) -> Result<(RunOutput, Vec<PathBuf>)> {
    let mut output = run(command, source, cfg, exec)?;
    let files = emit(&mut output.report, out, formats)?;
    Ok((output, files))
}
