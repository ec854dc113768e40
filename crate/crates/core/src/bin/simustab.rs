use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use simustab::cli::{exit_status, fixtures, run_and_emit, Command, Formats, Overrides, ProblemConfig, RunReport};
use simustab::par::Execution;
use simustab::stabdata::ModeRequest;
use simustab::{Error, Result};

/// Simultaneous stabilization of a plant family by analytic interpolation.
#[derive(Parser)]
#[command(name = "simustab", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Unstable zeros of the pencil and the interpolation data.
    Analyze(WithConfig),
    /// Solve the interpolation problem and check the interpolant.
    Solve(WithConfig),
    /// Full synthesis and stability sweep over the λ-grid.
    Sweep(WithConfig),
    /// Sweep a built-in example (example1 or example2).
    Reproduce {
        example: String,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args)]
struct WithConfig {
    /// JSON problem configuration.
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Direct,
    Sqrt,
}

#[derive(Args)]
struct Opts {
    /// Σ as a JSON file with an array of rows, or a preset name.
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// λ-grid as start:step:end.
    #[arg(long)]
    grid: Option<String>,
    /// Output directory; SIMUSTAB_OUT takes precedence.
    #[arg(long, default_value = "simustab-out")]
    out: PathBuf,
    /// Comma-separated subset of csv, json, svg.
    #[arg(long, default_value = "csv,json,svg")]
    format: String,
    /// Zero-simplicity and rank-gap tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Evaluate the λ-grid on one thread.
    #[arg(long)]
    sequential: bool,
}

impl Opts {
    fn overrides(&self) -> Overrides {
        Overrides {
            sigma: self.sigma.clone(),
            alpha: self.alpha,
            mode: self.mode.map(|m| match m {
                Mode::Auto => ModeRequest::Auto,
                Mode::Direct => ModeRequest::Direct,
                Mode::Sqrt => ModeRequest::Sqrt,
            }),
            grid: self.grid.clone(),
            tol: self.tol,
        }
    }
}

fn summary(r: &RunReport) {
    println!("{} {}: {} unstable zero(s)", r.command, r.source, r.zeros.len());
    for z in &r.zeros {
        println!("  s = {:.6} {:+.6}i", z.s.re, z.s.im);
    }
    println!("  mode {:?}, n = {}", r.data.mode, r.data.n);
    if let Some(c) = &r.cee {
        println!(
            "  interpolation residual {:.3e}, min He F {:.4}, pole radius {:.4}",
            c.check.interp_residual, c.check.min_herm_eig, c.check.pole_radius
        );
    }
    if let Some(s) = &r.synthesis {
        for lp in &s.sweep.closed_loop {
            match lp.max_re {
                Some(m) => println!("  lambda {:.2}: {} poles, max Re {:.6}", lp.lambda, lp.poles.len(), m),
                None => println!("  lambda {:.2}: no poles", lp.lambda),
            }
        }
        let bez = s.bezout.iter().map(|b| b.residual).fold(0.0, f64::max);
        println!("  Bezout residual {bez:.3e}, oracle gap {:.3e}", s.oracle_gap);
    }
    println!("  verdict: {:?}", r.verdict);
}

fn execute(cli: Cli) -> Result<i32> {
    let (command, source, mut cfg, opts) = match cli.command {
        Cmd::Analyze(w) => {
            (Command::Analyze, w.config.display().to_string(), ProblemConfig::from_path(&w.config)?, w.opts)
        }
        Cmd::Solve(w) => (Command::Solve, w.config.display().to_string(), ProblemConfig::from_path(&w.config)?, w.opts),
        Cmd::Sweep(w) => (Command::Sweep, w.config.display().to_string(), ProblemConfig::from_path(&w.config)?, w.opts),
        Cmd::Reproduce { example, opts } => {
            let cfg = fixtures::example(&example)
                .ok_or_else(|| Error::Config(format!("example: unknown example '{example}'")))?;
            (Command::Reproduce, example, cfg, opts)
        }
    };
    opts.overrides().apply(&mut cfg)?;
    let formats = Formats::parse(&opts.format)?;
    let out = std::env::var_os("SIMUSTAB_OUT").map(PathBuf::from).unwrap_or(opts.out.clone());
    let exec = if opts.sequential { Execution::Sequential } else { Execution::Parallel };
    let (output, files) = run_and_emit(command, &source, &cfg, exec, &out, formats)?;
    summary(&output.report);
    for f in files {
        println!("  wrote {}", f.display());
    }
    Ok(exit_status(&output.report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
