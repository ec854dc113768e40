#![allow(dead_code)]

use simustab::cli::pipeline::{analyze, solve, synthesize, Analysis, Solved, Synthesis};
use simustab::cli::{fixtures, ProblemConfig};
use simustab::par::Execution;
use simustab::{CMat, Complex64};

pub struct Run {
    pub cfg: ProblemConfig,
    pub analysis: Analysis,
    pub solved: Solved,
    pub synthesis: Synthesis,
}

pub fn run_config(cfg: ProblemConfig) -> Run {
    let pp = cfg.plant_pair().unwrap();
    let analysis = analyze(&pp, cfg.alpha, cfg.mode, &cfg.tolerances).unwrap();
    let solved = solve(&analysis, cfg.sigma_matrix().unwrap().as_ref()).unwrap();
    let synthesis = synthesize(&analysis, &solved, &cfg.lambda_grid().unwrap(), Execution::Parallel).unwrap();
    Run { cfg, analysis, solved, synthesis }
}

pub fn run_example(name: &str) -> Run {
    run_config(fixtures::example(name).unwrap())
}

/// Example 1 with one of the named Σ presets.
pub fn run_preset(preset: &str) -> Run {
    let mut cfg = fixtures::example1();
    cfg.sigma = Some(simustab::cli::config::SigmaSpec::Preset(preset.into()));
    run_config(cfg)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn fro(m: &CMat) -> f64 {
    m.norm()
}

/// Product `prod (s - r_k)` by repeated convolution, ascending coefficients.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![c(1.0, 0.0)];
    for &r in roots {
        let mut q = vec![c(0.0, 0.0); p.len() + 1];
        for (k, &a) in p.iter().enumerate() {
            q[k + 1] += a;
            q[k] -= a * r;
        }
        p = q;
    }
    p
}
