use num_complex::Complex64;

use crate::cee::{check_solution, solve_interpolant, Interpolant, SolutionCheck};
use crate::par::Execution;
use crate::stabdata::{
    build_pencil, interp_value, normalize_or_augment, null_direction, principal_sqrt, to_disc, unstable_zeros,
    DataMode, DiscData, InterpValue, ModeRequest, NullDirection, PencilM, PlantPair, Tolerances, UnstableZero,
};
use crate::synth::{
    compensator_oracle_gap, compensator_with_zeros, coprime_spot_check, default_samples, delta_pair, eigen_axis_check,
    f_plane, sweep, verify_bezout, CompensatorFactors, DeltaPair, EigenAxisReport, PlaneInterpolant, SweepReport,
};
use crate::{linalg, CMat, Error, RMat, Result};

/// Reduction of a plant pair to normalized disc data.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub plants: PlantPair,
    pub pencil: PencilM,
    pub zeros: Vec<UnstableZero>,
    pub directions: Vec<NullDirection>,
    pub values: Vec<InterpValue>,
    pub mode: DataMode,
    /// Un-normalized disc data.
    pub disc: DiscData,
    pub normalized: DiscData,
}

pub fn analyze(pp: &PlantPair, alpha: f64, mode: ModeRequest, tol: &Tolerances) -> Result<Analysis> {
    let pencil = build_pencil(pp)?;
    let zeros = unstable_zeros(&pencil, tol)?;
    let directions = zeros.iter().map(|z| null_direction(&pencil, z, tol)).collect::<Result<Vec<_>>>()?;
    let values = directions.iter().map(|d| interp_value(d, alpha)).collect::<Result<Vec<_>>>()?;
    let all_positive = values.iter().all(|v| linalg::min_eig_hermitian(&v.matrix) > 0.0);
    let mode = match mode {
        ModeRequest::Direct => DataMode::Direct,
        ModeRequest::Sqrt => DataMode::Sqrt,
        ModeRequest::Auto if all_positive => DataMode::Direct,
        ModeRequest::Auto => DataMode::Sqrt,
    };
    let targets: Vec<CMat> = match mode {
        DataMode::Direct => values.iter().map(|v| v.matrix.clone()).collect(),
        DataMode::Sqrt => values.iter().map(|v| principal_sqrt(&v.matrix)).collect::<Result<_>>()?,
    };
    let disc = to_disc(&zeros, &targets, mode)?;
    let disc = DiscData { ell: pp.size(), ..disc };
    let normalized = normalize_or_augment(&disc, pp.size())?;
    Ok(Analysis { plants: pp.clone(), pencil, zeros, directions, values, mode, disc, normalized })
}

impl Analysis {
    /// `n`, the number of nodes besides the normalization base.
    pub fn n(&self) -> usize {
        self.normalized.non_base().len()
    }

    /// Shape `Σ` must have: `(n * ell, ell)`.
    pub fn sigma_shape(&self) -> (usize, usize) {
        (self.n() * self.normalized.ell, self.normalized.ell)
    }
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub interpolant: Interpolant,
    /// Checks against the un-normalized node values.
    pub check: SolutionCheck,
}

pub fn solve(an: &Analysis, sigma: Option<&RMat>) -> Result<Solved> {
    let sigma = match sigma {
        Some(s) if an.n() > 0 => {
            let want = an.sigma_shape();
            if (s.nrows(), s.ncols()) != want {
                return Err(Error::Config(format!(
                    "sigma: expected {}x{} for n = {}, got {}x{}",
                    want.0,
                    want.1,
                    an.n(),
                    s.nrows(),
                    s.ncols()
                )));
            }
            Some(s)
        }
        _ => None,
    };
    let interpolant = solve_interpolant(&an.normalized, sigma)?;
    let check = check_solution(&interpolant, &an.disc)?;
    Ok(Solved { interpolant, check })
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub f1: PlaneInterpolant,
    pub delta: DeltaPair,
    pub compensator: CompensatorFactors,
    pub sweep: SweepReport,
    pub eigen_axis: EigenAxisReport,
    /// `(lambda, residual)` at `0`, `0.37`, `1`.
    pub bezout: Vec<(f64, f64)>,
    /// Largest relative gap between the stacked and block compensator forms.
    pub oracle_gap: f64,
    /// Smallest relative singular value of `[Nc Dc]` at the unstable zeros.
    pub coprime_margin: Option<f64>,
}

pub const BEZOUT_LAMBDAS: [f64; 3] = [0.0, 0.37, 1.0];
pub const EIGEN_AXIS_DENSITY: usize = 400;

pub fn synthesize(an: &Analysis, solved: &Solved, grid: &[f64], exec: Execution) -> Result<Synthesis> {
    let f1 = f_plane(&solved.interpolant)?;
    let delta = delta_pair(&f1, an.mode)?;
    let compensator = compensator_with_zeros(&an.pencil, &delta, &an.zeros)?;
    let sweep = sweep(&an.plants, &delta, grid, exec)?;
    let omega = 10.0 * an.zeros.iter().map(|z| z.s.norm()).fold(1.0, f64::max);
    let eigen_axis = eigen_axis_check(&delta, omega, EIGEN_AXIS_DENSITY)?;
    let samples = default_samples();
    let bezout = BEZOUT_LAMBDAS
        .iter()
        .map(|&l| verify_bezout(&an.plants, &compensator, &delta, l, &samples).map(|r| (l, r)))
        .collect::<Result<Vec<_>>>()?;
    let rhp: Vec<Complex64> = samples.into_iter().filter(|s| s.re > 0.0).collect();
    let oracle_gap = compensator_oracle_gap(&an.pencil, &delta, &compensator, &rhp)?;
    let points: Vec<Complex64> = an.zeros.iter().map(|z| z.s).collect();
    let coprime_margin = coprime_spot_check(&compensator, &points)?;
    Ok(Synthesis { f1, delta, compensator, sweep, eigen_axis, bezout, oracle_gap, coprime_margin })
}
