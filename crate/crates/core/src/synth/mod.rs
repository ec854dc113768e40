//! Compensator synthesis and verification over the λ-family.
//!
//! The disc interpolant is pulled back to the right half plane as `F1(s)`,
//! the Δ-factors are `Delta0 = I` and `Delta1 = F1` (or `F1^2`), and the
//! compensator follows from `[Nc Dc] M = [Delta0 Delta1]`. Stability of the
//! family `P_l = N_l D_l^{-1}` is read off the zeros of
//! `det((1 - l) Delta0 + l Delta1)`.
//!
//! `Delta1` and the compensator are carried as matrix fractions over a single
//! denominator so that no sums of rational functions with unrelated
//! denominators are formed.

mod compensator;
mod fplane;
mod sweep;

pub use compensator::{
    compensator, compensator_gain, compensator_gain_blocks, compensator_oracle_gap, compensator_with_zeros,
    coprime_spot_check, delta_pair, MISMATCH_TOL,
};
pub use fplane::{f_plane, LeftFraction, MatrixFraction, PlaneInterpolant};
pub use sweep::{
    closed_loop_poles, default_samples, eigen_axis_check, lambda_family, lambda_grid, map_pole, open_loop_poles, sweep,
    verify_bezout, EigenAxisReport, LambdaFamily, LambdaPoles, SweepReport, INTERIOR_GRID, MARGIN,
};

use crate::ratmat::RationalMatrix;
use crate::stabdata::DataMode;

/// `Delta0 = I` and `Delta1 = delta1_frac`.
#[derive(Clone, Debug)]
pub struct DeltaPair {
    pub delta0: RationalMatrix,
    pub delta1: RationalMatrix,
    pub delta1_frac: MatrixFraction,
    /// `F1 = R^{-1} Q`, from which `Delta1` is `F1` or `F1^2`.
    pub f1_left: LeftFraction,
    pub mode: DataMode,
}

#[derive(Clone, Debug)]
pub struct CompensatorFactors {
    pub nc: RationalMatrix,
    pub dc: RationalMatrix,
    /// Largest relative residual of the cancelled unstable factors.
    pub cancellation_residual: f64,
}
