//! Floating-coefficient polynomial, rational-function and rational-matrix
//! algebra.
//!
//! Denominators are kept monic. After every product, sum and inverse,
//! approximately shared roots of numerator and denominator are cancelled
//! (roots within `1e-6`). Leading coefficients of sums that cancel to
//! rounding level are dropped. [`PolyMatrix`] carries matrix fractions over a
//! single denominator when repeated cancellation would cost accuracy.

mod matrix;
mod poly;
mod polymat;
mod rational;

pub use matrix::RationalMatrix;
pub use poly::{poly_roots, Polynomial, DROP_TOL};
pub use polymat::PolyMatrix;
pub(crate) use rational::root_factor;
pub use rational::{RationalFunction, CANCEL_TOL};

use num_complex::Complex64;

use crate::{CMat, Result};

/// Entrywise evaluation of a rational matrix.
pub fn rm_eval(r: &RationalMatrix, s: Complex64) -> Result<CMat> {
    r.eval(s)
}

/// Determinant and adjugate of a square rational matrix.
pub fn rm_det_adj(r: &RationalMatrix) -> Result<(RationalFunction, RationalMatrix)> {
    r.det_adj()
}
