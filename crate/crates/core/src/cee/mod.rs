//! Matrix Carathéodory interpolation via the covariance extension equation.
//!
//! Normalized data (base node `0 -> I/2`, `n` further nodes) is encoded in an
//! observer canonical pair `(H, J)` and an affine data operator `(u, U)`. The
//! equation
//!
//! `P = Gamma (P - P H'H P) Gamma' + G G'`, `G = u + U[Sigma + Gamma P H']`,
//! `Gamma = J - Sigma H`
//!
//! is solved by continuation in the data, and `(P, Sigma)` yields the matrix
//! fraction `F(z) = A_bar(z)^{-1} B_bar(z) / 2`.

mod dataop;
mod interpolant;
mod solver;
mod structure;

pub use dataop::{build_data_operator, build_data_operator_at, DataOperator};
pub use interpolant::{
    check_solution, eval_f, solve_interpolant, Interpolant, SolutionCheck, CHECK_GRID, CHECK_RADIUS,
};
pub use solver::{cee_residual, solve_cee, CeeProblem, CeeSolution, HomotopyStats};
pub use structure::{build_structure, CanonicalStructure};
