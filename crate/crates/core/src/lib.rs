//! Simultaneous stabilization of a one-parameter family of square MIMO plants.
//!
//! The pipeline reduces the two endpoint plants to a pencil `M(s)`, turns the
//! unstable zeros of `det M` into matrix Carathéodory interpolation data on the
//! unit disc, solves that interpolation problem with the covariance extension
//! equation and assembles a compensator from the resulting interpolant.
//!
//! * [`ratmat`] real-coefficient polynomial / rational matrix algebra
//! * [`stabdata`] pencil, unstable zeros and disc interpolation data
//! * [`cee`] observer-form structure, data operator, CEE homotopy solver
//! * [`synth`] Δ-factors, compensator and the λ-sweep
//! * [`cli`] configuration, presets and report emission

pub mod cee;
pub mod cli;
mod error;
pub mod linalg;
pub mod par;
pub mod ratmat;
pub mod stabdata;
pub mod synth;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Dense complex matrix used for pointwise evaluations.
pub type CMat = nalgebra::DMatrix<Complex64>;
/// Dense real matrix.
pub type RMat = nalgebra::DMatrix<f64>;
