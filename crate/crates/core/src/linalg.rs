//! Small dense helpers on top of nalgebra shared by the pipeline stages.

use nalgebra::{Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::{CMat, Error, RMat, Result};

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|x| x.re)
}

pub fn max_imag(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.im.abs()))
}

/// `(X + X^H) / 2`
pub fn herm_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig_hermitian(m: &CMat) -> f64 {
    let sym = herm_part(m);
    SymmetricEigen::new(sym).eigenvalues.iter().fold(f64::INFINITY, |acc, &x| acc.min(x))
}

pub fn sym_eigenvalues(m: &RMat) -> Vec<f64> {
    let sym = (m + m.transpose()).scale(0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Symmetric square root of a symmetric positive semidefinite matrix.
pub fn sqrt_psd(m: &RMat) -> RMat {
    let sym = (m + m.transpose()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let d = RMat::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).sqrt()));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Complex Schur form `(Q, T)` with `X = Q T Q^H` and `T` upper triangular.
pub fn complex_schur(m: &CMat) -> Result<(CMat, CMat)> {
    let n = m.nrows();
    Schur::try_new(m.clone(), f64::EPSILON, 2000 * n.max(1))
        .map(|s| s.unpack())
        .ok_or_else(|| Error::Numerical("complex Schur iteration did not converge".into()))
}

pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let (_, t) = complex_schur(m)?;
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

pub fn real_eigenvalues(m: &RMat) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let n = m.nrows();
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 2000 * n)
        .ok_or_else(|| Error::Numerical("real Schur iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

pub fn spectral_radius(m: &RMat) -> Result<f64> {
    Ok(real_eigenvalues(m)?.iter().fold(0.0, |acc, z| acc.max(z.norm())))
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.clone().try_inverse().ok_or_else(|| Error::Numerical("matrix is numerically singular".into()))
}

pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    a.clone().lu().solve(b).ok_or_else(|| Error::Numerical("linear system is numerically singular".into()))
}

/// Ascending singular values.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    sv
}

/// Distance from `mu` to the closed nonpositive real axis.
pub fn dist_to_nonpositive_axis(mu: Complex64) -> f64 {
    if mu.re <= 0.0 {
        mu.im.abs()
    } else {
        mu.norm()
    }
}
