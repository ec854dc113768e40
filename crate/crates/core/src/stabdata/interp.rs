use nalgebra::DVector;
use num_complex::Complex64;

use super::NullDirection;
use crate::{linalg, CMat, Error, Result};

/// Completed interpolation value together with its eigenvalue feasibility.
#[derive(Clone, Debug)]
pub struct InterpValue {
    pub matrix: CMat,
    pub eigenvalues: Vec<Complex64>,
    /// No eigenvalue on the closed nonpositive real axis.
    pub feasible: bool,
}

fn on_branch_cut(mu: Complex64) -> bool {
    mu.re <= 0.0 && mu.im.abs() <= 1e-10 * mu.norm().max(1.0)
}

/// `M = -v1 v2^H / (v2^H v2) + alpha (I - v2 v2^H / (v2^H v2))`, without
/// rejecting infeasible spectra.
pub fn interp_value_unchecked(nd: &NullDirection, alpha: f64) -> Result<InterpValue> {
    let v1: &DVector<Complex64> = &nd.v1;
    let v2: &DVector<Complex64> = &nd.v2;
    let nrm2 = v2.norm_squared();
    if nrm2.sqrt() < 1e-10 {
        return Err(Error::UnassignableDirection);
    }
    let m = v2.len();
    let inv = Complex64::new(1.0 / nrm2, 0.0);
    let proj = (v2 * v2.adjoint()) * inv;
    let matrix = -(v1 * v2.adjoint()) * inv + (CMat::identity(m, m) - proj) * Complex64::new(alpha, 0.0);
    let eigenvalues = linalg::eigenvalues(&matrix)?;
    let feasible = !eigenvalues.iter().any(|&mu| on_branch_cut(mu));
    Ok(InterpValue { matrix, eigenvalues, feasible })
}

/// Interpolation value for a null direction; errors with `AlphaInfeasible`
/// when an eigenvalue lies on the closed nonpositive real axis.
pub fn interp_value(nd: &NullDirection, alpha: f64) -> Result<InterpValue> {
    let v = interp_value_unchecked(nd, alpha)?;
    if !v.feasible {
        return Err(Error::AlphaInfeasible { alpha });
    }
    Ok(v)
}

/// Principal square root via the complex Schur form.
///
/// For `X = Q T Q^H` the upper-triangular root `R` solves `R^2 = T` column by
/// column, `R_ii = sqrt(T_ii)` on the principal branch and
/// `R_ij = (T_ij - sum_{i<k<j} R_ik R_kj) / (R_ii + R_jj)`.
pub fn principal_sqrt(x: &CMat) -> Result<CMat> {
    let n = x.nrows();
    if n != x.ncols() {
        return Err(Error::ShapeError("square root of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(x.clone());
    }
    let (q, t) = linalg::complex_schur(x)?;
    for i in 0..n {
        if on_branch_cut(t[(i, i)]) {
            return Err(Error::BranchCutError(t[(i, i)]));
        }
    }
    let mut r = CMat::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = s / (r[(i, i)] + r[(j, j)]);
        }
    }
    Ok(&q * r * q.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(v1: &[f64], v2: &[f64]) -> NullDirection {
        let c = |v: &[f64]| DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)));
        NullDirection { v1: c(v1), v2: c(v2), residual: 0.0, gap: 1.0 }
    }

    #[test]
    fn projector_completion() {
        let v = interp_value(&dir(&[-2.0, 0.0], &[1.0, 0.0]), 1.0).unwrap();
        let want = CMat::from_diagonal(&DVector::from_vec(vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)]));
        assert!((v.matrix - want).norm() < 1e-15);
        let v = interp_value(&dir(&[-2.0, 0.0], &[1.0, 0.0]), 3.0).unwrap();
        assert!((v.matrix[(1, 1)].re - 3.0).abs() < 1e-15);
        assert!((v.matrix[(0, 0)].re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn vanishing_lower_half() {
        let e = interp_value(&dir(&[1.0, 0.0], &[0.0, 0.0]), 1.0);
        assert!(matches!(e, Err(Error::UnassignableDirection)));
    }

    #[test]
    fn negative_eigenvalue_is_infeasible() {
        // M v2 = -v1 with v1 = v2 forces eigenvalue -1
        let e = interp_value(&dir(&[1.0, 0.0], &[1.0, 0.0]), 1.0);
        assert!(matches!(e, Err(Error::AlphaInfeasible { .. })));
    }

    #[test]
    fn sqrt_of_diagonal_and_identity() {
        let d = CMat::from_diagonal(&DVector::from_vec(vec![Complex64::new(4.0, 0.0), Complex64::new(9.0, 0.0)]));
        let r = principal_sqrt(&d).unwrap();
        assert!((r[(0, 0)].re - 2.0).abs() < 1e-14 && (r[(1, 1)].re - 3.0).abs() < 1e-14);
        let i = CMat::identity(3, 3);
        assert!((principal_sqrt(&i).unwrap() - &i).norm() < 1e-14);
    }

    #[test]
    fn branch_cut_rejected() {
        let d = CMat::from_diagonal(&DVector::from_vec(vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]));
        assert!(matches!(principal_sqrt(&d), Err(Error::BranchCutError(_))));
    }
}
