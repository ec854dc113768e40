use num_complex::Complex64;

use super::CanonicalStructure;
use crate::stabdata::InterpolationNode;
use crate::{linalg, CMat, Error, RMat, Result};

/// Affine map `S -> u + U[S]` encoding the interpolation conditions.
///
/// `U` acts on column-major flattened `n*ell x ell` matrices.
#[derive(Clone, Debug)]
pub struct DataOperator {
    pub u: RMat,
    pub big_u: RMat,
    /// Largest imaginary part discarded when realifying.
    pub imag_residue: f64,
}

impl DataOperator {
    pub fn zero(dim: usize, ell: usize) -> Self {
        DataOperator { u: RMat::zeros(dim, ell), big_u: RMat::zeros(dim * ell, dim * ell), imag_residue: 0.0 }
    }

    /// `U[S]`
    pub fn apply(&self, s: &RMat) -> RMat {
        let v = &self.big_u * RMat::from_column_slice(s.len(), 1, s.as_slice());
        RMat::from_column_slice(s.nrows(), s.ncols(), v.as_slice())
    }

    /// `u + U[S]`
    pub fn affine(&self, s: &RMat) -> RMat {
        &self.u + self.apply(s)
    }

    /// `(tau u, tau U)`, used when node data are unavailable for deformation.
    pub fn scaled(&self, tau: f64) -> Self {
        DataOperator { u: self.u.scale(tau), big_u: self.big_u.scale(tau), imag_residue: self.imag_residue }
    }
}

/// Data operator for normalized nodes (the base node at the origin excluded).
///
/// With `w_k = 1/z_k`, `C_k = (2W_k - I)(2W_k + I)^{-1}` and `V` the stacked
/// `Pi(w_k)`, `u = V^{-1} [D(w_k) C_k]` and `U[S] = V^{-1} [Pi(w_k) S C_k]`.
pub fn build_data_operator(nodes: &[InterpolationNode], cs: &CanonicalStructure) -> Result<DataOperator> {
    build_data_operator_at(nodes, cs, 1.0)
}

/// [`build_data_operator`] on the deformed values `I/2 + tau (W_k - I/2)`.
pub fn build_data_operator_at(nodes: &[InterpolationNode], cs: &CanonicalStructure, tau: f64) -> Result<DataOperator> {
    let (ell, n, dim) = (cs.ell, cs.n, cs.dim());
    if nodes.len() != n {
        return Err(Error::ShapeError(format!("{} non-base nodes for n = {n}", nodes.len())));
    }
    let eye = CMat::identity(ell, ell);
    let half = eye.scale(0.5);
    let mut v = CMat::zeros(dim, dim);
    let mut cks = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for (k, node) in nodes.iter().enumerate() {
        if node.z.norm() == 0.0 || node.z.norm() >= 1.0 {
            return Err(Error::DegenerateNodeSet);
        }
        let w = node.z.inv();
        let wt = &half + (&node.w - &half) * Complex64::new(tau, 0.0);
        let plus = wt.scale(2.0) + &eye;
        let minus = wt.scale(2.0) - &eye;
        let plus_inv = plus.try_inverse().ok_or(Error::InternalPositivityError)?;
        cks.push(minus * plus_inv);
        v.rows_mut(k * ell, ell).copy_from(&cs.pi(w));
        ws.push(w);
    }
    let sv = linalg::singular_values(&v);
    if sv[0] <= 1e-13 * sv[sv.len() - 1] {
        return Err(Error::DegenerateNodeSet);
    }
    let lu = v.lu();
    let solve = |rhs: CMat| lu.solve(&rhs).ok_or(Error::DegenerateNodeSet);

    let mut rhs = CMat::zeros(dim, ell);
    for k in 0..n {
        rhs.rows_mut(k * ell, ell).copy_from(&(cs.d(ws[k]) * &cks[k]));
    }
    let u_c = solve(rhs)?;
    let mut imag = linalg::max_imag(&u_c);
    let u = linalg::real_part(&u_c);

    let m = dim * ell;
    let mut big_u = RMat::zeros(m, m);
    let pis: Vec<CMat> = ws.iter().map(|&w| cs.pi(w)).collect();
    for col in 0..m {
        let mut e = CMat::zeros(dim, ell);
        e[col] = Complex64::new(1.0, 0.0);
        let mut rhs = CMat::zeros(dim, ell);
        for k in 0..n {
            rhs.rows_mut(k * ell, ell).copy_from(&(&pis[k] * &e * &cks[k]));
        }
        let img = solve(rhs)?;
        imag = imag.max(linalg::max_imag(&img));
        for (r, x) in img.iter().enumerate() {
            big_u[(r, col)] = x.re;
        }
    }
    Ok(DataOperator { u, big_u, imag_residue: imag })
}
