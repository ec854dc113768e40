use num_complex::Complex64;

use crate::{CMat, Error, RMat, Result};

/// Observer canonical pair `(H, J)` with uniform observability indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalStructure {
    pub ell: usize,
    pub n: usize,
    /// Observability indices, all equal to `n`.
    pub indices: Vec<usize>,
    /// `ell x n*ell`, row `i` has a single 1 in column `i*n`.
    pub h: RMat,
    /// Block-diagonal `n x n` upward shifts.
    pub j: RMat,
}

pub fn build_structure(ell: usize, n: usize) -> Result<CanonicalStructure> {
    if ell == 0 || n == 0 {
        return Err(Error::ShapeError(format!("structure needs ell >= 1 and n >= 1, got ell={ell}, n={n}")));
    }
    let dim = n * ell;
    let mut h = RMat::zeros(ell, dim);
    let mut j = RMat::zeros(dim, dim);
    for i in 0..ell {
        h[(i, i * n)] = 1.0;
        for k in 0..n - 1 {
            j[(i * n + k, i * n + k + 1)] = 1.0;
        }
    }
    Ok(CanonicalStructure { ell, n, indices: vec![n; ell], h, j })
}

impl CanonicalStructure {
    /// State dimension `n * ell`.
    pub fn dim(&self) -> usize {
        self.n * self.ell
    }

    /// `Pi(w)`: row `i`, column `i*n + k` holds `w^(n-1-k)`.
    pub fn pi(&self, w: Complex64) -> CMat {
        let n = self.n;
        let mut x = CMat::zeros(self.ell, self.dim());
        for i in 0..self.ell {
            let mut p = Complex64::new(1.0, 0.0);
            for k in (0..n).rev() {
                x[(i, i * n + k)] = p;
                p *= w;
            }
        }
        x
    }

    /// `zeta^n Pi(1/zeta)`: row `i`, column `i*n + k` holds `zeta^(k+1)`.
    pub fn pi_bar(&self, zeta: Complex64) -> CMat {
        let n = self.n;
        let mut x = CMat::zeros(self.ell, self.dim());
        for i in 0..self.ell {
            let mut p = zeta;
            for k in 0..n {
                x[(i, i * n + k)] = p;
                p *= zeta;
            }
        }
        x
    }

    /// `D(w) = w^n I`
    pub fn d(&self, w: Complex64) -> CMat {
        CMat::identity(self.ell, self.ell) * w.powi(self.n as i32)
    }
}
