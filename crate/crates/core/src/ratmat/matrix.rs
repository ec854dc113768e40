use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::polymat::poly_minor;
use super::rational::RationalFunction;
use crate::{CMat, Error, RMat, Result};

/// Dense matrix of real rational functions, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RationalFunction>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<RationalFunction>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeError(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RationalFunction) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| RationalFunction::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { RationalFunction::one() } else { RationalFunction::zero() })
    }

    pub fn from_real(m: &RMat) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| RationalFunction::constant(m[(i, j)]))
    }

    /// `[[a, b], [c, d]]` block matrix.
    pub fn block2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::ShapeError("block sizes do not conform".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        Ok(Self::from_fn(rows, cols, |i, j| {
            let (blk, ii) = if i < a.rows { ((a, b), i) } else { ((c, d), i - a.rows) };
            if j < a.cols {
                blk.0.get(ii, j).clone()
            } else {
                blk.1.get(ii, j - a.cols).clone()
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFunction) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    /// Sub-block of rows `r0..r0+nr`, columns `c0..c0+nc`.
    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise evaluation; fails if `s` is a pole of any entry.
    pub fn eval(&self, s: Complex64) -> Result<CMat> {
        let mut out = CMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.get(i, j).eval(s)?;
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeError(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j))))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j))))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).scale(k))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(RationalFunction::zero(), |acc, k| acc.add(&self.get(i, k).mul(other.get(k, j))))
        }))
    }

    /// Multiplies every entry by the same rational function.
    pub fn mul_scalar(&self, r: &RationalFunction) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(r))
    }

    /// Left-multiplication by a constant real matrix.
    pub fn premul_real(&self, m: &RMat) -> Result<Self> {
        Self::from_real(m).mul(self)
    }

    pub fn postmul_real(&self, m: &RMat) -> Result<Self> {
        self.mul(&Self::from_real(m))
    }

    /// Writes each row as `P_i / L_i` with `L_i` a product of the distinct
    /// denominators appearing in that row.
    fn row_common_denominators(&self) -> (Vec<Vec<Polynomial>>, Vec<Vec<Polynomial>>) {
        let mut row_factors = Vec::with_capacity(self.rows);
        let mut nums = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut distinct: Vec<Polynomial> = Vec::new();
            let mut owner = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                let d = self.get(i, j).den();
                if d.degree() == 0 {
                    owner.push(None);
                    continue;
                }
                match distinct.iter().position(|e| e.approx_eq(d, 1e-10)) {
                    Some(k) => owner.push(Some(k)),
                    None => {
                        distinct.push(d.clone());
                        owner.push(Some(distinct.len() - 1));
                    }
                }
            }
            let row: Vec<Polynomial> = (0..self.cols)
                .map(|j| {
                    distinct
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| Some(*k) != owner[j])
                        .fold(self.get(i, j).num().clone(), |acc, (_, f)| &acc * f)
                })
                .collect();
            row_factors.push(distinct);
            nums.push(row);
        }
        (row_factors, nums)
    }

    /// Determinant as a rational function.
    pub fn det(&self) -> Result<RationalFunction> {
        if !self.is_square() {
            return Err(Error::ShapeError(format!("det of {}x{} matrix", self.rows, self.cols)));
        }
        if self.rows == 0 {
            return Ok(RationalFunction::one());
        }
        let (factors, nums) = self.row_common_denominators();
        let idx: Vec<usize> = (0..self.rows).collect();
        let det_p = poly_minor(&nums, &idx, &idx);
        let all: Vec<Polynomial> = factors.into_iter().flatten().collect();
        Ok(RationalFunction::cancel_parts(det_p, &all))
    }

    /// Determinant and adjugate, `R · adj(R) = det(R) · I`.
    pub fn det_adj(&self) -> Result<(RationalFunction, RationalMatrix)> {
        let det = self.det()?;
        let n = self.rows;
        if n == 1 {
            return Ok((det, Self::identity(1)));
        }
        let (factors, nums) = self.row_common_denominators();
        let mut adj = Self::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                // adj(R)_{jk} = (-1)^{j+k} minor(P; drop row k, col j) / prod_{i != k} L_i
                let rows: Vec<usize> = (0..n).filter(|&r| r != k).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let mut minor = poly_minor(&nums, &rows, &cols);
                if (j + k) % 2 == 1 {
                    minor = -&minor;
                }
                let den: Vec<Polynomial> =
                    factors.iter().enumerate().filter(|(i, _)| *i != k).flat_map(|(_, f)| f.iter().cloned()).collect();
                adj.set(j, k, RationalFunction::cancel_parts(minor, &den));
            }
        }
        Ok((det, adj))
    }

    /// Inverse as `adj / det`; fails when the determinant vanishes identically.
    pub fn inverse(&self) -> Result<Self> {
        let (det, adj) = self.det_adj()?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(adj.mul_scalar(&det.inverse()?))
    }

    /// True when every entry is proper and every pole has negative real part.
    pub fn is_stable_proper(&self) -> Result<bool> {
        for e in &self.entries {
            if !e.is_proper() {
                return Ok(false);
            }
            if e.poles()?.iter().any(|p| p.re >= 0.0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Limit as `s -> infinity`.
    pub fn value_at_infinity(&self) -> RMat {
        RMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).value_at_infinity())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[f64], d: &[f64]) -> RationalFunction {
        RationalFunction::new(Polynomial::new(n.to_vec()), Polynomial::new(d.to_vec())).unwrap()
    }

    #[test]
    fn identity_evaluates_to_identity() {
        let i = RationalMatrix::identity(3);
        let v = i.eval(Complex64::new(2.0, 1.0)).unwrap();
        assert_eq!(v, CMat::identity(3, 3));
    }

    #[test]
    fn scalar_det_adj() {
        let r = RationalMatrix::new(1, 1, vec![rf(&[1.0], &[1.0, 1.0])]).unwrap();
        let (det, adj) = r.det_adj().unwrap();
        assert_eq!(&det, r.get(0, 0));
        assert_eq!(adj, RationalMatrix::identity(1));
    }

    #[test]
    fn two_by_two_cofactor_formula() {
        let a = rf(&[1.0], &[1.0, 1.0]);
        let b = rf(&[2.0, 1.0], &[3.0, 1.0]);
        let c = rf(&[-1.0], &[1.0]);
        let d = rf(&[0.0, 1.0], &[2.0, 1.0]);
        let m = RationalMatrix::new(2, 2, vec![a.clone(), b.clone(), c.clone(), d.clone()]).unwrap();
        let (det, adj) = m.det_adj().unwrap();
        let want = a.mul(&d).sub(&b.mul(&c));
        let s = Complex64::new(0.4, -1.3);
        assert!((det.eval(s).unwrap() - want.eval(s).unwrap()).norm() < 1e-13);
        let av = adj.eval(s).unwrap();
        assert!((av[(0, 0)] - d.eval(s).unwrap()).norm() < 1e-13);
        assert!((av[(0, 1)] + b.eval(s).unwrap()).norm() < 1e-13);
        assert!((av[(1, 0)] + c.eval(s).unwrap()).norm() < 1e-13);
        assert!((av[(1, 1)] - a.eval(s).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn non_square_det_is_shape_error() {
        let m = RationalMatrix::zeros(2, 3);
        assert!(matches!(m.det(), Err(Error::ShapeError(_))));
    }

    #[test]
    fn inverse_of_identity() {
        let inv = RationalMatrix::identity(2).inverse().unwrap();
        assert_eq!(inv.eval(Complex64::new(0.3, 0.0)).unwrap(), CMat::identity(2, 2));
        assert!(matches!(RationalMatrix::zeros(2, 2).inverse(), Err(Error::SingularMatrix)));
    }
}
