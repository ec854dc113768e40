use num_complex::Complex64;

use super::matrix::RationalMatrix;
use super::poly::Polynomial;
use super::rational::RationalFunction;
use crate::{CMat, Error, RMat, Result};

/// Dense matrix of real polynomials, row-major.
///
/// Used for matrix fractions `X(s) / d(s)` where every entry shares one
/// denominator, which keeps sums free of root cancellation.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Polynomial::zero())
    }

    /// `p(s) I`
    pub fn scalar(p: &Polynomial, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { p.clone() } else { Polynomial::zero() })
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(&Polynomial::one(), n)
    }

    pub fn from_real(m: &RMat) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| Polynomial::constant(m[(i, j)]))
    }

    /// Writes `r` as `X / q` with `q` the product of its distinct entry denominators.
    pub fn from_rational(r: &RationalMatrix) -> (Self, Polynomial) {
        let (x, factors) = Self::from_rational_factored(r);
        (x, factors.iter().fold(Polynomial::one(), |acc, d| &acc * d))
    }

    /// As [`PolyMatrix::from_rational`], returning the distinct entry
    /// denominators whose product is the common denominator.
    pub fn from_rational_factored(r: &RationalMatrix) -> (Self, Vec<Polynomial>) {
        let mut distinct: Vec<Polynomial> = Vec::new();
        for e in r.entries() {
            if e.den().degree() > 0 && !distinct.iter().any(|d| d.approx_eq(e.den(), 1e-12)) {
                distinct.push(e.den().clone());
            }
        }
        let q = distinct.iter().fold(Polynomial::one(), |acc, d| &acc * d);
        let x = Self::from_fn(r.rows(), r.cols(), |i, j| {
            let e = r.get(i, j);
            if e.den().degree() == 0 {
                return &q * &e.num().scale(1.0 / e.den().leading());
            }
            distinct.iter().filter(|d| !d.approx_eq(e.den(), 1e-12)).fold(e.num().clone(), |acc, d| &acc * d)
        });
        (x, distinct)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn max_degree(&self) -> usize {
        self.entries.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn eval(&self, s: Complex64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval_complex(s))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeError(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j)))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).scale(k))
    }

    /// Entrywise multiplication by a scalar polynomial.
    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * p)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Polynomial::zero(), |acc, k| &acc + &(self.get(i, k) * other.get(k, j)))
        }))
    }

    pub fn premul_real(&self, m: &RMat) -> Result<Self> {
        Self::from_real(m).mul(self)
    }

    pub fn postmul_real(&self, m: &RMat) -> Result<Self> {
        self.mul(&Self::from_real(m))
    }

    /// `[self other]`
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeError("hstack row mismatch".into()));
        }
        let c = self.cols;
        Ok(Self::from_fn(self.rows, c + other.cols, |i, j| {
            if j < c {
                self.get(i, j).clone()
            } else {
                other.get(i, j - c).clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::ShapeError("vstack column mismatch".into()));
        }
        let r = self.rows;
        Ok(Self::from_fn(r + other.rows, self.cols, |i, j| {
            if i < r {
                self.get(i, j).clone()
            } else {
                other.get(i - r, j).clone()
            }
        }))
    }

    fn as_rows(&self) -> Vec<Vec<Polynomial>> {
        (0..self.rows).map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn det(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::ShapeError(format!("det of {}x{} matrix", self.rows, self.cols)));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(poly_minor(&self.as_rows(), &idx, &idx))
    }

    /// Polynomial adjugate, `X adj(X) = det(X) I`.
    pub fn adj(&self) -> Result<Self> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::ShapeError(format!("adjugate of {}x{} matrix", self.rows, self.cols)));
        }
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let a = self.as_rows();
        Ok(Self::from_fn(n, n, |j, k| {
            let rows: Vec<usize> = (0..n).filter(|&r| r != k).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let m = poly_minor(&a, &rows, &cols);
            if (j + k) % 2 == 1 {
                -&m
            } else {
                m
            }
        }))
    }

    /// `self / den` entrywise, without cancellation.
    pub fn over(&self, den: &Polynomial) -> Result<RationalMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|p| RationalFunction::new_uncancelled(p.clone(), den.clone()))
            .collect::<Result<Vec<_>>>()?;
        RationalMatrix::new(self.rows, self.cols, entries)
    }
}

/// Determinant of the polynomial sub-matrix selected by `rows` x `cols`,
/// by Laplace expansion with memoisation over column subsets.
pub(crate) fn poly_minor(a: &[Vec<Polynomial>], rows: &[usize], cols: &[usize]) -> Polynomial {
    let k = rows.len();
    debug_assert_eq!(k, cols.len());
    if k == 0 {
        return Polynomial::one();
    }
    let full = 1usize << k;
    let mut dp: Vec<Option<Polynomial>> = vec![None; full];
    dp[0] = Some(Polynomial::one());
    // masks grouped by popcount so each layer is complete before it is used
    let mut layer: Vec<usize> = vec![0];
    for &r in rows {
        let mut next: Vec<usize> = Vec::new();
        for &mask in &layer {
            let base = match dp[mask].take() {
                Some(p) if !p.is_zero() => p,
                _ => continue,
            };
            for j in 0..k {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let entry = &a[r][cols[j]];
                if entry.is_zero() {
                    continue;
                }
                let inversions = (mask >> (j + 1)).count_ones();
                let mut term = &base * entry;
                if inversions % 2 == 1 {
                    term = -&term;
                }
                let nm = mask | (1 << j);
                dp[nm] = Some(match dp[nm].take() {
                    Some(acc) => &acc + &term,
                    None => {
                        next.push(nm);
                        term
                    }
                });
            }
        }
        layer = next;
    }
    dp[full - 1].take().unwrap_or_else(Polynomial::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn adjugate_identity() {
        let x = PolyMatrix::from_fn(3, 3, |i, j| p(&[(i + 2 * j) as f64, 1.0 - (i * j) as f64, (i == j) as u8 as f64]));
        let det = x.det().unwrap();
        let prod = x.mul(&x.adj().unwrap()).unwrap();
        let want = PolyMatrix::scalar(&det, 3);
        let s = Complex64::new(0.7, -1.3);
        assert!((prod.eval(s) - want.eval(s)).norm() < 1e-10 * (1.0 + det.eval_complex(s).norm()));
    }

    #[test]
    fn common_denominator() {
        let r = RationalMatrix::from_fn(1, 3, |_, j| match j {
            0 => RationalFunction::new(p(&[1.0]), p(&[2.0, 1.0])).unwrap(),
            1 => RationalFunction::new(p(&[0.0, 1.0]), p(&[3.0, 1.0])).unwrap(),
            _ => RationalFunction::constant(4.0),
        });
        let (x, q) = PolyMatrix::from_rational(&r);
        assert_eq!(q.degree(), 2);
        let s = Complex64::new(0.4, 0.9);
        let back = x.eval(s) / q.eval_complex(s);
        assert!((back - r.eval(s).unwrap()).norm() < 1e-14);
    }
}
