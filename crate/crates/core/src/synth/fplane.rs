use num_complex::Complex64;

use crate::cee::Interpolant;
use crate::ratmat::{PolyMatrix, Polynomial, RationalMatrix};
use crate::{CMat, Error, RMat, Result};

/// `X(s) / d(s)` with a polynomial matrix numerator and scalar denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFraction {
    pub num: PolyMatrix,
    pub den: Polynomial,
}

impl MatrixFraction {
    pub fn constant(m: &RMat) -> Self {
        MatrixFraction { num: PolyMatrix::from_real(m), den: Polynomial::one() }
    }

    pub fn eval(&self, s: Complex64) -> CMat {
        self.num.eval(s) / self.den.eval_complex(s)
    }

    /// Entrywise rational matrix, all entries over the common denominator.
    pub fn to_rational(&self) -> Result<RationalMatrix> {
        self.num.over(&self.den)
    }

    pub fn square(&self) -> Result<Self> {
        Ok(MatrixFraction { num: self.num.mul(&self.num)?, den: &self.den * &self.den })
    }
}

/// Left fraction `R(s)^{-1} Q(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeftFraction {
    pub r: PolyMatrix,
    pub q: PolyMatrix,
}

/// `F1` both over a scalar denominator and as a left fraction of degree `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneInterpolant {
    pub fraction: MatrixFraction,
    pub left: LeftFraction,
}

impl PlaneInterpolant {
    pub fn eval(&self, s: Complex64) -> CMat {
        self.fraction.eval(s)
    }
}

/// `F1(s) = F((1 - s)/(1 + s))`.
///
/// With the normalizing automorphism folded in, `zeta = p(s)/q(s)` where
/// `p = (1 - a) - (1 + a) s` and `q = (1 - a) + (1 + a) s`. Clearing `q^n`
/// gives polynomial matrices `A^(s), B^(s)` and
/// `F1 = (T adj(A^) B^ T' + S det A^) / det A^`, and with `R = A^ T^{-1}`,
/// `Q = B^ T' + R S` also `F1 = R^{-1} Q`.
pub fn f_plane(itp: &Interpolant) -> Result<PlaneInterpolant> {
    let ell = itp.ell;
    let (a, t, skew) = match &itp.normalization {
        Some(rec) => (rec.a, rec.t.clone(), rec.s.clone()),
        None => (0.0, RMat::identity(ell, ell).scale(std::f64::consts::FRAC_1_SQRT_2), RMat::zeros(ell, ell)),
    };
    let Some(sol) = &itp.solution else {
        let value = &t * t.transpose() + skew;
        return Ok(PlaneInterpolant {
            fraction: MatrixFraction::constant(&value),
            left: LeftFraction { r: PolyMatrix::identity(ell), q: PolyMatrix::from_real(&value) },
        });
    };
    let n = sol.structure.n;
    let p = Polynomial::linear(1.0 - a, -(1.0 + a));
    let q = Polynomial::linear(1.0 - a, 1.0 + a);
    // p^k q^(n-k) for k = 0..=n
    let basis: Vec<Polynomial> = (0..=n).map(|k| &p.pow(k) * &q.pow(n - k)).collect();
    let hat = |x: &RMat| {
        PolyMatrix::from_fn(ell, ell, |i, j| {
            let mut e = if i == j { basis[0].clone() } else { Polynomial::zero() };
            for k in 0..n {
                e = &e + &basis[k + 1].scale(x[(i * n + k, j)]);
            }
            e
        })
    };
    let ahat = hat(&sol.a);
    let bhat = hat(&sol.b);
    let den = ahat.det()?;
    let num = ahat
        .adj()?
        .mul(&bhat)?
        .premul_real(&t)?
        .postmul_real(&t.transpose())?
        .add(&PolyMatrix::from_real(&skew).mul_poly(&den))?;
    let t_inv = t.clone().try_inverse().ok_or_else(|| Error::Numerical("normalization factor is singular".into()))?;
    let r = ahat.postmul_real(&t_inv)?;
    let q = bhat.postmul_real(&t.transpose())?.add(&r.postmul_real(&skew)?)?;
    Ok(PlaneInterpolant { fraction: MatrixFraction { num, den }, left: LeftFraction { r, q } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cee::solve_interpolant;
    use crate::stabdata::{normalize_data, DataMode, DiscData, InterpolationNode};

    fn node(z: f64, w: f64) -> InterpolationNode {
        InterpolationNode { z: Complex64::new(z, 0.0), w: CMat::from_element(1, 1, w.into()), multiplicity: 1 }
    }

    #[test]
    fn trivial_interpolant_is_half_identity() {
        let itp = Interpolant { ell: 2, solution: None, normalization: None };
        let f1 = f_plane(&itp).unwrap().fraction;
        assert_eq!(f1.den.degree(), 0);
        let v = f1.eval(Complex64::new(0.3, 2.0));
        assert!((v - CMat::identity(2, 2).scale(0.5)).norm() < 1e-15);
    }

    #[test]
    fn scalar_pullback() {
        let dd = DiscData {
            ell: 1,
            nodes: vec![node(0.0, 0.5), node(0.5, 1.0)],
            mode: DataMode::Direct,
            normalization: None,
        };
        let dd = normalize_data(&dd, Some(0)).unwrap();
        let f1 = f_plane(&solve_interpolant(&dd, None).unwrap()).unwrap();
        for x in [0.0, 1.0 / 3.0, 1.0, 4.0] {
            let s = Complex64::new(x, 0.5);
            let want = (5.0 + s) / (2.0 * (1.0 + 5.0 * s));
            assert!((f1.eval(s)[(0, 0)] - want).norm() < 1e-12);
            let left = f1.left.q.eval(s)[(0, 0)] / f1.left.r.eval(s)[(0, 0)];
            assert!((left - want).norm() < 1e-12);
        }
        assert!((f1.eval(Complex64::new(1.0 / 3.0, 0.0))[(0, 0)] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn square_matches_pointwise_product() {
        let f = MatrixFraction {
            num: PolyMatrix::from_fn(2, 2, |i, j| Polynomial::linear(i as f64, 1.0 + j as f64)),
            den: Polynomial::linear(2.0, 1.0),
        };
        let s = Complex64::new(0.4, -1.1);
        let v = f.eval(s);
        assert!((f.square().unwrap().eval(s) - &v * &v).norm() < 1e-13);
    }
}
