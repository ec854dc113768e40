use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{linalg, Error, Result};

/// A leading coefficient of a sum or difference is dropped when it is below
/// this fraction of the operand coefficients it came from.
pub const DROP_TOL: f64 = 1e-12;

/// Real polynomial stored as ascending coefficients.
///
/// The zero polynomial is the empty coefficient vector; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for Polynomial {
    fn from(c: Vec<f64>) -> Self {
        Polynomial::new(c)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Polynomial {
    /// Drops exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// `a0 + a1 s`
    pub fn linear(a0: f64, a1: f64) -> Self {
        Polynomial::new(vec![a0, a1])
    }

    /// Monic real polynomial with the given roots; complex roots must come in
    /// conjugate pairs (imaginary residue of the product is discarded).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * r;
            }
            c = next;
        }
        Polynomial::new(c.iter().map(|z| z.re).collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, k: f64) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Returns `(p / lead, lead)`; the zero polynomial maps to `(0, 0)`.
    pub fn monic(&self) -> (Self, f64) {
        let lead = self.leading();
        if lead == 0.0 {
            return (Polynomial::zero(), 0.0);
        }
        (self.scale(1.0 / lead), lead)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the natural scale for a residual `|p(z)|`.
    pub fn magnitude_at(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    /// Long division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dn = d.coeffs.len() - 1;
        let mut q = vec![0.0; r.len() - dn];
        for k in (0..q.len()).rev() {
            let c = r[k + dn] / dl;
            q[k] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= c * dc;
            }
        }
        r.truncate(dn);
        Ok((Polynomial::new(q), Polynomial::new(r)))
    }

    /// Quotient by a factor known to divide `self` up to rounding.
    ///
    /// Divides from the top when the factor's roots are small and from the
    /// bottom when they are large, so the rounding residue lands in the
    /// coefficient that is least sensitive.
    pub fn div_exact(&self, d: &Polynomial) -> Result<Polynomial> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (n, m) = (self.coeffs.len(), d.coeffs.len());
        if n < m {
            return Ok(Polynomial::zero());
        }
        let d0 = d.coeffs[0];
        if d0.abs() <= d.leading().abs() {
            return Ok(self.div_rem(d)?.0);
        }
        let mut q = vec![0.0; n - m + 1];
        for k in 0..q.len() {
            let mut acc = self.coeffs[k];
            for j in 1..m.min(k + 1) {
                acc -= d.coeffs[j] * q[k - j];
            }
            q[k] = acc / d0;
        }
        Ok(Polynomial::new(q))
    }

    /// Roots of the polynomial (see [`poly_roots`]).
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        poly_roots(self)
    }

    pub(crate) fn approx_eq(&self, other: &Polynomial, rel: f64) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| (a - b).abs() <= rel * scale)
    }
}

fn combine(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Polynomial {
    let n = a.len().max(b.len());
    let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    let mut out: Vec<f64> = (0..n).map(|k| f(at(a, k), at(b, k))).collect();
    // leading terms that cancelled to rounding level
    while let Some(&last) = out.last() {
        let k = out.len() - 1;
        if last.abs() <= DROP_TOL * (at(a, k).abs() + at(b, k).abs()) {
            out.pop();
        } else {
            break;
        }
    }
    Polynomial { coeffs: out }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        combine(&self.coeffs, &rhs.coeffs, |x, y| x + y)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        combine(&self.coeffs, &rhs.coeffs, |x, y| x - y)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Diagonal similarity balancing (radix 2) of a dense real matrix, in place.
fn balance(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c > g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

fn newton_polish(p: &Polynomial, dp: &Polynomial, r: Complex64) -> Complex64 {
    let v = p.eval_complex(r);
    let d = dp.eval_complex(r);
    if d.norm() == 0.0 {
        return r;
    }
    let cand = r - v / d;
    if cand.is_finite() && p.eval_complex(cand).norm() < v.norm() {
        cand
    } else {
        r
    }
}

/// Roots of a real polynomial of degree at least one.
///
/// Companion-matrix eigenvalues (after variable scaling and balancing),
/// followed by one Newton step per root. Complex roots are returned as exact
/// conjugate pairs; output is sorted by real then imaginary part.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::DegreeError);
    }
    let c = p.coeffs();
    let zeros_at_origin = c.iter().take_while(|&&x| x == 0.0).count();
    let reduced = Polynomial::new(c[zeros_at_origin..].to_vec());
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let n = reduced.degree();
    if n >= 1 {
        let rc = reduced.coeffs();
        // s = rho * t balances the magnitudes of the extreme coefficients
        let rho = {
            let v = (rc[0].abs() / rc[n].abs()).powf(1.0 / n as f64);
            if v.is_finite() && v > 0.0 {
                v
            } else {
                1.0
            }
        };
        let scaled: Vec<f64> =
            rc.iter().enumerate().map(|(k, &x)| x * rho.powi(k as i32) / (rc[n] * rho.powi(n as i32))).collect();
        let raw: Vec<Complex64> = match n {
            1 => vec![Complex64::new(-scaled[0], 0.0)],
            2 => quadratic_roots(scaled[1], scaled[0]),
            _ => {
                let mut comp = DMatrix::<f64>::zeros(n, n);
                for k in 0..n {
                    comp[(0, k)] = -scaled[n - 1 - k];
                }
                for k in 1..n {
                    comp[(k, k - 1)] = 1.0;
                }
                balance(&mut comp);
                linalg::real_eigenvalues(&comp)?
            }
        };
        let dp = reduced.derivative();
        let mut upper: Vec<Complex64> = Vec::new();
        let mut lower: Vec<Complex64> = Vec::new();
        for t in raw {
            let r = t * rho;
            if r.im == 0.0 {
                let polished = newton_polish(&reduced, &dp, r);
                roots.push(Complex64::new(polished.re, 0.0));
            } else if r.im > 0.0 {
                upper.push(r);
            } else {
                lower.push(r);
            }
        }
        // pair each upper root with the closest conjugate of a lower root
        for u in upper {
            let best = lower
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1.conj() - u).norm().total_cmp(&(b.1.conj() - u).norm()))
                .map(|(i, _)| i);
            let mid = match best {
                Some(i) => (u + lower.swap_remove(i).conj()) * 0.5,
                None => u,
            };
            let polished = newton_polish(&reduced, &dp, mid);
            roots.push(polished);
            roots.push(polished.conj());
        }
        for l in lower {
            // unmatched lower roots (should not happen for real input)
            let polished = newton_polish(&reduced, &dp, l.conj());
            roots.push(polished);
            roots.push(polished.conj());
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Roots of `t^2 + b t + c`.
fn quadratic_roots(b: f64, c: f64) -> Vec<Complex64> {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return vec![Complex64::new(0.0, 0.0); 2];
        }
        vec![Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        vec![Complex64::new(-0.5 * b, im), Complex64::new(-0.5 * b, -im)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_cancelled_leading_terms() {
        let a = Polynomial::new(vec![1.0, 2.0, 0.1 + 0.2]);
        let b = Polynomial::new(vec![0.0, 1.0, 0.3]);
        assert_eq!((&a - &b).degree(), 1);
        assert!(Polynomial::new(vec![0.0, 0.0]).is_zero());
        // small but genuine leading coefficients survive products
        let p = Polynomial::linear(10.0, 1.0).pow(24);
        assert_eq!(p.degree(), 24);
        assert_eq!(p.leading(), 1.0);
    }

    #[test]
    fn linear_and_conjugate_roots() {
        let r = Polynomial::linear(-3.0, 1.0).roots().unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - Complex64::new(3.0, 0.0)).norm() < 1e-14);

        let r = Polynomial::new(vec![1.0, 0.0, 1.0]).roots().unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn degree_zero_is_an_error() {
        assert!(matches!(Polynomial::constant(2.0).roots(), Err(Error::DegreeError)));
        assert!(matches!(Polynomial::zero().roots(), Err(Error::DegreeError)));
    }

    #[test]
    fn roots_at_origin() {
        let p = Polynomial::new(vec![0.0, 0.0, -1.0, 1.0]);
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[0].norm() + r[1].norm(), 0.0);
        assert!((r[2].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exact_division_keeps_low_order_zeros() {
        // s^2 (s + 4.5) (s + 0.8), divided by a slightly perturbed (s + 4.5)
        let p =
            &(&Polynomial::new(vec![0.0, 0.0, 1.0]) * &Polynomial::linear(4.5, 1.0)) * &Polynomial::linear(0.8, 1.0);
        let q = p.div_exact(&Polynomial::linear(4.5 + 1e-7, 1.0)).unwrap();
        assert_eq!(q.coeffs()[..2], [0.0, 0.0]);
        assert!((q.coeffs()[2] - 0.8).abs() < 1e-6);
        let small = p.div_exact(&Polynomial::linear(0.8, 1.0)).unwrap();
        assert!(small.approx_eq(&Polynomial::new(vec![0.0, 0.0, 4.5, 1.0]), 1e-14));
    }

    #[test]
    fn division_reconstructs() {
        let a = Polynomial::new(vec![1.0, -2.0, 0.5, 3.0, 1.0]);
        let d = Polynomial::new(vec![2.0, 1.0, 1.0]);
        let (q, r) = a.div_rem(&d).unwrap();
        let back = &(&q * &d) + &r;
        assert!(back.approx_eq(&a, 1e-14));
        assert!(r.degree() < d.degree());
    }

    #[test]
    fn from_roots_pairs() {
        let p = Polynomial::from_roots(&[Complex64::new(-1.0, 2.0), Complex64::new(-1.0, -2.0)]);
        assert!(p.approx_eq(&Polynomial::new(vec![5.0, 2.0, 1.0]), 1e-15));
    }
}
