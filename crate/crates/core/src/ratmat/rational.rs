use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use crate::{Error, Result};

/// Two roots closer than this (Newton-distance estimate) are cancelled.
pub const CANCEL_TOL: f64 = 1e-6;

/// Relative spread under which computed roots of one factor are merged into a
/// single multiple root.
const CLUSTER_TOL: f64 = 1e-3;

/// A cluster wider than this (relative) is treated as distinct roots when
/// only part of it cancels.
const SPREAD_TOL: f64 = 1e-4;

/// `|den(s)|` below this fraction of its magnitude scale is treated as a pole.
const POLE_TOL: f64 = 1e-14;

/// Real rational function `num / den` with a monic denominator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Normalizes the denominator to monic and cancels approximate common roots.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        let rf = Self::new_uncancelled(num, den)?;
        Ok(rf.cancelled_against(&[]))
    }

    /// Normalizes without attempting cancellation.
    pub fn new_uncancelled(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (den, lead) = den.monic();
        Ok(RationalFunction { num: num.scale(1.0 / lead), den })
    }

    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        RationalFunction { num: Polynomial::constant(c), den: Polynomial::one() }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() <= self.den.degree()
    }

    /// Limit as `s -> infinity` (infinite for improper functions).
    pub fn value_at_infinity(&self) -> f64 {
        if self.num.is_zero() || self.num.degree() < self.den.degree() {
            0.0
        } else if self.num.degree() == self.den.degree() {
            self.num.leading()
        } else {
            f64::INFINITY * self.num.leading().signum()
        }
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let d = self.den.eval_complex(s);
        if d.norm() <= POLE_TOL * self.den.magnitude_at(s) {
            return Err(Error::PoleEvaluation(s));
        }
        Ok(self.num.eval_complex(s) / d)
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        if self.den.degree() == 0 {
            return Ok(Vec::new());
        }
        self.den.roots()
    }

    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        if self.num.is_zero() || self.num.degree() == 0 {
            return Ok(Vec::new());
        }
        self.num.roots()
    }

    pub fn scale(&self, k: f64) -> Self {
        if k == 0.0 {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.approx_eq(&other.den, 1e-13) {
            let num = &self.num + &other.num;
            return Self::cancel_parts(num, std::slice::from_ref(&self.den));
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::cancel_parts(num, &[self.den.clone(), other.den.clone()])
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let num = &self.num * &other.num;
        Self::cancel_parts(num, &[self.den.clone(), other.den.clone()])
    }

    /// Reciprocal; fails for the zero function.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let rf = Self::new_uncancelled(self.den.clone(), self.num.clone())?;
        Ok(rf.cancelled_against(&[]))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `num / prod(factors)` with approximate common roots removed.
    ///
    /// Each denominator factor is root-found separately, so factors that are
    /// known individually (row denominators, plant denominators) cancel
    /// accurately even when their product has repeated roots.
    pub fn cancel_parts(num: Polynomial, factors: &[Polynomial]) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = cancel_common(num, factors);
        let (den, lead) = den.monic();
        RationalFunction { num: num.scale(1.0 / lead), den }
    }

    fn cancelled_against(self, extra: &[Polynomial]) -> Self {
        let mut factors = vec![self.den.clone()];
        factors.extend_from_slice(extra);
        Self::cancel_parts(self.num, &factors)
    }

    /// Removes the factor `(s - r)` (or its real quadratic for complex `r`)
    /// from the numerator, returning the relative residual `|num(r)| / scale`.
    pub fn deflate_numerator(&self, r: Complex64) -> Result<(Self, f64)> {
        let residual = self.num.eval_complex(r).norm() / self.num.magnitude_at(r).max(f64::MIN_POSITIVE);
        let factor = root_factor(r);
        let (q, _) = self.num.div_rem(&factor)?;
        Ok((RationalFunction { num: q, den: self.den.clone() }, residual))
    }

    /// Divides by `(s - r)` (or the real quadratic for complex `r`).
    pub fn divide_by_root_factor(&self, r: Complex64) -> Self {
        let den = &self.den * &root_factor(r);
        RationalFunction { num: self.num.clone(), den }
    }
}

/// `s - r` for real `r`, `s^2 - 2 Re(r) s + |r|^2` otherwise.
pub(crate) fn root_factor(r: Complex64) -> Polynomial {
    if r.im == 0.0 {
        Polynomial::linear(-r.re, 1.0)
    } else {
        Polynomial::new(vec![r.norm_sqr(), -2.0 * r.re, 1.0])
    }
}

/// A group of computed roots treated as one multiple root.
struct Cluster {
    /// Mean of the members, on the real axis for a real cluster.
    centre: Complex64,
    members: Vec<Complex64>,
}

impl Cluster {
    fn multiplicity(&self) -> usize {
        self.members.len()
    }

    fn is_tight(&self) -> bool {
        let spread = self.members.iter().map(|r| (r - self.centre).norm()).fold(0.0, f64::max);
        spread <= SPREAD_TOL * (1.0 + self.centre.norm())
    }

    /// Real factor vanishing at every member (and its conjugate for a
    /// complex cluster); of degree `k` or `2k`.
    fn member_product(&self) -> Polynomial {
        if self.centre.im != 0.0 {
            return self.members.iter().fold(Polynomial::one(), |acc, &r| &acc * &root_factor(r));
        }
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in &self.members {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        Polynomial::new(c.iter().map(|z| z.re).collect())
    }
}

/// Groups roots lying within `CLUSTER_TOL * (1 + |r|)` of each other; keeps
/// clusters in the closed upper half plane only (lower-half clusters are
/// implied by conjugation).
fn clusters(roots: &[Complex64]) -> Vec<Cluster> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![roots[i]];
        for j in i + 1..roots.len() {
            if !used[j] && (roots[j] - roots[i]).norm() <= CLUSTER_TOL * (1.0 + roots[i].norm()) {
                used[j] = true;
                members.push(roots[j]);
            }
        }
        let centre = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push(Cluster { centre, members });
    }
    // a cluster straddling the real axis is a real multiple root
    let mut merged = Vec::new();
    for mut c in out {
        if c.centre.im.abs() <= CLUSTER_TOL * (1.0 + c.centre.norm()) {
            c.centre = Complex64::new(c.centre.re, 0.0);
            merged.push(c);
        } else if c.centre.im > 0.0 {
            merged.push(c);
        }
    }
    merged
}

fn shares_root(num: &Polynomial, r: Complex64, dnum: &Polynomial) -> bool {
    if num.is_zero() {
        return false;
    }
    if num.degree() == 0 {
        return false;
    }
    let v = num.eval_complex(r).norm();
    if v <= 1e-13 * num.magnitude_at(r) {
        return true;
    }
    let d = dnum.eval_complex(r).norm();
    d > 0.0 && v / d <= CANCEL_TOL
}

/// Newton-distance estimate from `r` to the nearest root of `num`.
fn root_distance(num: &Polynomial, r: Complex64) -> f64 {
    let v = num.eval_complex(r).norm();
    if v <= 1e-13 * num.magnitude_at(r) {
        return 0.0;
    }
    let d = num.derivative().eval_complex(r).norm();
    if d > 0.0 {
        v / d
    } else {
        f64::INFINITY
    }
}

/// Divisor for the part of `cl` shared with `num`, or `None`.
fn shared_divisor(num: &Polynomial, cl: &Cluster) -> Option<Polynomial> {
    let factor = root_factor(cl.centre);
    let mut trial = num.clone();
    let mut shared = 0;
    while shared < cl.multiplicity() && trial.degree() >= factor.degree() {
        if !shares_root(&trial, cl.centre, &trial.derivative()) {
            break;
        }
        trial = trial.div_exact(&factor).expect("nonzero factor");
        shared += 1;
    }
    if shared == 0 {
        return None;
    }
    // close but distinct members divide out exactly only as themselves
    if shared == cl.multiplicity() {
        return Some(cl.member_product());
    }
    if cl.is_tight() {
        return Some((0..shared).fold(Polynomial::one(), |acc, _| &acc * &factor));
    }
    let mut d = Polynomial::one();
    let mut rest = num.clone();
    for &r in cl.members.iter().filter(|r| cl.centre.im != 0.0 || r.im >= 0.0) {
        let r = if cl.centre.im == 0.0 && r.im.abs() <= CLUSTER_TOL * (1.0 + r.norm()) {
            Complex64::new(r.re, 0.0)
        } else {
            r
        };
        let single = root_factor(r);
        if rest.degree() >= single.degree() && shares_root(&rest, r, &rest.derivative()) {
            rest = rest.div_exact(&single).expect("nonzero factor");
            d = &d * &single;
        }
    }
    (d.degree() > 0).then_some(d)
}

/// Cancels approximate common roots between `num` and the product of
/// `factors`; returns `(num', den')` with `den'` the product of what remains.
///
/// Candidate roots of all factors are tried closest-first, so an exact match
/// in one factor wins over a near match in another.
pub(crate) fn cancel_common(mut num: Polynomial, factors: &[Polynomial]) -> (Polynomial, Polynomial) {
    let mut factors: Vec<Polynomial> = factors.to_vec();
    let mut candidates: Vec<(usize, Cluster)> = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        if f.degree() >= 1 {
            if let Ok(roots) = f.roots() {
                candidates.extend(clusters(&roots).into_iter().map(|c| (i, c)));
            }
        }
    }
    while num.degree() >= 1 && !candidates.is_empty() {
        let mut order: Vec<(f64, usize)> =
            candidates.iter().enumerate().map(|(k, (_, c))| (root_distance(&num, c.centre), k)).collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let Some((k, divisor)) =
            order.iter().find_map(|&(_, k)| shared_divisor(&num, &candidates[k].1).map(|d| (k, d)))
        else {
            break;
        };
        let (i, _) = candidates.swap_remove(k);
        num = num.div_exact(&divisor).expect("nonzero factor");
        factors[i] = factors[i].div_exact(&divisor).expect("nonzero factor");
    }
    let den = factors.iter().fold(Polynomial::one(), |acc, f| &acc * f);
    (num, den)
}
