use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CompensatorFactors, DeltaPair, LeftFraction};
use crate::par::Execution;
use crate::ratmat::{PolyMatrix, Polynomial, RationalFunction, RationalMatrix};
use crate::stabdata::DataMode;
use crate::stabdata::PlantPair;
use crate::{linalg, CMat, Error, Result};

/// Poles with `max Re` below `-MARGIN` are stable; within `MARGIN` of the
/// axis they are flagged marginal.
pub const MARGIN: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct LambdaFamily {
    pub n: RationalMatrix,
    pub d: RationalMatrix,
    pub delta: RationalMatrix,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::RangeError(lambda))
    }
}

/// `(1 - l) a + l b` over the product of the two common denominators.
fn convex(a: &RationalMatrix, b: &RationalMatrix, lambda: f64) -> Result<(PolyMatrix, Vec<Polynomial>)> {
    let (xa, qa) = PolyMatrix::from_rational(a);
    let (xb, qb) = PolyMatrix::from_rational(b);
    let num = xa.mul_poly(&qb).scale(1.0 - lambda).add(&xb.mul_poly(&qa).scale(lambda))?;
    Ok((num, vec![qa, qb]))
}

fn to_rational(num: &PolyMatrix, factors: &[Polynomial]) -> Result<RationalMatrix> {
    num.over(&factors.iter().fold(Polynomial::one(), |acc, f| &acc * f))
}

/// `(N_l, D_l, Delta_l) = (1 - l) (N0, D0, Delta0) + l (N1, D1, Delta1)`
pub fn lambda_family(pp: &PlantPair, dp: &DeltaPair, lambda: f64) -> Result<LambdaFamily> {
    check_lambda(lambda)?;
    let (n, nf) = convex(&pp.n0, &pp.n1, lambda)?;
    let (d, df) = convex(&pp.d0, &pp.d1, lambda)?;
    let frac = &dp.delta1_frac;
    let x = PolyMatrix::scalar(&frac.den, frac.num.rows()).scale(1.0 - lambda).add(&frac.num.scale(lambda))?;
    Ok(LambdaFamily { n: to_rational(&n, &nf)?, d: to_rational(&d, &df)?, delta: x.over(&frac.den)? })
}

/// Roots of `det(X)` after cancelling against `factors`.
fn numerator_roots(det: Polynomial, factors: &[Polynomial], lambda: f64) -> Result<Vec<Complex64>> {
    if det.is_zero() {
        return Err(Error::DegenerateFamily(lambda));
    }
    let det = RationalFunction::cancel_parts(det, factors);
    if det.num().degree() == 0 {
        return Ok(Vec::new());
    }
    det.num().roots()
}

/// Zeros of `det Delta_l`.
///
/// With `F1 = R^{-1} Q` these are the roots of `det((1 - l) R + l Q)` in
/// direct mode; in square-root mode `(1 - l) I + l F1^2` factors through
/// `sqrt(l) Q -/+ i sqrt(1 - l) R`, whose determinant product is that of the
/// real block matrix `[[sqrt(l) Q, -sqrt(1 - l) R], [sqrt(1 - l) R, sqrt(l) Q]]`.
pub fn closed_loop_poles(dp: &DeltaPair, lambda: f64) -> Result<Vec<Complex64>> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Ok(Vec::new());
    }
    let LeftFraction { r, q } = &dp.f1_left;
    let det_r = r.det()?;
    match dp.mode {
        DataMode::Direct => {
            let x = r.scale(1.0 - lambda).add(&q.scale(lambda))?;
            numerator_roots(x.det()?, &[det_r], lambda)
        }
        DataMode::Sqrt => {
            let (a, b) = (lambda.sqrt(), (1.0 - lambda).sqrt());
            let top = q.scale(a).hstack(&r.scale(-b))?;
            let bottom = r.scale(b).hstack(&q.scale(a))?;
            numerator_roots(top.vstack(&bottom)?.det()?, &[det_r.clone(), det_r], lambda)
        }
    }
}

/// Roots of the numerator of `det D_l`.
pub fn open_loop_poles(pp: &PlantPair, lambda: f64) -> Result<Vec<Complex64>> {
    check_lambda(lambda)?;
    let (x, f) = convex(&pp.d0, &pp.d1, lambda)?;
    let all: Vec<Polynomial> = (0..x.rows()).flat_map(|_| f.iter().cloned()).collect();
    numerator_roots(x.det()?, &all, lambda)
}

/// `z = (1 + s)/(1 - s)`, mapping the open left half plane into the unit disc.
pub fn map_pole(s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (one + s) / (one - s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaPoles {
    pub lambda: f64,
    pub poles: Vec<Complex64>,
    pub mapped: Vec<Complex64>,
    /// `None` when there are no poles.
    pub max_re: Option<f64>,
    pub stable: bool,
    pub marginal: bool,
}

impl LambdaPoles {
    pub fn new(lambda: f64, poles: Vec<Complex64>) -> Self {
        let mapped = poles.iter().map(|&s| map_pole(s)).collect();
        let max_re = poles.iter().map(|s| s.re).fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
        let stable = max_re.is_none_or(|r| r < -MARGIN);
        let marginal = max_re.is_some_and(|r| r.abs() <= MARGIN);
        LambdaPoles { lambda, poles, mapped, max_re, stable, marginal }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub grid: Vec<f64>,
    pub closed_loop: Vec<LambdaPoles>,
    pub open_loop: Vec<LambdaPoles>,
    pub stable: bool,
}

/// `start:step:end` inclusive, with the endpoint snapped when within rounding.
pub fn lambda_grid(start: f64, step: f64, end: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || start > end || start < 0.0 || end > 1.0 {
        return Err(Error::Config(format!("invalid lambda grid {start}:{step}:{end}")));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    let mut g: Vec<f64> = (0..=count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect();
    if let Some(last) = g.last_mut() {
        if (*last - end).abs() < 1e-9 {
            *last = end;
        }
    }
    Ok(g)
}

/// Closed- and open-loop poles over `grid`, one task per `lambda`.
pub fn sweep(pp: &PlantPair, dp: &DeltaPair, grid: &[f64], exec: Execution) -> Result<SweepReport> {
    for &l in grid {
        check_lambda(l)?;
    }
    let closed: Result<Vec<_>> =
        exec.map(grid, |&l| closed_loop_poles(dp, l).map(|p| LambdaPoles::new(l, p))).into_iter().collect();
    let open: Result<Vec<_>> =
        exec.map(grid, |&l| open_loop_poles(pp, l).map(|p| LambdaPoles::new(l, p))).into_iter().collect();
    let closed_loop = closed?;
    let stable = closed_loop.iter().all(|e| e.stable);
    Ok(SweepReport { grid: grid.to_vec(), closed_loop, open_loop: open?, stable })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenAxisReport {
    /// Smallest distance of an eigenvalue of `Delta0^{-1} Delta1` to the
    /// closed nonpositive real axis.
    pub min_distance: f64,
    pub worst_point: Complex64,
    pub omega: f64,
    pub contour_points: usize,
    pub interior_points: usize,
}

pub const INTERIOR_GRID: usize = 40;

/// Samples the eigenvalues of `Delta0^{-1} Delta1` on the boundary of the
/// half disc of radius `omega` (`density` points per piece) and on a
/// `40 x 40` interior grid.
pub fn eigen_axis_check(dp: &DeltaPair, omega: f64, density: usize) -> Result<EigenAxisReport> {
    let density = density.max(2);
    let mut pts = Vec::new();
    for k in 0..density {
        let y = -omega + 2.0 * omega * k as f64 / (density - 1) as f64;
        pts.push(Complex64::new(0.0, y));
    }
    for k in 0..density {
        let th = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * k as f64 / (density - 1) as f64;
        pts.push(Complex64::from_polar(omega, th));
    }
    let contour_points = pts.len();
    for i in 1..=INTERIOR_GRID {
        for j in 0..INTERIOR_GRID {
            let x = omega * i as f64 / INTERIOR_GRID as f64;
            let y = -omega + 2.0 * omega * j as f64 / (INTERIOR_GRID - 1) as f64;
            let s = Complex64::new(x, y);
            if s.norm() <= omega {
                pts.push(s);
            }
        }
    }
    let interior_points = pts.len() - contour_points;
    let mut min_distance = f64::INFINITY;
    let mut worst_point = Complex64::new(0.0, 0.0);
    for &s in &pts {
        let (Ok(d0), Ok(d1)) = (dp.delta0.eval(s), dp.delta1.eval(s)) else { continue };
        let Ok(ratio) = linalg::solve(&d0, &d1) else { continue };
        for mu in linalg::eigenvalues(&ratio)? {
            let d = linalg::dist_to_nonpositive_axis(mu);
            if d < min_distance {
                min_distance = d;
                worst_point = s;
            }
        }
    }
    Ok(EigenAxisReport { min_distance, worst_point, omega, contour_points, interior_points })
}

/// Default Bézout sample points: right-half-plane, imaginary-axis and
/// left-half-plane points away from typical poles.
pub fn default_samples() -> Vec<Complex64> {
    [(0.5, 0.0), (2.0, 1.0), (0.1, -3.0), (7.0, 0.5), (0.0, 2.0), (0.0, -0.7), (1.5, 4.0), (-0.05, 0.3)]
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect()
}

/// `max_j ||Nc N_l + Dc D_l - Delta_l||_F` over the sample points.
pub fn verify_bezout(
    pp: &PlantPair,
    cf: &CompensatorFactors,
    dp: &DeltaPair,
    lambda: f64,
    samples: &[Complex64],
) -> Result<f64> {
    check_lambda(lambda)?;
    let mix = |a: CMat, b: CMat| a * Complex64::from(1.0 - lambda) + b * Complex64::from(lambda);
    let mut worst: f64 = 0.0;
    for &s in samples {
        let n = mix(pp.n0.eval(s)?, pp.n1.eval(s)?);
        let d = mix(pp.d0.eval(s)?, pp.d1.eval(s)?);
        let delta = mix(dp.delta0.eval(s)?, dp.delta1_frac.eval(s));
        let r = cf.nc.eval(s)? * n + cf.dc.eval(s)? * d - delta;
        worst = worst.max(r.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RMat;

    fn constant_pair(d1: RMat) -> DeltaPair {
        let m = d1.nrows();
        DeltaPair {
            delta0: RationalMatrix::identity(m),
            delta1: RationalMatrix::from_real(&d1),
            delta1_frac: super::super::MatrixFraction::constant(&d1),
            f1_left: LeftFraction { r: PolyMatrix::identity(m), q: PolyMatrix::from_real(&d1) },
            mode: DataMode::Direct,
        }
    }

    #[test]
    fn identity_pair_has_no_poles() {
        let dp = constant_pair(RMat::identity(2, 2));
        assert!(closed_loop_poles(&dp, 0.3).unwrap().is_empty());
        assert!(LambdaPoles::new(0.3, vec![]).stable);
    }

    #[test]
    fn lambda_out_of_range() {
        let dp = constant_pair(RMat::identity(2, 2));
        assert!(matches!(closed_loop_poles(&dp, 1.5), Err(Error::RangeError(_))));
    }

    #[test]
    fn grid_has_eleven_points() {
        let g = lambda_grid(0.0, 0.1, 1.0).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(g[10], 1.0);
    }

    #[test]
    fn quarter_identity_distance() {
        let dp = constant_pair(RMat::identity(2, 2).scale(0.25));
        let r = eigen_axis_check(&dp, 5.0, 50).unwrap();
        assert!((r.min_distance - 0.25).abs() < 1e-14);
    }

    #[test]
    fn negative_eigenvalue_flagged() {
        let dp = constant_pair(RMat::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0])));
        let r = eigen_axis_check(&dp, 5.0, 50).unwrap();
        assert_eq!(r.min_distance, 0.0);
    }

    #[test]
    fn mapped_pole_inside_disc() {
        assert!(map_pole(Complex64::new(-0.5, 2.0)).norm() < 1.0);
        assert!(map_pole(Complex64::new(0.5, 2.0)).norm() > 1.0);
    }
}
