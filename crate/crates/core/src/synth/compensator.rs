use num_complex::Complex64;

use super::{CompensatorFactors, DeltaPair, PlaneInterpolant};
use crate::ratmat::{root_factor, PolyMatrix, Polynomial, RationalMatrix};
use crate::stabdata::{unstable_zeros, DataMode, PencilM, Tolerances, UnstableZero};
use crate::{linalg, CMat, Error, Result};

/// Tolerance for the vanishing of `[Delta0 Delta1] adj M` at the unstable zeros.
pub const MISMATCH_TOL: f64 = 1e-6;

/// `Delta0 = I`, `Delta1 = F1` (direct) or `F1^2` (sqrt), with the unit check
/// on `det Delta1 = (det Q / det R)^k`.
pub fn delta_pair(f1: &PlaneInterpolant, mode: DataMode) -> Result<DeltaPair> {
    let m = f1.left.r.rows();
    let frac = match mode {
        DataMode::Direct => f1.fraction.clone(),
        DataMode::Sqrt => f1.fraction.square()?,
    };
    let det_r = f1.left.r.det()?;
    let det_q = f1.left.q.det()?;
    if det_q.is_zero() || det_r.is_zero() {
        return Err(Error::NotAUnit("det Delta1 vanishes identically".into()));
    }
    if det_q.degree() != det_r.degree() {
        return Err(Error::NotAUnit("det Delta1 is zero or infinite at infinity".into()));
    }
    for (what, p) in [("vanishes", &det_q), ("has a pole", &det_r)] {
        if p.degree() > 0 {
            if let Some(r) = p.roots()?.into_iter().find(|r| r.re >= -1e-9) {
                return Err(Error::NotAUnit(format!("det Delta1 {what} at {r}")));
            }
        }
    }
    Ok(DeltaPair {
        delta0: RationalMatrix::identity(m),
        delta1: frac.to_rational()?,
        delta1_frac: frac,
        f1_left: f1.left.clone(),
        mode,
    })
}

/// `[Nc Dc] = [Delta0 Delta1] adj(M) / det(M)` with the unstable roots of
/// `det M` cancelled from every entry.
pub fn compensator(pm: &PencilM, dp: &DeltaPair) -> Result<CompensatorFactors> {
    let zeros = unstable_zeros(pm, &Tolerances::default())?;
    compensator_with_zeros(pm, dp, &zeros)
}

/// [`compensator`] for an already computed zero set.
///
/// The poles of `[Nc Dc] = [I Delta1] M^{-1}` are those of `Delta1` and the
/// stable zeros of `det M`; with that denominator `q_c` fixed, the numerator
/// `q_c [Nc Dc]` is a polynomial matrix of degree at most `deg q_c`. Its
/// coefficients are recovered by sampling on a circle and a discrete Fourier
/// transform; the coefficients above `deg q_c` measure how well the unstable
/// zeros cancel.
pub fn compensator_with_zeros(pm: &PencilM, dp: &DeltaPair, zeros: &[UnstableZero]) -> Result<CompensatorFactors> {
    let m = pm.size;
    let frac = &dp.delta1_frac;
    let row = |s: Complex64| -> CMat {
        let mut r = CMat::zeros(m, 2 * m);
        r.view_mut((0, 0), (m, m)).copy_from(&CMat::identity(m, m));
        r.view_mut((0, m), (m, m)).copy_from(&frac.eval(s));
        r
    };

    let mut worst: f64 = 0.0;
    for z in zeros {
        let lhs = row(z.s);
        let adj = pm.adj.eval(z.s)?;
        let scale = lhs.norm() * adj.norm();
        worst = worst.max((lhs * adj).norm() / scale.max(f64::MIN_POSITIVE));
    }
    if worst > MISMATCH_TOL {
        return Err(Error::InterpolationMismatch { residual: worst });
    }

    let stable = stable_part(pm.det.num())?;
    let den = &frac.den * &stable;
    let deg = den.degree();
    // w on the unit circle, s = (1 + w)/(1 - w) on the imaginary axis, and
    // Y(w) = (1 - w)^deg q_c(s) K(s) a polynomial of degree deg in w.
    let count = 4 * (deg + 1);
    let angles: Vec<f64> = (0..count).map(|j| std::f64::consts::PI * (2 * j + 1) as f64 / count as f64).collect();
    let one = Complex64::new(1.0, 0.0);
    let mut samples = Vec::with_capacity(count);
    for &th in &angles {
        let w = Complex64::from_polar(1.0, th);
        let s = (one + w) / (one - w);
        let mt = pm.m.eval(s)?.transpose();
        let k = linalg::solve(&mt, &row(s).transpose())?.transpose();
        samples.push(k * (den.eval_complex(s) * (one - w).powu(deg as u32)));
    }
    let scale =
        samples.iter().map(|x| x.iter().map(|v| v.norm()).fold(0.0, f64::max)).fold(f64::MIN_POSITIVE, f64::max);
    let mut coeffs = vec![vec![0.0; deg + 1]; m * 2 * m];
    let mut alias: f64 = 0.0;
    for k in 0..count {
        let mut c = CMat::zeros(m, 2 * m);
        for (x, &th) in samples.iter().zip(&angles) {
            c += x * Complex64::from_polar(1.0, -(k as f64) * th);
        }
        c /= Complex64::from(count as f64);
        for (idx, v) in c.transpose().iter().enumerate() {
            if let Some(slot) = coeffs[idx].get_mut(k) {
                alias = alias.max(v.im.abs() / scale);
                *slot = v.re;
            } else {
                alias = alias.max(v.norm() / scale);
            }
        }
    }
    worst = worst.max(alias);
    if alias > MISMATCH_TOL {
        return Err(Error::InterpolationMismatch { residual: alias });
    }
    // w^k (1 - w)^(-deg) = 2^(-deg) (s - 1)^k (s + 1)^(deg - k)
    let basis: Vec<Polynomial> = (0..=deg)
        .map(|k| {
            (&Polynomial::linear(-1.0, 1.0).pow(k) * &Polynomial::linear(1.0, 1.0).pow(deg - k))
                .scale(0.5f64.powi(deg as i32))
        })
        .collect();
    let coeffs: Vec<Polynomial> = coeffs
        .iter()
        .map(|c| c.iter().zip(&basis).fold(Polynomial::zero(), |acc, (&y, b)| &acc + &b.scale(y)))
        .collect();
    let numer = PolyMatrix::from_fn(m, 2 * m, |i, j| coeffs[i * 2 * m + j].clone());
    let nc = numer.submatrix(0, 0, m, m).over(&den)?;
    let dc = numer.submatrix(0, m, m, m).over(&den)?;
    Ok(CompensatorFactors { nc, dc, cancellation_residual: worst })
}

/// Smallest `sigma_min / sigma_max` of `[Nc(s) Dc(s)]` over `points`; values
/// near zero indicate a common unstable zero of the two factors. `None` for
/// an empty point set.
pub fn coprime_spot_check(cf: &CompensatorFactors, points: &[Complex64]) -> Result<Option<f64>> {
    if points.is_empty() {
        return Ok(None);
    }
    let mut worst = f64::INFINITY;
    for &s in points {
        let nc = cf.nc.eval(s)?;
        let m = nc.nrows();
        let mut stacked = CMat::zeros(m, 2 * m);
        stacked.view_mut((0, 0), (m, m)).copy_from(&nc);
        stacked.view_mut((0, m), (m, m)).copy_from(&cf.dc.eval(s)?);
        let sv = linalg::singular_values(&stacked);
        let top = sv.last().copied().unwrap_or(0.0);
        worst = worst.min(if top > 0.0 { sv[0] / top } else { 0.0 });
    }
    Ok(Some(worst))
}

/// Product of the factors of `p` belonging to roots in the open left half plane.
fn stable_part(p: &Polynomial) -> Result<Polynomial> {
    if p.degree() == 0 {
        return Ok(Polynomial::one());
    }
    Ok(p.roots()?
        .into_iter()
        .filter(|r| r.re < 0.0 && r.im >= 0.0)
        .fold(Polynomial::one(), |acc, r| &acc * &root_factor(r)))
}

/// `K(s) = Dc(s)^{-1} Nc(s)`
pub fn compensator_gain(cf: &CompensatorFactors, s: Complex64) -> Result<CMat> {
    linalg::solve(&cf.dc.eval(s)?, &cf.nc.eval(s)?)
}

/// Pointwise `K(s)` from the blocks of `M(s)^{-1}`:
/// `K = (Delta0 m12 + Delta1 m22)^{-1} (Delta0 m11 + Delta1 m21)`.
pub fn compensator_gain_blocks(pm: &PencilM, dp: &DeltaPair, s: Complex64) -> Result<CMat> {
    let m = pm.size;
    let minv = linalg::inverse(&pm.m.eval(s)?)?;
    let d0 = dp.delta0.eval(s)?;
    let d1 = dp.delta1.eval(s)?;
    let blk = |r: usize, c: usize| minv.view((r * m, c * m), (m, m)).into_owned();
    let nc = &d0 * blk(0, 0) + &d1 * blk(1, 0);
    let dc = &d0 * blk(0, 1) + &d1 * blk(1, 1);
    linalg::solve(&dc, &nc)
}

/// Largest relative disagreement between [`compensator_gain`] and
/// [`compensator_gain_blocks`] over `samples`.
pub fn compensator_oracle_gap(
    pm: &PencilM,
    dp: &DeltaPair,
    cf: &CompensatorFactors,
    samples: &[Complex64],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &s in samples {
        let k1 = compensator_gain(cf, s)?;
        let k2 = compensator_gain_blocks(pm, dp, s)?;
        worst = worst.max((&k1 - &k2).norm() / k2.norm().max(1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabdata::{build_pencil, PlantPair};
    use crate::synth::{LeftFraction, MatrixFraction};
    use crate::RMat;

    fn diagonal_pencil() -> PencilM {
        let i = RationalMatrix::identity(2);
        let z = RationalMatrix::from_real(&RMat::zeros(2, 2));
        build_pencil(&PlantPair::new(i.clone(), z.clone(), z, i).unwrap()).unwrap()
    }

    #[test]
    fn identity_pencil_returns_delta_pair() {
        let pm = diagonal_pencil();
        let half = RMat::identity(2, 2).scale(0.5);
        let dp = delta_pair(&constant(&half), DataMode::Direct).unwrap();
        let cf = compensator_with_zeros(&pm, &dp, &[]).unwrap();
        let s = Complex64::new(0.7, -0.2);
        assert!((cf.nc.eval(s).unwrap() - CMat::identity(2, 2)).norm() < 1e-13);
        assert!((cf.dc.eval(s).unwrap() - CMat::identity(2, 2).scale(0.5)).norm() < 1e-13);
        assert!(compensator_oracle_gap(&pm, &dp, &cf, &[s]).unwrap() < 1e-13);
    }

    fn constant(v: &RMat) -> PlaneInterpolant {
        PlaneInterpolant {
            fraction: MatrixFraction::constant(v),
            left: LeftFraction { r: PolyMatrix::identity(v.nrows()), q: PolyMatrix::from_real(v) },
        }
    }

    fn scalar(q: Polynomial, r: Polynomial) -> PlaneInterpolant {
        PlaneInterpolant {
            fraction: MatrixFraction { num: PolyMatrix::scalar(&q, 1), den: r.clone() },
            left: LeftFraction { r: PolyMatrix::scalar(&r, 1), q: PolyMatrix::scalar(&q, 1) },
        }
    }

    #[test]
    fn unstable_delta_pole_is_not_a_unit() {
        let f = scalar(Polynomial::linear(2.0, 1.0), Polynomial::linear(-1.0, 1.0));
        assert!(matches!(delta_pair(&f, DataMode::Direct), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn unstable_delta_zero_is_not_a_unit() {
        let f = scalar(Polynomial::linear(-2.0, 1.0), Polynomial::linear(1.0, 1.0));
        assert!(matches!(delta_pair(&f, DataMode::Sqrt), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn vanishing_at_infinity_is_not_a_unit() {
        let f = scalar(Polynomial::one(), Polynomial::linear(1.0, 1.0));
        assert!(matches!(delta_pair(&f, DataMode::Sqrt), Err(Error::NotAUnit(_))));
    }
}
