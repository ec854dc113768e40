use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ConjugateTag, PlantPair, Tolerances};
use crate::ratmat::{RationalFunction, RationalMatrix};
use crate::{Error, Result};

/// `M(s) = [[N0, N1], [D0, D1]]` with its determinant and adjugate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilM {
    pub m: RationalMatrix,
    pub size: usize,
    pub det: RationalFunction,
    pub adj: RationalMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnstableZero {
    pub s: Complex64,
    pub tag: ConjugateTag,
}

/// Unit-norm kernel vector of `M(s_i)`, split into top and bottom halves.
#[derive(Clone, Debug)]
pub struct NullDirection {
    pub v1: DVector<Complex64>,
    pub v2: DVector<Complex64>,
    /// `||M(s_i) v||`
    pub residual: f64,
    /// Second-smallest singular value of `M(s_i)`.
    pub gap: f64,
}

pub fn build_pencil(pp: &PlantPair) -> Result<PencilM> {
    let m = RationalMatrix::block2x2(&pp.n0, &pp.n1, &pp.d0, &pp.d1)?;
    let (det, adj) = m.det_adj()?;
    if det.is_zero() {
        return Err(Error::DegeneratePencil);
    }
    // det(M(inf)) != 0 requires equal numerator and denominator degree
    if det.num().degree() < det.den().degree() {
        return Err(Error::ImproperPencil);
    }
    Ok(PencilM { m, size: pp.size(), det, adj })
}

/// Simple zeros of `det M` in the open right half plane.
///
/// Real zeros come first in ascending order, then conjugate pairs with the
/// positive-imaginary member leading.
pub fn unstable_zeros(pm: &PencilM, tol: &Tolerances) -> Result<Vec<UnstableZero>> {
    let num = pm.det.num();
    if num.degree() == 0 {
        return Ok(Vec::new());
    }
    let roots = num.roots()?;
    let dnum = num.derivative();
    let ddnum_scale = |r: Complex64| dnum.magnitude_at(r).max(f64::MIN_POSITIVE);
    let mut real = Vec::new();
    let mut pairs = Vec::new();
    for (i, &r) in roots.iter().enumerate() {
        if r.re.abs() <= tol.simplicity * (1.0 + r.norm()) {
            return Err(Error::BoundaryZero(r));
        }
        if r.re < 0.0 {
            continue;
        }
        let crowded = roots.iter().enumerate().any(|(j, &q)| j != i && (q - r).norm() <= tol.simplicity);
        let slope = dnum.eval_complex(r).norm() / ddnum_scale(r);
        if crowded || slope <= 1e-8 {
            return Err(Error::NonSimpleZero(r));
        }
        if r.im == 0.0 {
            real.push(r);
        } else if r.im > 0.0 {
            pairs.push(r);
        }
    }
    real.sort_by(|a, b| a.re.total_cmp(&b.re));
    pairs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<UnstableZero> = real.into_iter().map(|s| UnstableZero { s, tag: ConjugateTag::Real }).collect();
    for s in pairs {
        out.push(UnstableZero { s, tag: ConjugateTag::PairLead });
        out.push(UnstableZero { s: s.conj(), tag: ConjugateTag::PairFollow });
    }
    Ok(out)
}

/// Kernel direction of `M(s_i)` from its smallest right singular vector.
///
/// The phase is fixed so that the largest-magnitude component is real and
/// positive.
pub fn null_direction(pm: &PencilM, z: &UnstableZero, tol: &Tolerances) -> Result<NullDirection> {
    let ms = pm.m.eval(z.s)?;
    let n = ms.nrows();
    let svd = ms.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().ok_or_else(|| Error::Numerical("SVD did not return right singular vectors".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let gap = if n > 1 { svd.singular_values[order[1]] } else { f64::INFINITY };
    if gap <= tol.rank_gap {
        return Err(Error::RankAssumptionViolated { s: z.s, gap });
    }
    let mut v: DVector<Complex64> = v_t.row(order[0]).adjoint();
    let pivot = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(Complex64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    v *= phase;
    v /= Complex64::new(v.norm(), 0.0);
    let residual = (&ms * &v).norm();
    let m = pm.size;
    Ok(NullDirection { v1: v.rows(0, m).into_owned(), v2: v.rows(m, m).into_owned(), residual, gap })
}
