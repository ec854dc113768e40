use num_complex::Complex64;

use super::{ConjugateTag, DataMode, UnstableZero};
use crate::{linalg, CMat, Error, RMat, Result};

#[derive(Clone, Debug)]
pub struct InterpolationNode {
    pub z: Complex64,
    pub w: CMat,
    pub multiplicity: usize,
}

/// Disc automorphism and value congruence that move the base node to
/// `z = 0` with value `I/2`.
#[derive(Clone, Debug)]
pub struct NormalizationRecord {
    /// Real position of the base node before normalization.
    pub a: f64,
    /// `T T' = He(W_base)`
    pub t: RMat,
    /// Skew part of `W_base`.
    pub s: RMat,
    /// Index of the base node in the un-normalized data; `None` when an
    /// artificial node `z = 0, W = I/2` was prepended.
    pub base_index: Option<usize>,
}

impl NormalizationRecord {
    fn identity(ell: usize) -> Self {
        NormalizationRecord {
            a: 0.0,
            t: RMat::identity(ell, ell).scale(std::f64::consts::FRAC_1_SQRT_2),
            s: RMat::zeros(ell, ell),
            base_index: None,
        }
    }

    /// `b_a(z) = (z - a) / (1 - a z)`
    pub fn map_point(&self, z: Complex64) -> Complex64 {
        (z - self.a) / (1.0 - self.a * z)
    }

    pub fn unmap_point(&self, zeta: Complex64) -> Complex64 {
        (zeta + self.a) / (1.0 + self.a * zeta)
    }

    /// `W~ = T^{-1} (W - S) T^{-T} / 2`
    pub fn normalize_value(&self, w: &CMat) -> Result<CMat> {
        let tinv =
            self.t.clone().try_inverse().ok_or_else(|| Error::Numerical("normalization factor is singular".into()))?;
        let tinv = linalg::to_complex(&tinv);
        let s = linalg::to_complex(&self.s);
        Ok((&tinv * (w - s) * tinv.transpose()).scale(0.5))
    }

    /// `W = 2 T W~ T' + S`
    pub fn denormalize_value(&self, wt: &CMat) -> CMat {
        let t = linalg::to_complex(&self.t);
        (&t * wt * t.transpose()).scale(2.0) + linalg::to_complex(&self.s)
    }
}

#[derive(Clone, Debug)]
pub struct DiscData {
    pub ell: usize,
    pub nodes: Vec<InterpolationNode>,
    pub mode: DataMode,
    /// Present once normalized; the base node is then `nodes[0]`.
    pub normalization: Option<NormalizationRecord>,
}

impl DiscData {
    /// Nodes other than the normalized base (`n` in the degree bound `ell * n`).
    pub fn non_base(&self) -> &[InterpolationNode] {
        if self.normalization.is_some() {
            &self.nodes[1..]
        } else {
            &self.nodes
        }
    }

    /// Every non-real node has a partner at `conj(z)` carrying `conj(W)`.
    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        self.nodes.iter().all(|n| {
            if n.z.im == 0.0 {
                return linalg::max_imag(&n.w) <= tol * (1.0 + n.w.norm());
            }
            self.nodes.iter().any(|m| {
                (m.z - n.z.conj()).norm() <= tol && (m.w.conjugate() - &n.w).norm() <= tol * (1.0 + n.w.norm())
            })
        })
    }
}

fn check_caratheodory(index: usize, w: &CMat) -> Result<()> {
    let min_eig = linalg::min_eig_hermitian(w);
    if min_eig > 0.0 {
        Ok(())
    } else {
        Err(Error::NotCaratheodoryData { index, min_eig })
    }
}

/// Maps right-half-plane zeros to disc nodes `z = (1 - s)/(1 + s)` carrying
/// the given values (`M_i` in direct mode, `M_i^{1/2}` in sqrt mode).
pub fn to_disc(zeros: &[UnstableZero], values: &[CMat], mode: DataMode) -> Result<DiscData> {
    if zeros.len() != values.len() {
        return Err(Error::ShapeError(format!("{} zeros but {} values", zeros.len(), values.len())));
    }
    let ell = values.first().map(|v| v.nrows()).unwrap_or(0);
    let mut nodes = Vec::with_capacity(zeros.len());
    for (k, (zero, w)) in zeros.iter().zip(values).enumerate() {
        if w.nrows() != ell || w.ncols() != ell {
            return Err(Error::ShapeError(format!("value {k} is not {ell}x{ell}")));
        }
        check_caratheodory(k, w)?;
        let one = Complex64::new(1.0, 0.0);
        let mut z = (one - zero.s) / (one + zero.s);
        let mut w = w.clone();
        if zero.tag == ConjugateTag::Real {
            z.im = 0.0;
            w = w.map(|x| Complex64::new(x.re, 0.0));
        }
        nodes.push(InterpolationNode { z, w, multiplicity: 1 });
    }
    Ok(DiscData { ell, nodes, mode, normalization: None })
}

/// Moves the base node to `z = 0` with value `I/2`.
///
/// `base_index = None` selects the real node of smallest modulus.
pub fn normalize_data(dd: &DiscData, base_index: Option<usize>) -> Result<DiscData> {
    let base = match base_index {
        Some(i) if i < dd.nodes.len() => i,
        Some(i) => return Err(Error::ShapeError(format!("base index {i} out of range"))),
        None => dd
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.z.im == 0.0)
            .min_by(|a, b| a.1.z.norm().total_cmp(&b.1.z.norm()))
            .map(|(i, _)| i)
            .ok_or(Error::NoRealBase)?,
    };
    let bn = &dd.nodes[base];
    if bn.z.im != 0.0 || bn.z.norm() >= 1.0 || linalg::max_imag(&bn.w) > 1e-12 * (1.0 + bn.w.norm()) {
        return Err(Error::ShapeError("normalization base must be a real node with a real value".into()));
    }
    let wb = linalg::real_part(&bn.w);
    let he = (&wb + wb.transpose()).scale(0.5);
    let s = (&wb - wb.transpose()).scale(0.5);
    let t = he
        .clone()
        .cholesky()
        .ok_or(Error::NotCaratheodoryData { index: base, min_eig: linalg::sym_eigenvalues(&he)[0] })?
        .unpack();
    let rec = NormalizationRecord { a: bn.z.re, t, s, base_index: Some(base) };
    let ell = dd.ell;
    let mut nodes = vec![InterpolationNode {
        z: Complex64::new(0.0, 0.0),
        w: CMat::identity(ell, ell).scale(0.5),
        multiplicity: 1,
    }];
    for (k, n) in dd.nodes.iter().enumerate() {
        if k == base {
            continue;
        }
        let w = rec.normalize_value(&n.w)?;
        check_caratheodory(k, &w)?;
        nodes.push(InterpolationNode { z: rec.map_point(n.z), w, multiplicity: n.multiplicity });
    }
    Ok(DiscData { ell, nodes, mode: dd.mode, normalization: Some(rec) })
}

/// [`normalize_data`] on the best real node, or, when no real node exists,
/// prepends the artificial node `z = 0, W = I/2`.
pub fn normalize_or_augment(dd: &DiscData, ell: usize) -> Result<DiscData> {
    match normalize_data(dd, None) {
        Err(Error::NoRealBase) => {
            let mut nodes = vec![InterpolationNode {
                z: Complex64::new(0.0, 0.0),
                w: CMat::identity(ell, ell).scale(0.5),
                multiplicity: 1,
            }];
            nodes.extend(dd.nodes.iter().cloned());
            Ok(DiscData { ell, nodes, mode: dd.mode, normalization: Some(NormalizationRecord::identity(ell)) })
        }
        other => other,
    }
}

/// Inverse of [`normalize_data`]: restores the original node positions and values.
pub fn denormalize_data(dd: &DiscData) -> Result<DiscData> {
    let rec = dd.normalization.as_ref().ok_or_else(|| Error::ShapeError("data is not normalized".into()))?;
    let mut restored: Vec<InterpolationNode> = dd.nodes[1..]
        .iter()
        .map(|n| InterpolationNode {
            z: rec.unmap_point(n.z),
            w: rec.denormalize_value(&n.w),
            multiplicity: n.multiplicity,
        })
        .collect();
    if let Some(b) = rec.base_index {
        let w = rec.denormalize_value(&dd.nodes[0].w);
        restored.insert(b, InterpolationNode { z: Complex64::new(rec.a, 0.0), w, multiplicity: 1 });
    }
    Ok(DiscData { ell: dd.ell, nodes: restored, mode: dd.mode, normalization: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(z: f64, w: f64) -> InterpolationNode {
        InterpolationNode {
            z: Complex64::new(z, 0.0),
            w: CMat::from_element(1, 1, Complex64::new(w, 0.0)),
            multiplicity: 1,
        }
    }

    #[test]
    fn scalar_normalization() {
        let dd = DiscData { ell: 1, nodes: vec![scalar(0.5, 2.0)], mode: DataMode::Direct, normalization: None };
        let nd = normalize_data(&dd, Some(0)).unwrap();
        assert_eq!(nd.nodes[0].z, Complex64::new(0.0, 0.0));
        assert!((nd.nodes[0].w[(0, 0)].re - 0.5).abs() < 1e-15);
        let rec = nd.normalization.as_ref().unwrap();
        assert!((rec.normalize_value(&dd.nodes[0].w).unwrap()[(0, 0)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn already_normalized_is_identity() {
        let dd = DiscData {
            ell: 1,
            nodes: vec![scalar(0.0, 0.5), scalar(0.3, 1.2)],
            mode: DataMode::Direct,
            normalization: None,
        };
        let nd = normalize_data(&dd, None).unwrap();
        assert!((nd.nodes[1].z.re - 0.3).abs() < 1e-15);
        assert!((nd.nodes[1].w[(0, 0)].re - 1.2).abs() < 1e-15);
    }

    #[test]
    fn no_real_node() {
        let mut a = scalar(0.0, 1.0);
        a.z = Complex64::new(0.1, 0.2);
        let mut b = a.clone();
        b.z = a.z.conj();
        let dd = DiscData { ell: 1, nodes: vec![a, b], mode: DataMode::Direct, normalization: None };
        assert!(matches!(normalize_data(&dd, None), Err(Error::NoRealBase)));
        let aug = normalize_or_augment(&dd, 1).unwrap();
        assert_eq!(aug.nodes.len(), 3);
        assert_eq!(aug.non_base().len(), 2);
    }

    #[test]
    fn rejects_non_positive_value() {
        let z = UnstableZero { s: Complex64::new(1.0, 0.0), tag: ConjugateTag::Real };
        let w = CMat::from_element(1, 1, Complex64::new(-1.0, 0.0));
        assert!(matches!(to_disc(&[z], &[w], DataMode::Direct), Err(Error::NotCaratheodoryData { .. })));
    }
}
