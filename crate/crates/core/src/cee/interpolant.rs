use num_complex::Complex64;

use super::{build_structure, solve_cee, CeeProblem, CeeSolution};
use crate::stabdata::{DiscData, NormalizationRecord};
use crate::{linalg, CMat, Error, RMat, Result};

/// Carathéodory interpolant `F` on the unit disc.
///
/// In normalized coordinates `F~(zeta) = A_bar(zeta)^{-1} B_bar(zeta) / 2` with
/// `A_bar(zeta) = I + zeta^n Pi(1/zeta) A`; `solution = None` means `F~ = I/2`.
#[derive(Clone, Debug)]
pub struct Interpolant {
    pub ell: usize,
    pub solution: Option<CeeSolution>,
    pub normalization: Option<NormalizationRecord>,
}

impl Interpolant {
    /// Normalized interpolant, no denormalization applied.
    pub fn eval_normalized(&self, zeta: Complex64) -> Result<CMat> {
        if zeta.norm() >= 1.0 {
            return Err(Error::OutsideDomain(zeta));
        }
        let ell = self.ell;
        let Some(sol) = &self.solution else {
            return Ok(CMat::identity(ell, ell).scale(0.5));
        };
        let cs = &sol.structure;
        let pb = cs.pi_bar(zeta);
        let eye = CMat::identity(ell, ell);
        let abar = &eye + &pb * linalg::to_complex(&sol.a);
        let bbar = &eye + &pb * linalg::to_complex(&sol.b);
        Ok(linalg::solve(&abar, &bbar)?.scale(0.5))
    }

    /// `F(z)`, mapped back through the stored normalization.
    pub fn eval(&self, z: Complex64) -> Result<CMat> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDomain(z));
        }
        match &self.normalization {
            Some(rec) => Ok(rec.denormalize_value(&self.eval_normalized(rec.map_point(z))?)),
            None => self.eval_normalized(z),
        }
    }

    /// Degree bound `ell * n` of the realization.
    pub fn order(&self) -> usize {
        self.solution.as_ref().map_or(0, |s| s.structure.dim())
    }
}

pub fn eval_f(itp: &Interpolant, z: Complex64) -> Result<CMat> {
    itp.eval(z)
}

/// Solves the interpolation problem for normalized data.
///
/// `sigma` defaults to zero; with no node besides the base the interpolant is
/// the constant `I/2` (normalized).
pub fn solve_interpolant(dd: &DiscData, sigma: Option<&RMat>) -> Result<Interpolant> {
    let rec =
        dd.normalization.clone().ok_or_else(|| Error::ShapeError("interpolation data must be normalized".into()))?;
    let ell = dd.ell;
    let nodes = dd.non_base();
    if nodes.is_empty() {
        return Ok(Interpolant { ell, solution: None, normalization: Some(rec) });
    }
    let cs = build_structure(ell, nodes.len())?;
    let sigma = sigma.cloned().unwrap_or_else(|| RMat::zeros(cs.dim(), ell));
    let prob = CeeProblem::from_nodes(cs, nodes, sigma)?;
    let sol = solve_cee(&prob)?;
    Ok(Interpolant { ell, solution: Some(sol), normalization: Some(rec) })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolutionCheck {
    /// `max_k ||F(z_k) - W_k||_F`
    pub interp_residual: f64,
    /// Smallest eigenvalue of `F + F^*` over 512 points on `|z| = 0.99`.
    pub min_herm_eig: f64,
    /// Spectral radius of `J - A H`.
    pub pole_radius: f64,
    /// Rank of the controllability matrix of `(J - A H, G)`.
    pub controllability_rank: usize,
}

pub const CHECK_GRID: usize = 512;
pub const CHECK_RADIUS: f64 = 0.99;

/// Interpolation residual, positive-realness on a circle and pole radius.
///
/// Node values are compared in whatever coordinates `dd` is expressed in.
pub fn check_solution(itp: &Interpolant, dd: &DiscData) -> Result<SolutionCheck> {
    let mut interp_residual: f64 = 0.0;
    for node in &dd.nodes {
        let f = if dd.normalization.is_some() { itp.eval_normalized(node.z)? } else { itp.eval(node.z)? };
        interp_residual = interp_residual.max((f - &node.w).norm());
    }
    let mut min_herm_eig = f64::INFINITY;
    for k in 0..CHECK_GRID {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / CHECK_GRID as f64;
        let f = itp.eval(Complex64::from_polar(CHECK_RADIUS, theta))?;
        min_herm_eig = min_herm_eig.min(2.0 * linalg::min_eig_hermitian(&f));
    }
    let (pole_radius, controllability_rank) = match &itp.solution {
        None => (0.0, 0),
        Some(sol) => {
            let fa = sol.closed_state();
            (linalg::spectral_radius(&fa)?, controllability_rank(&fa, &sol.g))
        }
    };
    Ok(SolutionCheck { interp_residual, min_herm_eig, pole_radius, controllability_rank })
}

fn controllability_rank(a: &RMat, b: &RMat) -> usize {
    let n = a.nrows();
    let mut blocks = RMat::zeros(n, n * b.ncols());
    let mut cur = b.clone();
    for k in 0..n {
        blocks.columns_mut(k * b.ncols(), b.ncols()).copy_from(&cur);
        cur = a * cur;
    }
    let sv = blocks.svd(false, false).singular_values;
    let top = sv.iter().fold(0.0f64, |m, &x| m.max(x));
    sv.iter().filter(|&&x| x > 1e-9 * top.max(1.0)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabdata::{normalize_data, DataMode, InterpolationNode};

    fn scalar_data() -> DiscData {
        let nodes = vec![
            InterpolationNode { z: Complex64::new(0.0, 0.0), w: CMat::from_element(1, 1, 0.5.into()), multiplicity: 1 },
            InterpolationNode { z: Complex64::new(0.5, 0.0), w: CMat::from_element(1, 1, 1.0.into()), multiplicity: 1 },
        ];
        let dd = DiscData { ell: 1, nodes, mode: DataMode::Direct, normalization: None };
        normalize_data(&dd, Some(0)).unwrap()
    }

    #[test]
    fn scalar_interpolant() {
        let dd = scalar_data();
        let itp = solve_interpolant(&dd, None).unwrap();
        for x in [-0.7, 0.0, 0.25, 0.5, 0.9] {
            let z = Complex64::new(x, 0.0);
            let want = (3.0 + 2.0 * z) / (2.0 * (3.0 - 2.0 * z));
            assert!((itp.eval(z).unwrap()[(0, 0)] - want).norm() < 1e-12);
        }
        let chk = check_solution(&itp, &dd).unwrap();
        assert!((chk.pole_radius - 2.0 / 3.0).abs() < 1e-12);
        assert!(chk.interp_residual < 1e-12);
        assert!(chk.min_herm_eig > 0.0);
    }

    #[test]
    fn constant_interpolant() {
        let dd = DiscData {
            ell: 2,
            nodes: vec![InterpolationNode {
                z: Complex64::new(0.0, 0.0),
                w: CMat::identity(2, 2).scale(0.5),
                multiplicity: 1,
            }],
            mode: DataMode::Direct,
            normalization: None,
        };
        let dd = normalize_data(&dd, None).unwrap();
        let itp = solve_interpolant(&dd, None).unwrap();
        let chk = check_solution(&itp, &dd).unwrap();
        assert_eq!(chk.pole_radius, 0.0);
        assert!((chk.min_herm_eig - 1.0).abs() < 1e-15);
        assert!(matches!(itp.eval(Complex64::new(1.0, 0.0)), Err(Error::OutsideDomain(_))));
    }
}
