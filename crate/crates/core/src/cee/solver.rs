use nalgebra::DVector;

use super::{build_data_operator_at, CanonicalStructure, DataOperator};
use crate::stabdata::InterpolationNode;
use crate::{linalg, Error, RMat, Result};

const FD_STEP: f64 = 1e-7;
const MAX_NEWTON: usize = 50;
const MAX_FIXED_POINT: usize = 2000;
const DAMPING: f64 = 0.5;
const INITIAL_STEP: f64 = 0.1;
const MIN_STEP: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct CeeProblem {
    pub structure: CanonicalStructure,
    pub dataop: DataOperator,
    pub sigma: RMat,
    /// `J - Sigma H`
    pub gamma: RMat,
    nodes: Option<Vec<InterpolationNode>>,
}

impl CeeProblem {
    /// Problem for the given non-base normalized nodes; the nodes are kept so
    /// the solver can deform the data rather than the operator.
    pub fn from_nodes(structure: CanonicalStructure, nodes: &[InterpolationNode], sigma: RMat) -> Result<Self> {
        let dataop = build_data_operator_at(nodes, &structure, 1.0)?;
        let mut p = Self::new(structure, dataop, sigma)?;
        p.nodes = Some(nodes.to_vec());
        Ok(p)
    }

    pub fn new(structure: CanonicalStructure, dataop: DataOperator, sigma: RMat) -> Result<Self> {
        let dim = structure.dim();
        if sigma.nrows() != dim || sigma.ncols() != structure.ell {
            return Err(Error::ShapeError(format!(
                "sigma is {}x{}, expected {dim}x{}",
                sigma.nrows(),
                sigma.ncols(),
                structure.ell
            )));
        }
        if dataop.u.nrows() != dim || dataop.u.ncols() != structure.ell {
            return Err(Error::ShapeError("data operator does not match the structure".into()));
        }
        let gamma = &structure.j - &sigma * &structure.h;
        Ok(CeeProblem { structure, dataop, sigma, gamma, nodes: None })
    }

    fn at(&self, tau: f64) -> Result<DataOperator> {
        match &self.nodes {
            Some(nodes) => build_data_operator_at(nodes, &self.structure, tau),
            None => Ok(self.dataop.scaled(tau)),
        }
    }
}

/// `G(P) = u + U[Sigma + Gamma P H']`
fn g_of(p: &RMat, prob: &CeeProblem, op: &DataOperator) -> RMat {
    let s = &prob.gamma * p * prob.structure.h.transpose() + &prob.sigma;
    op.affine(&s)
}

/// `Gamma (P - P H' H P) Gamma' + G(P) G(P)'`
fn rhs(p: &RMat, prob: &CeeProblem, op: &DataOperator) -> RMat {
    let h = &prob.structure.h;
    let inner = p - p * h.transpose() * h * p;
    let g = g_of(p, prob, op);
    &prob.gamma * inner * prob.gamma.transpose() + &g * g.transpose()
}

/// `P - Gamma (P - P H' H P) Gamma' - G(P) G(P)'`
pub fn cee_residual(p: &RMat, prob: &CeeProblem) -> RMat {
    p - rhs(p, prob, &prob.dataop)
}

#[derive(Clone, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HomotopyStats {
    pub steps: usize,
    pub rejected_steps: usize,
    pub newton_iterations: usize,
    pub fixed_point_fallbacks: usize,
    pub smallest_step: f64,
}

#[derive(Clone, Debug)]
pub struct CeeSolution {
    pub p: RMat,
    pub a: RMat,
    pub b: RMat,
    pub g: RMat,
    pub r: RMat,
    pub structure: CanonicalStructure,
    pub sigma: RMat,
    pub gamma: RMat,
    /// Frobenius norm of the final residual.
    pub residual: f64,
    pub stats: HomotopyStats,
}

impl CeeSolution {
    /// Coefficients of `A(z) = D(z) + Pi(z) A` in ascending powers of `z`.
    pub fn a_poly(&self) -> Vec<RMat> {
        fraction_coefficients(&self.structure, &self.a)
    }

    /// Coefficients of `B(z) = D(z) + Pi(z) B` in ascending powers of `z`.
    pub fn b_poly(&self) -> Vec<RMat> {
        fraction_coefficients(&self.structure, &self.b)
    }

    /// State matrix `J - A H` of `F(z) = I/2 + z H (I - z (J - AH))^{-1} G`.
    pub fn closed_state(&self) -> RMat {
        &self.structure.j - &self.a * &self.structure.h
    }
}

fn fraction_coefficients(cs: &CanonicalStructure, x: &RMat) -> Vec<RMat> {
    let (ell, n) = (cs.ell, cs.n);
    let mut out = vec![RMat::zeros(ell, ell); n + 1];
    out[n] = RMat::identity(ell, ell);
    for i in 0..ell {
        for k in 0..n {
            out[n - 1 - k].row_mut(i).copy_from(&x.row(i * n + k));
        }
    }
    out
}

fn vech_len(n: usize) -> usize {
    n * (n + 1) / 2
}

fn vech(p: &RMat) -> DVector<f64> {
    let n = p.nrows();
    let mut v = DVector::zeros(vech_len(n));
    let mut k = 0;
    for j in 0..n {
        for i in 0..=j {
            v[k] = p[(i, j)];
            k += 1;
        }
    }
    v
}

fn unvech(v: &DVector<f64>, n: usize) -> RMat {
    let mut p = RMat::zeros(n, n);
    let mut k = 0;
    for j in 0..n {
        for i in 0..=j {
            p[(i, j)] = v[k];
            p[(j, i)] = v[k];
            k += 1;
        }
    }
    p
}

fn symmetrize(p: &RMat) -> RMat {
    (p + p.transpose()).scale(0.5)
}

fn tolerance(p: &RMat) -> f64 {
    1e-12 * (1.0 + p.norm())
}

/// Newton on `vech(P)` with a forward-difference Jacobian.
fn newton(p0: &RMat, prob: &CeeProblem, op: &DataOperator, stats: &mut HomotopyStats) -> Option<RMat> {
    let dim = p0.nrows();
    let f = |x: &DVector<f64>| {
        let p = unvech(x, dim);
        vech(&(&p - rhs(&p, prob, op)))
    };
    let mut x = vech(p0);
    let len = x.len();
    for _ in 0..MAX_NEWTON {
        let r = f(&x);
        let p = unvech(&x, dim);
        if !r.iter().all(|v| v.is_finite()) {
            return None;
        }
        if r.norm() <= tolerance(&p) {
            return Some(symmetrize(&p));
        }
        stats.newton_iterations += 1;
        let mut jac = RMat::zeros(len, len);
        for c in 0..len {
            let mut xe = x.clone();
            xe[c] += FD_STEP;
            let col = (f(&xe) - &r) / FD_STEP;
            jac.set_column(c, &col);
        }
        let dx = jac.lu().solve(&r)?;
        x -= dx;
        x = vech(&symmetrize(&unvech(&x, dim)));
    }
    None
}

/// Damped iteration `P <- (1 - beta) P + beta RHS(P)`.
fn fixed_point(p0: &RMat, prob: &CeeProblem, op: &DataOperator) -> Option<RMat> {
    let mut p = p0.clone();
    for _ in 0..MAX_FIXED_POINT {
        let next = rhs(&p, prob, op);
        if !next.iter().all(|v| v.is_finite()) {
            return None;
        }
        if (&p - &next).norm() <= tolerance(&p) {
            return Some(symmetrize(&p));
        }
        p = symmetrize(&(p.scale(1.0 - DAMPING) + next.scale(DAMPING)));
    }
    None
}

/// Solves the CEE by continuation from the trivial data (`P = 0`).
pub fn solve_cee(prob: &CeeProblem) -> Result<CeeSolution> {
    let dim = prob.structure.dim();
    let mut stats = HomotopyStats { smallest_step: INITIAL_STEP, ..Default::default() };
    let mut p = RMat::zeros(dim, dim);
    let mut tau = 0.0;
    let mut h = INITIAL_STEP;
    while tau < 1.0 {
        let next_tau = (tau + h).min(1.0);
        let op = prob.at(next_tau)?;
        let corrected = newton(&p, prob, &op, &mut stats).or_else(|| {
            stats.fixed_point_fallbacks += 1;
            fixed_point(&p, prob, &op)
        });
        match corrected {
            Some(pn) => {
                p = pn;
                tau = next_tau;
                stats.steps += 1;
            }
            None => {
                stats.rejected_steps += 1;
                h *= 0.5;
                stats.smallest_step = stats.smallest_step.min(h);
                if h < MIN_STEP {
                    return Err(Error::ContinuationFailure { tau, step: h });
                }
            }
        }
    }
    assemble(prob, p, stats)
}

fn assemble(prob: &CeeProblem, p: RMat, stats: HomotopyStats) -> Result<CeeSolution> {
    let h = &prob.structure.h;
    let min_p = linalg::sym_eigenvalues(&p).first().copied().unwrap_or(0.0);
    if min_p < -1e-10 {
        return Err(Error::InfeasibleData(format!("CEE solution is indefinite (min eigenvalue {min_p:.3e})")));
    }
    let hph = h * &p * h.transpose();
    let max_hph = linalg::sym_eigenvalues(&hph).last().copied().unwrap_or(0.0);
    if max_hph >= 1.0 - 1e-9 {
        return Err(Error::InfeasibleData(format!("H P H' is not below I (max eigenvalue {max_hph:.6})")));
    }
    let s = &prob.gamma * &p * h.transpose() + &prob.sigma;
    let g = prob.dataop.affine(&s);
    let a = &s - &g;
    let b = &s + &g;
    let ell = prob.structure.ell;
    let r = linalg::sqrt_psd(&(RMat::identity(ell, ell) - hph));
    let residual = cee_residual(&p, prob).norm();
    Ok(CeeSolution {
        p,
        a,
        b,
        g,
        r,
        structure: prob.structure.clone(),
        sigma: prob.sigma.clone(),
        gamma: prob.gamma.clone(),
        residual,
        stats,
    })
}
