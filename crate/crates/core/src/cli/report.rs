//! Serializable run report.

use serde::{Deserialize, Serialize};

use super::pipeline::{Analysis, Solved, Synthesis};
use crate::cee::{HomotopyStats, SolutionCheck};
use crate::stabdata::{ConjugateTag, DataMode};
use crate::synth::{EigenAxisReport, SweepReport};
use crate::{CMat, Complex64, RMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Analyzed,
    Solved,
    Stable,
    Unstable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroEntry {
    pub s: Complex64,
    pub tag: ConjugateTag,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub z: Complex64,
    /// Rows of the node value.
    pub value: Vec<Vec<Complex64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub mode: DataMode,
    pub alpha: f64,
    pub ell: usize,
    /// Nodes besides the normalization base.
    pub n: usize,
    /// Disc position of the normalization base; `None` if an artificial node was added.
    pub base: Option<f64>,
    pub nodes: Vec<NodeEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CeeReport {
    /// State dimension `n ell`.
    pub order: usize,
    /// `None` when the interpolant is constant and no equation was solved.
    pub residual: Option<f64>,
    pub stats: Option<HomotopyStats>,
    pub sigma: Vec<Vec<f64>>,
    pub check: SolutionCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BezoutEntry {
    pub lambda: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisReport {
    pub sweep: SweepReport,
    pub eigen_axis: EigenAxisReport,
    pub bezout: Vec<BezoutEntry>,
    pub oracle_gap: f64,
    pub cancellation_residual: f64,
    pub coprime_margin: Option<f64>,
    /// Degree of the common denominator of `Nc` and `Dc`.
    pub compensator_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub file: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub source: String,
    pub plant_size: usize,
    pub zeros: Vec<ZeroEntry>,
    pub data: DataSummary,
    pub cee: Option<CeeReport>,
    pub synthesis: Option<SynthesisReport>,
    pub verdict: Verdict,
    /// Emitted files other than the report itself.
    pub artifacts: Vec<Artifact>,
}

fn crows(m: &CMat) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn rrows(m: &RMat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl DataSummary {
    pub fn new(an: &Analysis, alpha: f64) -> Self {
        let norm = an.normalized.normalization.as_ref();
        DataSummary {
            mode: an.mode,
            alpha,
            ell: an.normalized.ell,
            n: an.n(),
            base: norm.filter(|r| r.base_index.is_some()).map(|r| r.a),
            nodes: an.disc.nodes.iter().map(|nd| NodeEntry { z: nd.z, value: crows(&nd.w) }).collect(),
        }
    }
}

impl CeeReport {
    pub fn new(solved: &Solved) -> Self {
        let sol = solved.interpolant.solution.as_ref();
        CeeReport {
            order: solved.interpolant.order(),
            residual: sol.map(|s| s.residual),
            stats: sol.map(|s| s.stats.clone()),
            sigma: sol.map(|s| rrows(&s.sigma)).unwrap_or_default(),
            check: solved.check.clone(),
        }
    }
}

impl SynthesisReport {
    pub fn new(sy: &Synthesis) -> Self {
        SynthesisReport {
            sweep: sy.sweep.clone(),
            eigen_axis: sy.eigen_axis.clone(),
            bezout: sy.bezout.iter().map(|&(lambda, residual)| BezoutEntry { lambda, residual }).collect(),
            oracle_gap: sy.oracle_gap,
            cancellation_residual: sy.compensator.cancellation_residual,
            coprime_margin: sy.coprime_margin,
            compensator_degree: sy.compensator.dc.entries().iter().map(|e| e.den().degree()).max().unwrap_or(0),
        }
    }
}
