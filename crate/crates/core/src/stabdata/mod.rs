//! Reduction of a two-plant family to disc interpolation data.
//!
//! `M(s) = [[N0, N1], [D0, D1]]` is formed from the endpoint factorizations;
//! each simple zero of `det M` in the open right half plane yields a null
//! direction `[v1; v2]`, an interpolation value `M_i` with `M_i v2 = -v1`,
//! and (after the map `z = (1 - s)/(1 + s)`) a node of a matrix Carathéodory
//! interpolation problem.

mod disc;
mod interp;
mod pencil;

pub use disc::{
    denormalize_data, normalize_data, normalize_or_augment, to_disc, DiscData, InterpolationNode, NormalizationRecord,
};
pub use interp::{interp_value, interp_value_unchecked, principal_sqrt, InterpValue};
pub use pencil::{build_pencil, null_direction, unstable_zeros, NullDirection, PencilM, UnstableZero};

use serde::{Deserialize, Serialize};

use crate::ratmat::RationalMatrix;
use crate::{Error, Result};

/// Whether the interpolant targets `M_i` directly or its principal square root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataMode {
    Direct,
    Sqrt,
}

/// Requested mode; `Auto` picks direct when every `He(M_i)` is positive definite.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeRequest {
    #[default]
    Auto,
    Direct,
    Sqrt,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Minimum separation between zeros of `det M`.
    pub simplicity: f64,
    /// Minimum second-smallest singular value of `M(s_i)`.
    pub rank_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { simplicity: 1e-6, rank_gap: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugateTag {
    Real,
    PairLead,
    PairFollow,
}

/// Endpoint plants `P_i = N_i D_i^{-1}`, each factor square, stable and proper.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlantPair {
    pub n0: RationalMatrix,
    pub d0: RationalMatrix,
    pub n1: RationalMatrix,
    pub d1: RationalMatrix,
}

impl PlantPair {
    pub fn new(n0: RationalMatrix, d0: RationalMatrix, n1: RationalMatrix, d1: RationalMatrix) -> Result<Self> {
        let m = n0.rows();
        for (name, f) in [("N0", &n0), ("D0", &d0), ("N1", &n1), ("D1", &d1)] {
            if f.rows() != m || f.cols() != m {
                return Err(Error::InvalidPlant(format!("{name} is {}x{}, expected {m}x{m}", f.rows(), f.cols())));
            }
            if !f.is_stable_proper()? {
                return Err(Error::InvalidPlant(format!("{name} has an unstable or improper entry")));
            }
        }
        if m == 0 {
            return Err(Error::InvalidPlant("empty plant".into()));
        }
        Ok(PlantPair { n0, d0, n1, d1 })
    }

    /// Plant size `m`.
    pub fn size(&self) -> usize {
        self.n0.rows()
    }
}
