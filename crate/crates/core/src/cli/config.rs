use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fixtures;
use crate::ratmat::{Polynomial, RationalFunction, RationalMatrix};
use crate::stabdata::{ModeRequest, PlantPair, Tolerances};
use crate::{Error, RMat, Result};

/// Matrix entry: a bare number or `{"num": [...], "den": [...]}` with
/// ascending coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntrySpec {
    Constant(f64),
    Rational { num: Vec<f64>, den: Vec<f64> },
}

impl EntrySpec {
    fn to_rational(&self, field: &str) -> Result<RationalFunction> {
        match self {
            EntrySpec::Constant(c) => Ok(RationalFunction::constant(*c)),
            EntrySpec::Rational { num, den } => {
                RationalFunction::new(Polynomial::new(num.clone()), Polynomial::new(den.clone()))
                    .map_err(|e| Error::Config(format!("{field}: {e}")))
            }
        }
    }
}

pub type MatrixSpec = Vec<Vec<EntrySpec>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSpec {
    pub n0: MatrixSpec,
    pub d0: MatrixSpec,
    pub n1: MatrixSpec,
    pub d1: MatrixSpec,
}

/// Σ given inline (array of rows) or by preset name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigmaSpec {
    Preset(String),
    Matrix(Vec<Vec<f64>>),
}

impl SigmaSpec {
    pub fn resolve(&self) -> Result<RMat> {
        match self {
            SigmaSpec::Preset(name) => {
                fixtures::sigma_preset(name).ok_or_else(|| Error::Config(format!("sigma: unknown preset '{name}'")))
            }
            SigmaSpec::Matrix(rows) => rows_to_matrix(rows, "sigma"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub plants: PlantSpec,
    #[serde(default)]
    pub sigma: Option<SigmaSpec>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub mode: ModeRequest,
    #[serde(default = "default_grid")]
    pub grid: String,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_alpha() -> f64 {
    1.0
}

fn default_grid() -> String {
    "0:0.1:1".into()
}

impl ProblemConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ProblemConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha: must be positive, got {}", self.alpha)));
        }
        if !(self.tolerances.simplicity > 0.0 && self.tolerances.rank_gap > 0.0) {
            return Err(Error::Config("tolerances: must be positive".into()));
        }
        parse_grid(&self.grid)?;
        Ok(())
    }

    pub fn plant_pair(&self) -> Result<PlantPair> {
        let p = &self.plants;
        PlantPair::new(
            matrix("plants.n0", &p.n0)?,
            matrix("plants.d0", &p.d0)?,
            matrix("plants.n1", &p.n1)?,
            matrix("plants.d1", &p.d1)?,
        )
    }

    pub fn sigma_matrix(&self) -> Result<Option<RMat>> {
        self.sigma.as_ref().map(SigmaSpec::resolve).transpose()
    }

    pub fn lambda_grid(&self) -> Result<Vec<f64>> {
        parse_grid(&self.grid)
    }
}

/// Command-line overrides applied on top of a config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    /// Path to a JSON array of rows, or a preset name.
    pub sigma: Option<String>,
    pub alpha: Option<f64>,
    pub mode: Option<ModeRequest>,
    pub grid: Option<String>,
    /// Sets both the simplicity and the rank-gap tolerance.
    pub tol: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ProblemConfig) -> Result<()> {
        if let Some(sigma) = &self.sigma {
            let path = Path::new(sigma);
            cfg.sigma = Some(if path.is_file() {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("sigma: cannot read {}: {e}", path.display())))?;
                let rows: Vec<Vec<f64>> =
                    serde_json::from_str(&text).map_err(|e| Error::Config(format!("sigma: {e}")))?;
                SigmaSpec::Matrix(rows)
            } else {
                SigmaSpec::Preset(sigma.clone())
            });
            cfg.sigma_matrix()?;
        }
        if let Some(a) = self.alpha {
            cfg.alpha = a;
        }
        if let Some(m) = self.mode {
            cfg.mode = m;
        }
        if let Some(g) = &self.grid {
            cfg.grid = g.clone();
        }
        if let Some(t) = self.tol {
            cfg.tolerances = Tolerances { simplicity: t, rank_gap: t };
        }
        cfg.validate()
    }
}

fn matrix(field: &str, rows: &MatrixSpec) -> Result<RationalMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Config(format!("{field}: rows must be non-empty and of equal length")));
    }
    let mut entries = Vec::with_capacity(r * c);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            entries.push(e.to_rational(&format!("{field}[{i}][{j}]"))?);
        }
    }
    RationalMatrix::new(r, c, entries)
}

pub fn rows_to_matrix(rows: &[Vec<f64>], field: &str) -> Result<RMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Config(format!("{field}: rows must be non-empty and of equal length")));
    }
    Ok(RMat::from_fn(r, c, |i, j| rows[i][j]))
}

/// `start:step:end`
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Config(format!("grid: expected start:step:end, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> =
        parts.iter().map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    crate::synth::lambda_grid(v[0], v[1], v[2])
}
