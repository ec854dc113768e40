use num_complex::Complex64;
use thiserror::Error;

/// Errors raised anywhere in the synthesis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial has degree 0 or is identically zero")]
    DegreeError,
    #[error("zero denominator polynomial")]
    ZeroDenominator,
    #[error("evaluation at a pole: s = {0}")]
    PoleEvaluation(Complex64),
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("rational matrix is singular (determinant identically zero)")]
    SingularMatrix,
    #[error("invalid plant data: {0}")]
    InvalidPlant(String),

    #[error("pencil determinant is identically zero")]
    DegeneratePencil,
    #[error("pencil determinant vanishes at infinity")]
    ImproperPencil,
    #[error("unstable zero {0} is not simple")]
    NonSimpleZero(Complex64),
    #[error("zero {0} lies on the imaginary axis")]
    BoundaryZero(Complex64),
    #[error("pencil at {s} has nullity above one (second singular value {gap:.3e})")]
    RankAssumptionViolated { s: Complex64, gap: f64 },
    #[error("null direction has vanishing lower half; interpolation value is not assignable")]
    UnassignableDirection,
    #[error("interpolation value for alpha = {alpha} has an eigenvalue on the nonpositive real axis")]
    AlphaInfeasible { alpha: f64 },
    #[error("matrix has an eigenvalue on the closed nonpositive real axis: {0}")]
    BranchCutError(Complex64),
    #[error("value at node {index} has non-positive Hermitian part (min eigenvalue {min_eig:.3e})")]
    NotCaratheodoryData { index: usize, min_eig: f64 },
    #[error("no real node available as normalization base")]
    NoRealBase,

    #[error("interpolation nodes are degenerate (Vandermonde-type matrix is singular)")]
    DegenerateNodeSet,
    #[error("2W + I is singular although He W is positive definite")]
    InternalPositivityError,
    #[error("homotopy continuation stalled at tau = {tau:.6} (step {step:.2e})")]
    ContinuationFailure { tau: f64, step: f64 },
    #[error("interpolation data infeasible: {0}")]
    InfeasibleData(String),
    #[error("evaluation point {0} outside the open unit disc")]
    OutsideDomain(Complex64),

    #[error("factor is not a unit: {0}")]
    NotAUnit(String),
    #[error("compensator cancellation failed (residual {residual:.3e})")]
    InterpolationMismatch { residual: f64 },
    #[error("lambda = {0} outside [0, 1]")]
    RangeError(f64),
    #[error("det of the lambda-combination vanishes identically at lambda = {0}")]
    DegenerateFamily(f64),

    #[error("numerical routine failed: {0}")]
    Numerical(String),

    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::InvalidPlant(_) => 1,
            Error::NotCaratheodoryData { .. }
            | Error::InfeasibleData(_)
            | Error::NotAUnit(_)
            | Error::AlphaInfeasible { .. }
            | Error::BranchCutError(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
