use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    ShapeMismatch(String),

    #[error("requested {requested} rows but only {available} are available")]
    OutOfRange { requested: usize, available: usize },

    #[error("column {column} is numerically dependent on the preceding columns")]
    DegenerateInput { column: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e}, norm {norm:e})")]
    NotHermitian { asymmetry: f64, norm: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("matrix is not orthogonal/unitary (max deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("power sums are not consistent with a nonnegative spectrum: {0}")]
    InconsistentMoments(String),

    #[error("sample set is empty")]
    EmptySampleSet,

    #[error("rank mismatch: expected m = {expected}, found m = {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("characteristic functional grids differ")]
    GridMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("iteration did not converge: {0}")]
    NoConvergence(&'static str),
}
