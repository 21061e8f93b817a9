use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix of {entries} entries exceeds the cap of {cap}")]
    SizeCap { entries: u128, cap: usize },

    #[error("{qubits} qubits exceeds the configured cap of {cap}")]
    QubitCap { qubits: usize, cap: usize },

    #[error("matrix is not Hermitian (max |h - h^dagger| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("series did not converge within {terms} terms")]
    SeriesDivergence { terms: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for {len} sites")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate site index {0}")]
    DuplicateIndex(usize),

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("closed form requires ligand_count = {expected}, model has {got}")]
    UnsupportedLigandCount { expected: usize, got: usize },

    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),

    #[error("unknown detector `{0}`")]
    UnknownDetector(String),

    #[error("quantity `{name}` is not defined for scenario {scenario}")]
    RoleUnavailable { name: String, scenario: String },

    #[error("no zero of the function in [{lo}, {hi}]")]
    NoZeroInWindow { lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
