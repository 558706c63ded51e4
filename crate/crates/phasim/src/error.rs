//! Crate-wide error type.
//!
//! Validation failures name the violated invariant so callers (and the CLI)
//! can report exactly what was wrong with an input.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state is not normalized: |Σ|amp|² − 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("matrix is not Hermitian: max |ρ − ρ†| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("trace is not one: Tr ρ = {trace:.17}")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue = {eigenvalue:.3e}")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("matrix is not unitary: max |UU† − I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("qubit index {index} out of range for {num_qubits} qubit(s)")]
    QubitIndexOutOfRange { index: usize, num_qubits: usize },

    #[error("control and target qubits must differ (both are {0})")]
    ControlTargetClash(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{0} qubit(s) unsupported; supported range is {1}..={2}")]
    UnsupportedQubitCount(usize, usize, usize),

    #[error("pass count must be ≥ 1 (got {0})")]
    InvalidPassCount(u32),

    #[error("resource count N must be ≥ 1 (got {0})")]
    InvalidResourceCount(u32),

    #[error("only K = 1 (two qubits, N = 3) is supported (got K = {0})")]
    UnsupportedProtocolDepth(u32),

    #[error("phase grid of {size} points is too coarse; need at least {minimum}")]
    GridTooCoarse { size: usize, minimum: usize },

    #[error("value must be finite (got {0})")]
    NonFinite(f64),

    #[error("probabilities sum to {sum:.17}, not 1")]
    ProbabilitiesNotNormalized { sum: f64 },

    #[error("probability {0:.17} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("measurement record is empty")]
    EmptyRecord,

    #[error("detector outcome must be ±1 (got {0})")]
    InvalidClickLabel(i8),

    #[error("probe count N = {0} outside supported range 1..=12")]
    ProbeCountOutOfRange(u32),

    #[error("theta schedule has {actual} entries; expected {expected}")]
    ScheduleLengthMismatch { expected: usize, actual: usize },

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("policy wiring violation: {0}")]
    PolicyWiring(String),

    #[error("need at least {minimum} bootstrap resamples (got {0})", minimum = 100)]
    TooFewResamples(usize),

    #[error("trial count must be ≥ 1")]
    NoTrials,

    #[error("optimizer failed to converge in any restart")]
    NonConvergence,

    #[error("invalid density-matrix file: {0}")]
    BadStateFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code convention: 2 for validation failures, 3 for
    /// numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence => 3,
            _ => 2,
        }
    }
}
