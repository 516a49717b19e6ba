//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the power-flow and quantum-simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("matrix is not symmetric: |M[{row},{col}] - M[{col},{row}]| = {diff:.3e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("vector length {vec_len} does not match matrix dimension {dim}")]
    DimensionMismatch { dim: usize, vec_len: usize },

    #[error("empty Pauli label")]
    EmptyPauliLabel,

    #[error("invalid Pauli label character {0:?} (expected I, X, Y or Z)")]
    InvalidPauliLabel(char),

    #[error("qubit index {index} out of range for {n_qubits} qubit(s)")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("two-qubit gate endpoints must be distinct (both {0})")]
    DuplicateQubits(usize),

    #[error("parameter vector has length {got}, circuit expects {expected}")]
    ParamCountMismatch { expected: usize, got: usize },

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },

    #[error("state vector is not normalized: |norm - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("amplitude vector length {len} is not 2^{n_qubits}")]
    BadAmplitudeCount { len: usize, n_qubits: usize },

    #[error("probability {value} for {name} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("singular direction: A.U(w)|0> has vanishing norm")]
    SingularDirection,

    #[error("ansatz must have at least one layer")]
    ZeroLayers,

    #[error("basis solution {index} missed the cost target: best cost {best:.3e} > {target:.3e}")]
    BasisOptimizationFailed { index: usize, best: f64, target: f64 },

    #[error("case {0:?}: no slack bus")]
    NoSlack(String),

    #[error("case {0:?}: multiple slack buses")]
    MultipleSlack(String),

    #[error("duplicate bus id {0}")]
    DuplicateBusId(usize),

    #[error("branch {from}-{to} references unknown bus {bus}")]
    UnknownBus { from: usize, to: usize, bus: usize },

    #[error("branch {from}-{to} has zero reactance")]
    ZeroReactance { from: usize, to: usize },

    #[error("branch {from}-{to} is a self-loop")]
    SelfLoop { from: usize, to: usize },

    #[error("bus {0} is not connected to the rest of the network")]
    Disconnected(usize),

    #[error("bus {0} has non-positive voltage set-point")]
    BadVoltageSetpoint(usize),

    #[error("case has no buses")]
    EmptyCase,

    #[error("covariance matrix is not positive semi-definite (eigenvalue {0:.3e})")]
    CovarianceNotPsd(f64),

    #[error("injection distribution: {0}")]
    BadDistribution(String),

    #[error("bus id {0} not present in the case")]
    TargetBusNotFound(usize),

    #[error("sample count must be at least 1")]
    ZeroSamples,

    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),

    #[error("case file parse error: {0}")]
    CaseParse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
