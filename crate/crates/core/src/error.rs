use thiserror::Error;

/// Errors raised by state-vector construction and manipulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("invalid mode label {0:?}")]
    InvalidModeLabel(String),
    #[error("state needs at least one term")]
    EmptyTerms,
    #[error("basis ket has {found} spins, state declares {expected}")]
    InconsistentSpinCount { expected: usize, found: usize },
    #[error("squared norm {norm_sqr} exceeds one")]
    NormExceedsOne { norm_sqr: f64 },
    #[error("mode {0} is not registered in the state")]
    UnknownMode(String),
    #[error("spin index {index} out of range for {count} spins")]
    SpinIndexOutOfRange { index: usize, count: usize },
    #[error("rerouting into mode {0} collides with existing amplitude")]
    ModeCollision(String),
    #[error("states have incompatible shapes ({left} vs {right} spins)")]
    IncompatibleShapes { left: usize, right: usize },
    #[error("mode {0} carries amplitude but no detector watches it")]
    UncoveredMode(String),
    #[error("mode {mode} keeps weight {weight} outside every detector projection")]
    UnmeasuredComponent { mode: String, weight: f64 },
    #[error("two detectors project mode {0} onto the same polarization")]
    DuplicateDetector(String),
    #[error("state has no amplitude to measure")]
    EmptyState,
    #[error("spin state must have {expected} amplitudes, got {found}")]
    WrongDimension { expected: usize, found: usize },
}

/// Errors from the cavity reflection model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CavityError {
    #[error("invalid cavity parameters: {0}")]
    InvalidParams(String),
    #[error("reflection denominator vanishes (|d| = {0:e})")]
    DegenerateDenominator(f64),
}

/// Errors from reading or validating a netlist.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetlistError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: unknown keyword {keyword:?}")]
    UnknownKeyword { line: usize, column: usize, keyword: String },
    #[error("outcome label {0:?} declared twice")]
    DuplicateOutcomeLabel(String),
    #[error("detector {0:?} has no feedforward entry")]
    UncoveredOutcome(String),
    #[error("feedforward entry {0:?} names no detector")]
    UnknownOutcome(String),
    #[error("dangling mode {mode}: {context}")]
    DanglingMode { mode: String, context: String },
    #[error("spin index {index} out of range for {count} spins ({context})")]
    SpinIndexOutOfRange { index: usize, count: usize, context: String },
    #[error("element {context} routes through repeated mode {mode}")]
    RepeatedMode { mode: String, context: String },
}

/// Crate-wide error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Cavity(#[from] CavityError),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("spin input has squared norm {0}, expected 1")]
    NonUnitInput(f64),
    #[error("every detection outcome has zero probability")]
    ZeroDetectionProbability,
    #[error("bad input spec: {0}")]
    BadInputSpec(String),
    #[error("input spec has {found} amplitudes, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
