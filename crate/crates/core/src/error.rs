use thiserror::Error;

/// Errors raised while building, parsing or simulating circuits.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("circuit has no gates")]
    EmptyCircuit,
    #[error("gate {gate} repeats qubit {qubit}")]
    DuplicateTarget { gate: String, qubit: usize },
    #[error("gate {gate} expects {expected} qubits, got {got}")]
    Arity {
        gate: String,
        expected: usize,
        got: usize,
    },
    #[error("qubit {qubit} is outside circuit width {width}")]
    WidthViolation { qubit: usize, width: usize },
    #[error("width {width} exceeds the configured cap of {cap} qubits")]
    WidthCap { width: usize, cap: usize },
    #[error("expected {expected} input bits, got {got}")]
    InputLength { expected: usize, got: usize },
    #[error("invalid bit character {0:?}")]
    InvalidBit(char),
    #[error("operation requires {expected} basis output, circuit has {found}")]
    BasisMismatch { expected: String, found: String },
    #[error("majority amplification needs an odd positive round count, got {0}")]
    InvalidRounds(usize),
}

/// Errors raised by subset-state operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("subset state needs at least one member")]
    NoMembers,
    #[error("member {0} listed twice")]
    DuplicateMember(String),
    #[error("member {member:?} has length {got}, expected {expected}")]
    MemberLength {
        member: String,
        expected: usize,
        got: usize,
    },
    #[error(
        "coordinate {coordinate}: isometry columns are not orthonormal (deviation {deviation:e})"
    )]
    NotIsometry { coordinate: usize, deviation: f64 },
    #[error("isometry output size {got} exceeds cap of {cap} qubits")]
    IsometryTooWide { got: usize, cap: usize },
    #[error("isometry list has {got} entries for {expected} coordinates")]
    IsometryCount { expected: usize, got: usize },
    #[error("gate touches encoded coordinate {0}")]
    EncodedCoordinate(usize),
    #[error("qubit {qubit} outside state of {n} coordinates")]
    QubitRange { qubit: usize, n: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state of {0} qubits exceeds the bit-label capacity")]
    TooManyQubits(usize),
    #[error("dense expansion of {0} qubits exceeds the configured cap")]
    DenseCap(usize),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Errors raised while compiling or manipulating Hamiltonians.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("term on {0} qubits exceeds the locality cap of 6")]
    ArityCap(usize),
    #[error("term qubit {qubit} outside {n_total} qubits")]
    QubitRange { qubit: usize, n_total: usize },
    #[error("term repeats qubit {0}")]
    DuplicateQubit(usize),
    #[error("term matrix has {got} entries, expected {expected}")]
    MatrixShape { expected: usize, got: usize },
    #[error("term {label} is not Hermitian (deviation {deviation:e})")]
    NotHermitian { label: String, deviation: f64 },
    #[error("norm scale must be positive and finite, got {0}")]
    NormScale(f64),
    #[error("perturbation strength {delta} is below the bound {bound}")]
    DeltaTooSmall { delta: f64, bound: f64 },
    #[error("truncation time {q} exceeds the plus-free prefix N+L = {limit}")]
    TruncationTooLate { q: usize, limit: usize },
    #[error("truncation time {q} equals the final clock time, so the promised overlap would be 1")]
    DegenerateOverlap { q: usize },
    #[error("term {0} is outside the {{X, Z, XX, ZZ}} interaction set")]
    InteractionSet(String),
    #[error("term {0} has a complex coefficient")]
    ComplexCoefficient(String),
    #[error("term {0} is not diagonal")]
    NotDiagonal(String),
    #[error("epsilon {epsilon} must be below half the threshold gap {half_gap}")]
    EpsilonTooLarge { epsilon: f64, half_gap: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Errors raised by the spectral routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("dimension 2^{qubits} exceeds the {kind} cap of 2^{cap}")]
    DimensionCap {
        qubits: usize,
        cap: usize,
        kind: &'static str,
    },
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("requested {requested} eigenpairs from a space of dimension {dim}")]
    TooManyEigenpairs { requested: usize, dim: usize },
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Umbrella error for callers that drive the whole pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
