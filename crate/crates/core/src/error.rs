use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("register width mismatch: {left} vs {right} qubits")]
    WidthMismatch { left: usize, right: usize },
    #[error("mask {mask:#x} exceeds a {n_qubits}-qubit register")]
    MaskOutOfRange { mask: u64, n_qubits: usize },
    #[error("mode {mode} out of range for {n_modes} spin-orbitals")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("unsupported register width {0}")]
    RegisterTooLarge(usize),

    #[error("malformed FCIDUMP header: {0}")]
    MalformedHeader(String),
    #[error("FCIDUMP line {line}: orbital index {index} out of range (NORB = {norb})")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        norb: usize,
    },
    #[error("FCIDUMP line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error(
        "cannot place {n_electrons} electrons with MS2 = {ms2} in {n_spatial} spatial orbitals"
    )]
    InfeasibleOccupation {
        n_electrons: usize,
        ms2: i32,
        n_spatial: usize,
    },
    #[error("operator is not Hermitian (largest anti-Hermitian part {0:e})")]
    NotHermitian(f64),
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("pool construction needs an even qubit count, got {0}")]
    OddQubitCount(usize),
    #[error("operator kind {found} is not valid here (expected {expected})")]
    WrongKind {
        expected: &'static str,
        found: String,
    },
    #[error("operator takes {expected} parameters, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("generator must be a single anti-Hermitian Pauli term")]
    MultiTermGenerator,
    #[error("twin set has {0} QEs with nonzero gradient; an MVP-CEO needs at least two")]
    TwinSetTooSmall(usize),
    #[error("operator pool is empty")]
    EmptyPool,
    #[error("Hamiltonian has no terms")]
    EmptyHamiltonian,
    #[error("no cost entry for operator kind {0}")]
    UnknownCostKind(String),

    #[error("non-finite energy encountered during optimization")]
    NonFiniteEnergy,
    #[error("inverse Hessian is not symmetric (asymmetry {0:e})")]
    NonSymmetric(f64),

    #[error("circuit template {name} deviates from its generator exponential by {deviation:e}")]
    TemplateMismatch { name: String, deviation: f64 },

    #[error("fixture manifest: {0}")]
    Manifest(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
