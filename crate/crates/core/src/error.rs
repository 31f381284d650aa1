use thiserror::Error;

/// Errors surfaced by the core simulation and environment types.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {0} outside supported range 1..={1}")]
    QubitCountOutOfRange(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("amplitude vector has norm {0}, expected 1 within tolerance")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndexOutOfRange { index: usize, n: usize },

    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),

    #[error("gate arity {arity} does not match {given} qubit indices")]
    ArityMismatch { arity: usize, given: usize },

    #[error("permutation length {k} exceeds qubit count {n}")]
    TupleTooLong { k: usize, n: usize },

    #[error("gate set needs {required} qubits but the register has {n}")]
    TooFewQubits { required: usize, n: usize },

    #[error("action ({gate}, {perm}) out of bounds for |G|={gates}, C={combos}")]
    ActionOutOfBounds {
        gate: usize,
        perm: usize,
        gates: usize,
        combos: usize,
    },

    #[error("episode already finished; reset before stepping")]
    EpisodeFinished,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("target generation exhausted its sample budget of {0}")]
    GenerationBudgetExhausted(usize),

    #[error("cannot parse circuit line {line:?}: {reason}")]
    CircuitParse { line: String, reason: String },

    #[error("unknown gate name {0:?}")]
    UnknownGate(String),

    #[error("insufficient episodes: have {have}, need {need}")]
    InsufficientEpisodes { have: usize, need: usize },

    #[error("invalid amplitude data: {0}")]
    InvalidAmplitudes(String),
}

pub type Result<T> = std::result::Result<T, Error>;
