use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("null state: amplitudes cancel to the zero vector")]
    NullState,
    #[error("{requested} qubits requested, dense simulation is capped at {max}")]
    TooManyQubits { requested: usize, max: usize },
    #[error("qubit position {position} out of range 1..={num_qubits}")]
    PositionOutOfRange { position: usize, num_qubits: usize },
    #[error("bad bitstring {string:?}: {reason}")]
    BadBitstring { string: String, reason: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty qubit subset")]
    EmptySubset,
    #[error("codewords do not form an orthonormal basis (worst deviation {worst:.3e})")]
    NotOrthonormal { worst: f64 },
    #[error("input states are linearly dependent")]
    LinearlyDependent,
    #[error("qubit {position} is not a common factor of all codewords")]
    NotAFactor { position: usize },
    #[error("unknown built-in code {0:?}")]
    UnknownCode(String),
    #[error("code length {0} must be odd")]
    EvenLength(usize),
    #[error("no primitive polynomial on file for extension degree {0}")]
    UnsupportedFieldDegree(usize),
    #[error("polynomial {poly:#b} is not primitive for GF(2^{m})")]
    NotPrimitive { poly: u64, m: usize },
    #[error("2 has no multiplicative order dividing a supported field size modulo {0}")]
    NoFieldForLength(usize),
    #[error("defining set is not closed under doubling mod {n}: {i} maps outside the set")]
    NotDoublingClosed { n: usize, i: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dimension {k} too large for exhaustive enumeration (cap {max})")]
    DimensionTooLarge { k: usize, max: usize },
    #[error("the zero code has no nonzero codewords")]
    EmptyCode,
    #[error("code is inadmissible: defining set contains both cosets C_{} and C_{}", .cosets.0, .cosets.1)]
    Inadmissible { cosets: (usize, usize) },
    #[error("containment violated: the dual code is not a subcode")]
    ContainmentViolated,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
