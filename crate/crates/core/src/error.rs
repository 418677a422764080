use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("Hamiltonian is not traceless (|Tr H| = {trace:.3e})")]
    NotTraceless { trace: f64 },

    #[error("state is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("index {index} out of range 1..={max} for {what}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("gate lines must be distinct and ascending, got ({0}, {1})")]
    InvalidLinePair(usize, usize),

    #[error("Clifford signatures differ")]
    SignatureMismatch,

    #[error("element is not invertible (norm {0:.3e})")]
    NotInvertible(f64),

    #[error("element is not even (blade of grade {0})")]
    NotEven(u32),

    #[error("element is not a pure bivector (blade of grade {0})")]
    NotBivector(u32),

    #[error("too many generators for a blade mask: {0}")]
    TooManyGenerators(usize),

    #[error("conjugation left a non-vector residue of {0:.3e}")]
    ConjugationResidue(f64),

    #[error("imaginary residue {0:.3e} in a real expectation value")]
    ImaginaryResidue(f64),

    #[error("{what}: {size} exceeds the supported maximum {max}")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("auxiliary qubit {0} is not in a computational basis state")]
    AuxiliaryNotComputational(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
