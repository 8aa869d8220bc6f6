use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("letter {letter} is outside the alphabet 1..={branching}")]
    LetterOutOfRange { letter: usize, branching: usize },

    #[error("branching number must be at least 1")]
    ZeroBranching,

    #[error("invalid word {0:?}")]
    InvalidWord(String),

    #[error("vector has length {actual}, expected {expected}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("depth {depth} is too small: at least {required} is needed")]
    DepthTooSmall { depth: usize, required: usize },

    #[error("word of length {len} does not fit in a tree of depth {depth}")]
    WordTooDeep { len: usize, depth: usize },

    #[error("moment of order {order} needs a Jacobi matrix of size at least {required}, got {size}")]
    TruncationTooSmall { order: usize, size: usize, required: usize },

    #[error("exact integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("point {0} lies on the cut [-1, 1]")]
    OnSpectrum(String),

    #[error("the perturbed transform has a pole at z = {0}")]
    Pole(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("words are not nested by prefix")]
    NotNested,
}

pub type Result<T> = std::result::Result<T, SpectralError>;
