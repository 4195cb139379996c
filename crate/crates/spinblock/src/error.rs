use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("p must be an odd integer >= 3, got {0}")]
    InvalidP(usize),
    #[error("vector has a negative coordinate")]
    NegativeCoordinate,
    #[error("pairing is not an integer")]
    NonIntegralPairing,
    #[error("not a positive root")]
    NotPositiveRoot,
    #[error("content is not a multiple of delta")]
    NotDeltaMultiple,
    #[error("letter {letter} outside 0..={ell}")]
    LetterOutOfRange { letter: usize, ell: usize },
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("partition {0:?} is not weakly decreasing and positive")]
    MalformedPartition(Vec<usize>),
    #[error("partition {0:?} is not {1}-strict")]
    NotPStrict(Vec<usize>, usize),
    #[error("bead count {beads} is smaller than the number of parts {parts}")]
    TooFewBeads { beads: usize, parts: usize },
    #[error("illegal slide: {0}")]
    IllegalSlide(String),
    #[error("{0:?} is not a {1}-bar core")]
    NotCore(Vec<usize>, usize),
    #[error("core is not {0}-Rouquier")]
    NotRouquier(usize),
    #[error("node ({row},{col}) in component {comp} is not properly {kind}")]
    NotProper { row: usize, col: usize, comp: usize, kind: &'static str },
    #[error("tableau is not p-standard")]
    NotStandard,
    #[error("exact division failed: {0}")]
    NonDivisible(String),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("eigenvalue {0} is not of the form i(i+1)/2")]
    UnexpectedEigenvalue(u64),
    #[error("unsupported prime {0} for the finite field backend")]
    UnsupportedPrime(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, SpinError>;
