use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational `{0}`")]
    Rational(String),
    #[error("malformed Laurent polynomial `{0}`: {1}")]
    Laurent(String, String),
    #[error("malformed document: {0}")]
    Json(String),
    #[error("unsupported schema `{0}`")]
    Schema(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("duplicate matrix entry at ({0}, {1})")]
    DuplicateEntry(usize, usize),
    #[error("matrix index ({row}, {col}) out of range for {rows}x{cols}")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("window overflow: {0}")]
    WindowOverflow(String),

    #[error("duplicate generator id `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),
    #[error("chain map has not been verified")]
    UnverifiedChainMap,
    #[error("level shift certificate missing or infinite")]
    UncertifiedLevelShift,
    #[error("not a cycle")]
    NotACycle,
    #[error("the class is zero in homology")]
    ZeroClass,
    #[error("missing deck-transformation metadata")]
    MissingDeckMetadata,

    #[error("invalid S-complex: {0}")]
    InvalidSComplex(String),
    #[error("invalid S-morphism: {0}")]
    InvalidSMorphism(String),
    #[error("S-homotopy shape violation: {0}")]
    HomotopyShape(String),
    #[error("mismatched endpoints: {0}")]
    MismatchedEndpoints(String),
    #[error("homotopy law fails: {0}")]
    HomotopyLaw(String),

    #[error("invalid Morse data: {0}")]
    InvalidMorseData(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
