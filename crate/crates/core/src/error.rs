use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index error: {0}")]
    Index(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The achieved approximation error exceeded the recorded a-priori bound.
    #[error("error bound violated: achieved {achieved:e} > bound {bound:e} (slack {slack:e})")]
    BoundViolation { achieved: f64, bound: f64, slack: f64 },

    #[error("invariant failure: {0}")]
    Invariant(String),

    #[error("completion failed at iteration {iteration}: {source}")]
    Completion {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Failures while decoding tensor and TT files. Offsets are byte offsets into the file.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("bad magic at offset {offset}: expected {expected:?}, found {found:?}")]
    BadMagic {
        offset: usize,
        expected: String,
        found: String,
    },

    #[error("unsupported version {version} at offset {offset}")]
    UnsupportedVersion { offset: usize, version: u32 },

    #[error("truncated input at offset {offset}: expected {expected} bytes, found {actual}")]
    Truncated {
        offset: usize,
        expected: usize,
        actual: usize,
    },

    #[error("dimension product overflows at offset {offset}")]
    DimsOverflow { offset: usize },

    #[error("order 0 at offset {offset}")]
    ZeroOrder { offset: usize },

    #[error("zero dimension at offset {offset}")]
    ZeroDim { offset: usize },

    #[error("broken rank chain at offset {offset}: {msg}")]
    RankChain { offset: usize, msg: String },

    #[error("{extra} trailing bytes after payload at offset {offset}")]
    TrailingBytes { offset: usize, extra: usize },

    #[error("line {line}: {msg}")]
    Text { line: usize, msg: String },
}
