use thiserror::Error;

/// Errors produced by parsing, metric construction, scoring, and the
/// statistical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A malformed line in an input stream (qrels, run, or CSV).
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Structurally valid input that breaks a data contract: duplicate
    /// identifiers, mismatched dimensions, unknown ids, empty required sets.
    #[error("{0}")]
    InvalidData(String),

    /// A metric specification that cannot be constructed: unknown grammar,
    /// parameter out of range, or a rejected model/aggregation combination.
    #[error("invalid metric spec: {0}")]
    InvalidSpec(String),

    /// A routine parameter outside its documented range (trial counts,
    /// significance level, depth, subset sizes).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation produced a non-finite value; scores must never silently
    /// carry NaN or infinity into reports.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// An underlying I/O failure while reading or writing artifacts.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
