use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is empty after removing all-zero rows and columns")]
    EmptyMatrix,

    #[error("no overlapping labels on the {axis} axis")]
    NoOverlap { axis: String },

    #[error("row `{label}` has a zero total; its share vector is undefined")]
    AllZeroRow { label: String },

    #[error("matrix has {rows}x{cols} values but {row_labels} row labels and {col_labels} column labels")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        row_labels: usize,
        col_labels: usize,
    },

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("invalid value {value} at ({row}, {col}): {reason}")]
    InvalidValue {
        row: usize,
        col: usize,
        value: f64,
        reason: &'static str,
    },

    #[error("incidence matrix has an all-zero {axis} `{label}`; prune it first")]
    ZeroMargin { axis: &'static str, label: String },

    #[error("axis kinds {0} do not identify a complexity index")]
    InvalidAxes(String),

    #[error("matrix is not row-stochastic (row {row} sums to {sum})")]
    NotRowStochastic { row: usize, sum: f64 },

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("every nontrivial eigenvalue is complex")]
    NoRealEigenvalue,

    #[error("eigen-decomposition did not converge")]
    EigenFailure,

    #[error("index vector has zero variance")]
    DegenerateIndex,

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {needed} paired observations, found {found}")]
    InsufficientOverlap { needed: usize, found: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("no records for year {0}")]
    UnknownYear(i32),

    #[error("inventor shares of patent `{patent}` in class `{class}` sum to {sum}")]
    BadShares {
        patent: String,
        class: String,
        sum: f64,
    },

    #[error("cannot chain `{left}` into `{right}`")]
    SchemeMismatch { left: String, right: String },

    #[error("concordance chain is empty")]
    EmptyChain,

    #[error("duplicate entity `{0}`")]
    DuplicateEntity(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// True for failures that come from the mathematics (an undefined
    /// index) rather than from the input data.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSpectrum(_)
                | Error::NoRealEigenvalue
                | Error::DegenerateIndex
                | Error::NoConvergence { .. }
                | Error::EigenFailure
        )
    }

    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
