use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant to an exit class.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("matrix is not Hermitian: |H[{row}][{col}] - conj(H[{col}][{row}])| = {asymmetry:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        asymmetry: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown catalogue entry '{0}'")]
    Unknown(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(
        "spectral grid [{lo}, {hi}] does not cover the measure (cdf(hi) = {cdf_hi:.6}); \
         try [{suggested_lo:.4}, {suggested_hi:.4}]"
    )]
    Range {
        lo: f64,
        hi: f64,
        cdf_hi: f64,
        suggested_lo: f64,
        suggested_hi: f64,
    },

    #[error("pole of the splitting functions at s = {0}")]
    Pole(String),

    #[error("square-root branch tracking failed at t = {t}: {reason}")]
    Branch { t: f64, reason: String },

    #[error("conditioning guard exceeded: {0}")]
    Conditioning(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics, as opposed to bad input or configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_)
                | Error::Range { .. }
                | Error::Pole(_)
                | Error::Branch { .. }
                | Error::Conditioning(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
