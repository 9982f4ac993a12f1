use thiserror::Error;

/// Errors raised while building operators, solving or doing I/O.
#[derive(Debug, Error)]
pub enum TvError {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("kernel of size {kernel_rows}x{kernel_cols} does not fit in a {rows}x{cols} grid")]
    KernelTooLarge {
        kernel_rows: usize,
        kernel_cols: usize,
        rows: usize,
        cols: usize,
    },

    /// N(K) ∩ N(D) is not trivial, so the normal matrix is singular.
    #[error("normal matrix is singular, N(K) and N(D) intersect nontrivially: {0}")]
    SingularNormal(String),

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    CgNotConverged { iterations: usize, residual: f64 },

    #[error("malformed kernel spec {input:?}: {reason}")]
    KernelSpec { input: String, reason: String },

    #[error(transparent)]
    Netpbm(#[from] crate::imaging::netpbm::NetpbmError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, TvError>;

pub(crate) fn check_len(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(TvError::DimensionMismatch {
            context,
            expected,
            actual,
        })
    }
}
