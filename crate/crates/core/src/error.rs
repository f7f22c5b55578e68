use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An input left the interior of the domain of `h` (e.g. a nonpositive
    /// coordinate under negative entropy).
    #[error("domain violation at coordinate {index}: {value}")]
    Domain { index: usize, value: f64 },

    #[error("unsupported combination: {geometry} geometry with {regularizer} regularizer")]
    Unsupported {
        geometry: &'static str,
        regularizer: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("infeasible point: {0}")]
    Infeasible(String),

    #[error("graph is not connected")]
    Disconnected,
}

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::InvalidParameter(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
