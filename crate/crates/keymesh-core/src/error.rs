use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An analytic formula was asked for a value outside the range where it holds.
    #[error("outside formula domain: {0}")]
    FormulaDomain(String),

    #[error("region mismatch: {0}")]
    RegionMismatch(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration of {count} rings exceeds the limit of {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },

    #[error("target key-setup probability {target} is unattainable with ring size {ring_size} and overlap {overlap}")]
    Unattainable { target: f64, ring_size: usize, overlap: usize },

    #[error("graphs disagree on node count: expected {expected}, found {found}")]
    NodeCountMismatch { expected: usize, found: usize },

    #[error("bound is vacuous: c = {c} does not exceed threshold {threshold}")]
    VacuousBound { c: f64, threshold: f64 },

    #[error("invalid link query: {0}")]
    InvalidLink(String),
}

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
