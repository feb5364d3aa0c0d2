use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Mismatched or out-of-range group parameters (`n`, `r`, positions, colors).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Text or structural input that does not describe a valid object.
    #[error("parse error: {0}")]
    Parse(String),

    /// A cycle listing that repeats or omits values.
    #[error("malformed cycles: {0}")]
    MalformedCycles(String),

    /// The conjugacy class has a cycle at or below the length the operation forbids.
    #[error("class has a cycle of length {length}, but all cycles must be longer than {bound}")]
    ShortCycles { length: u32, bound: u32 },

    /// A closed-form expression does not apply to the requested domain.
    #[error("closed form not applicable: {0}")]
    FormulaNotApplicable(String),

    /// The requested enumeration is larger than the configured cap.
    #[error("enumeration of {size} elements exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },

    /// An algorithm reached a state its preconditions rule out.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
