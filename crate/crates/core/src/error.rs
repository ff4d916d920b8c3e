use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation window exceeds the cap of {cap} modes around the peak (needed {needed})")]
    TruncationCap { cap: i32, needed: i32 },

    #[error("degenerate superposition: resulting norm {norm:e} is below 1e-10")]
    DegenerateSuperposition { norm: f64 },

    #[error("truncation overflow: e^(beta m)|c_m|^2 exceeds 1e300 at m = {m}")]
    TruncationOverflow { m: i32 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("row {row}: {source}")]
    Row {
        row: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
