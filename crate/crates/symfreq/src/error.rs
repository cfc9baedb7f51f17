use thiserror::Error;

/// Errors from alphabet, count, and measure operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("invalid alphabet: m must be an integer >= 2 (got {m})")]
    InvalidAlphabet { m: u32 },

    #[error("invalid symbol: value {value} is out of range for a base-{m} alphabet")]
    InvalidSymbol { value: u32, m: u32 },

    #[error("prefix length {n} out of range: sequence has only {len} symbols")]
    PrefixOutOfRange { n: u64, len: u64 },

    #[error("frequency undefined at n=0")]
    UndefinedFrequency,

    #[error("incompatible measures: alphabet sizes {left} and {right} differ")]
    IncompatibleMeasure { left: u32, right: u32 },

    #[error("invalid measure: {reason}")]
    InvalidMeasure { reason: String },

    #[error("count overflow: more than 2^64 - 1 symbols")]
    Overflow,
}

/// Errors from symbol sources (file decoding and generators).
#[derive(Debug, Error)]
pub enum SourceError {
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("decode error at byte offset {offset}: byte {byte:#04x} is not a valid base-{m} symbol in {mode} mode")]
    Decode {
        offset: u64,
        byte: u8,
        m: u32,
        mode: &'static str,
    },

    #[error("invalid pattern: pattern must be nonempty")]
    EmptyPattern,

    #[error("alphabet size {m} exceeds the limit {limit} for {what}")]
    UnsupportedAlphabet {
        m: u32,
        limit: u32,
        what: &'static str,
    },

    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Errors from the streaming/checkpointing engine.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid symbol {value} at stream offset {offset}")]
    InvalidSymbol { value: u8, offset: u64 },

    #[error("incompatible counters: alphabet sizes {left} and {right} differ")]
    IncompatibleCounter { left: u32, right: u32 },

    #[error("count overflow: more than 2^64 - 1 symbols consumed")]
    Overflow,

    #[error("insufficient input: stream ended after {available} symbols, first unreachable checkpoint is n={first_unreachable}")]
    InsufficientInput { available: u64, first_unreachable: u64 },

    #[error("invalid checkpoint schedule: {reason}")]
    InvalidSchedule { reason: String },

    #[error(transparent)]
    Source(#[from] SourceError),

    #[error(transparent)]
    Measure(#[from] MeasureError),
}

impl EngineError {
    /// Stream offset the error refers to, when it has one.
    pub fn offset(&self) -> Option<u64> {
        match self {
            EngineError::InvalidSymbol { offset, .. } => Some(*offset),
            EngineError::InsufficientInput { available, .. } => Some(*available),
            EngineError::Source(SourceError::Decode { offset, .. }) => Some(*offset),
            _ => None,
        }
    }

    /// Shifts any embedded stream offset by `delta`. Used when a worker
    /// reports offsets relative to its own segment.
    pub(crate) fn offset_by(self, delta: u64) -> Self {
        match self {
            EngineError::InvalidSymbol { value, offset } => EngineError::InvalidSymbol {
                value,
                offset: offset + delta,
            },
            EngineError::InsufficientInput {
                available,
                first_unreachable,
            } => EngineError::InsufficientInput {
                available: available + delta,
                first_unreachable,
            },
            other => other,
        }
    }
}

/// Errors from report building and convergence verdicts.
#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("empty series: no checkpoint records to report on")]
    EmptySeries,

    #[error("incompatible measures: alphabet sizes {left} and {right} differ")]
    IncompatibleMeasure { left: u32, right: u32 },

    #[error("insufficient rows: report has {rows} rows but the verdict window is {window}")]
    InsufficientRows { rows: usize, window: usize },

    #[error("invalid window: window must be at least 1")]
    InvalidWindow,

    #[error("invalid epsilon: must be > 0")]
    InvalidEpsilon,

    #[error(transparent)]
    Measure(#[from] MeasureError),
}
