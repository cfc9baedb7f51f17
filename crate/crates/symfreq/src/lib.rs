//! Exact symbol-frequency statistics over m-ary symbol streams.
//!
//! The crate counts symbol occurrences in prefixes of a stream, exposes the
//! resulting frequencies as exact rationals, and tracks how the empirical
//! measure of growing prefixes behaves across a checkpoint schedule. All
//! frequency and distance arithmetic is rational; floating point appears
//! only in entropy values and is computed identically on every platform.

mod alphabet;
mod analysis;
mod counts;
mod engine;
mod error;
pub mod fmt;
mod measure;
pub mod sources;

pub use alphabet::{Alphabet, Symbol};
pub use analysis::{
    build_report, verdict_simple_normality, ConvergenceReport, EvidenceRow, NormalityVerdict,
    ReportRow, ReportSummary, Verdict,
};
pub use counts::CountVector;
pub use engine::{
    count_stream, run_checkpointed, CheckpointRecord, CheckpointSchedule, CheckpointSeries,
    EngineConfig, StreamCounter,
};
pub use error::{AnalysisError, EngineError, MeasureError, SourceError};
pub use measure::{DistanceMetric, EmpiricalMeasure};

pub use num::BigRational;
