//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by dataset handling, model fitting, evaluation and statistics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("schema mismatch: column {0:?}")]
    SchemaMismatch(String),

    #[error("invalid schema descriptor: {0}")]
    InvalidSchema(String),

    #[error("{skipped} of {total} rows unparseable (> {limit_percent}% limit); first errors: {sample:?}")]
    TooManyBadRows {
        skipped: usize,
        total: usize,
        limit_percent: f64,
        sample: Vec<String>,
    },

    #[error("insufficient {class} instances: {available} available, {requested} requested")]
    InsufficientInstances {
        class: &'static str,
        available: usize,
        requested: usize,
    },

    #[error("train fraction must be in (0, 1), got {0}")]
    BadTrainFraction(f64),

    #[error("k-fold: k={k} invalid for {n} rows (need 2 <= k <= n)")]
    KTooLarge { k: usize, n: usize },

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("empty test set")]
    EmptyTestSet,

    #[error("empty node: impurity of zero instances is undefined")]
    EmptyNode,

    #[error("training set contains a single class")]
    SingleClassTrainingSet,

    #[error("feature count mismatch: model expects {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("prediction/truth length mismatch: {preds} vs {truth}")]
    LengthMismatch { preds: usize, truth: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("metric {0} undefined: zero denominator")]
    UndefinedMetric(&'static str),

    #[error("AUC undefined: truth contains a single class")]
    SingleClassTruth,

    #[error("empty hyperparameter space")]
    EmptySpace,

    #[error("unknown hyperparameter {0:?} for this classifier")]
    UnknownParam(String),

    #[error("invalid hyperparameters: {0}")]
    BadParams(String),

    #[error("results matrix needs d >= 2 and k >= 2, got {d}x{k}")]
    MatrixTooSmall { d: usize, k: usize },

    #[error("degenerate Friedman statistic: d(k-1) equals Q = {q}")]
    DegenerateStatistic { q: f64 },

    #[error("malformed model file: {0}")]
    BadModelFile(String),

    #[error("malformed cache file: {0}")]
    BadCacheFile(String),

    #[error("malformed results matrix: {0}")]
    BadResultsMatrix(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
