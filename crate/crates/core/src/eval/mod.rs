//! Metrics, validation protocols, hyperparameter search and timing.

pub mod metrics;
pub mod report_io;
pub mod search;
pub mod timing;
pub mod validate;

pub use metrics::{auc, confusion, metrics_from_cm, CmRates, ConfusionMatrix, MetricSet};
pub use search::{random_search, ParamDraw, ParamRange, ParamSpace, SearchOutcome};
pub use timing::{measure_mbt, measure_response_time};
pub use validate::{
    evaluate_split, repeated_holdout, repeated_kfold, run_plan, run_plan_with, ModelStore,
    RoundRecord, RunMode, ValidationConfig, ValidationReport,
};
