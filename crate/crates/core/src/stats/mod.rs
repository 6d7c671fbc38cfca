//! Friedman omnibus and Nemenyi post-hoc tests over a datasets x classifiers
//! results matrix.

pub mod dist;
pub mod friedman;
pub mod nemenyi;
pub mod rank;
pub mod report;

pub use friedman::{decide, friedman, Decision, FriedmanResult, DEFAULT_ALPHAS};
pub use nemenyi::{nemenyi, NemenyiResult, PairComparison};
pub use rank::{rank_rows, Direction, RankMatrix, ResultsMatrix};
pub use report::{compute_stats, stats_from_ranks, MetricStats, TestReport};
