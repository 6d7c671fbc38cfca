//! Dataset ingestion, label binarization, encoding/normalization, sampling
//! and split plans.

pub mod cache;
pub mod dataset;
pub mod loader;
pub mod preprocess;
pub mod sample;
pub mod schema;
pub mod synth;

pub use cache::{load_cache, save_cache, CACHE_MAGIC};
pub use dataset::{ColumnVocab, Dataset};
pub use loader::{load_dataset, load_dataset_report, LoadReport};
pub use preprocess::{encode_and_normalize, Preprocessor};
pub use sample::{
    kfold_partitions, sample_stratified, split_holdout, split_holdout_stratified, SplitPlan,
};
pub use schema::{ColumnKind, ColumnRole, DatasetSchema, LabelClass, SchemaName};
