//! From-scratch machine-learning benchmark for flow-based intrusion
//! detection: CART, five tree ensembles and an MLP behind one classifier
//! interface, repeated hold-out / repeated k-fold validation with five
//! metrics plus timing, and Friedman + Nemenyi statistical comparison of
//! the results.

pub mod classifier;
pub mod data;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod mlp;
pub mod model_io;
pub mod seed;
pub mod stats;
pub mod tree;

pub use classifier::{Classifier, ClassifierKind, ClassifierSpec};
pub use error::{Error, Result};
pub use seed::derive_seed;
