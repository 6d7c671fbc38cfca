//! Tree ensembles: random forest, extremely randomized trees, AdaBoost,
//! gradient boosting and regularized gradient boosting, all built on the
//! CART learner and sharing one prediction surface.

pub mod adaboost;
pub mod boost;
pub mod forest;
pub mod gbm;
pub mod regularized;

pub use adaboost::{fit_adaboost, AdaBoostParams};
pub use boost::{BoostKind, BoostModel};
pub use forest::{fit_extra_trees, fit_random_forest, ForestModel, ForestParams};
pub use gbm::{fit_gbm, log_loss, GbmParams};
pub use regularized::{fit_regularized_gb, RegularizedGbParams};
