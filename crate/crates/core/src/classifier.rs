//! One fit/predict surface over the seven classifiers.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::ensemble::{
    fit_adaboost, fit_extra_trees, fit_gbm, fit_random_forest, fit_regularized_gb, AdaBoostParams,
    BoostModel, ForestModel, ForestParams, GbmParams, RegularizedGbParams,
};
use crate::error::{Error, Result};
use crate::mlp::{fit_mlp, MlpModel, MlpParams};
use crate::tree::{fit_cart, CartModel, TreeParams};

/// Uniform prediction interface of a fitted model.
pub trait Classifier: Send + Sync {
    /// (label, attack score). Label decisions follow each family's vote /
    /// threshold rule; scores are always P(attack) in [0, 1].
    fn predict(&self, x: &[f64]) -> Result<(u8, f64)>;
    fn n_features(&self) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    Cart,
    RandomForest,
    ExtraTrees,
    AdaBoost,
    Gbm,
    RegularizedGb,
    Mlp,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 7] = [
        ClassifierKind::RandomForest,
        ClassifierKind::Cart,
        ClassifierKind::Mlp,
        ClassifierKind::AdaBoost,
        ClassifierKind::Gbm,
        ClassifierKind::RegularizedGb,
        ClassifierKind::ExtraTrees,
    ];

    /// Short display name used in reports and result tables.
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::Cart => "CART",
            ClassifierKind::RandomForest => "RF",
            ClassifierKind::ExtraTrees => "ETC",
            ClassifierKind::AdaBoost => "AB",
            ClassifierKind::Gbm => "GBM",
            ClassifierKind::RegularizedGb => "XGB",
            ClassifierKind::Mlp => "MLP",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "cart" => ClassifierKind::Cart,
            "rf" | "random_forest" | "randomforest" => ClassifierKind::RandomForest,
            "etc" | "extra_trees" | "extratrees" => ClassifierKind::ExtraTrees,
            "ab" | "adaboost" => ClassifierKind::AdaBoost,
            "gbm" => ClassifierKind::Gbm,
            "xgb" | "regularized_gb" => ClassifierKind::RegularizedGb,
            "mlp" => ClassifierKind::Mlp,
            _ => return None,
        })
    }
}

impl std::fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A classifier choice plus its hyperparameters; fitting one yields a
/// [`TrainedModel`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ClassifierSpec {
    Cart(TreeParams),
    RandomForest(ForestParams),
    ExtraTrees(ForestParams),
    AdaBoost(AdaBoostParams),
    Gbm(GbmParams),
    RegularizedGb(RegularizedGbParams),
    Mlp(MlpParams),
}

impl ClassifierSpec {
    /// The published benchmark hyperparameters for each classifier.
    pub fn published_default(kind: ClassifierKind) -> Self {
        match kind {
            ClassifierKind::Cart => ClassifierSpec::Cart(TreeParams::cart_published()),
            ClassifierKind::RandomForest => {
                ClassifierSpec::RandomForest(ForestParams::random_forest_published())
            }
            ClassifierKind::ExtraTrees => {
                ClassifierSpec::ExtraTrees(ForestParams::extra_trees_published())
            }
            ClassifierKind::AdaBoost => ClassifierSpec::AdaBoost(AdaBoostParams::published()),
            ClassifierKind::Gbm => ClassifierSpec::Gbm(GbmParams::published()),
            ClassifierKind::RegularizedGb => {
                ClassifierSpec::RegularizedGb(RegularizedGbParams::published())
            }
            ClassifierKind::Mlp => ClassifierSpec::Mlp(MlpParams::published()),
        }
    }

    pub fn kind(&self) -> ClassifierKind {
        match self {
            ClassifierSpec::Cart(_) => ClassifierKind::Cart,
            ClassifierSpec::RandomForest(_) => ClassifierKind::RandomForest,
            ClassifierSpec::ExtraTrees(_) => ClassifierKind::ExtraTrees,
            ClassifierSpec::AdaBoost(_) => ClassifierKind::AdaBoost,
            ClassifierSpec::Gbm(_) => ClassifierKind::Gbm,
            ClassifierSpec::RegularizedGb(_) => ClassifierKind::RegularizedGb,
            ClassifierSpec::Mlp(_) => ClassifierKind::Mlp,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Reduced-ensemble profile for commodity hardware: RF 100 trees,
    /// ETC 200 trees; everything else unchanged.
    pub fn desk_scale(mut self) -> Self {
        match &mut self {
            ClassifierSpec::RandomForest(p) => p.n_estimators = p.n_estimators.min(100),
            ClassifierSpec::ExtraTrees(p) => p.n_estimators = p.n_estimators.min(200),
            _ => {}
        }
        self
    }

    pub fn fit(&self, train: &Dataset, seed: u64) -> Result<TrainedModel> {
        Ok(match self {
            ClassifierSpec::Cart(p) => TrainedModel::Cart(fit_cart(train, p, seed)?),
            ClassifierSpec::RandomForest(p) => {
                TrainedModel::Forest(fit_random_forest(train, p, seed)?)
            }
            ClassifierSpec::ExtraTrees(p) => TrainedModel::Forest(fit_extra_trees(train, p, seed)?),
            ClassifierSpec::AdaBoost(p) => TrainedModel::Boost(fit_adaboost(train, p, seed)?),
            ClassifierSpec::Gbm(p) => TrainedModel::Boost(fit_gbm(train, p, seed)?),
            ClassifierSpec::RegularizedGb(p) => {
                TrainedModel::Boost(fit_regularized_gb(train, p, seed)?)
            }
            ClassifierSpec::Mlp(p) => TrainedModel::Mlp(fit_mlp(train, p, seed)?),
        })
    }
}

#[derive(Debug, Clone)]
pub enum TrainedModel {
    Cart(CartModel),
    Forest(ForestModel),
    Boost(BoostModel),
    Mlp(MlpModel),
}

impl Classifier for TrainedModel {
    fn predict(&self, x: &[f64]) -> Result<(u8, f64)> {
        match self {
            TrainedModel::Cart(m) => m.predict(x),
            TrainedModel::Forest(m) => m.predict(x),
            TrainedModel::Boost(m) => m.predict(x),
            TrainedModel::Mlp(m) => m.predict(x),
        }
    }

    fn n_features(&self) -> usize {
        match self {
            TrainedModel::Cart(m) => m.n_features,
            TrainedModel::Forest(m) => m.n_features,
            TrainedModel::Boost(m) => m.n_features,
            TrainedModel::Mlp(m) => m.n_features,
        }
    }
}

impl TrainedModel {
    /// Batch scores; errors on the first dimension mismatch.
    pub fn scores(&self, ds: &Dataset) -> Result<Vec<f64>> {
        ds.rows().iter().map(|r| Ok(self.predict(r)?.1)).collect()
    }

    /// Batch labels.
    pub fn labels(&self, ds: &Dataset) -> Result<Vec<u8>> {
        ds.rows().iter().map(|r| Ok(self.predict(r)?.0)).collect()
    }
}

/// Convenience check shared by callers that need both classes present.
pub fn require_both_classes(ds: &Dataset) -> Result<()> {
    if ds.has_both_classes() {
        Ok(())
    } else {
        Err(Error::SingleClassTrainingSet)
    }
}
