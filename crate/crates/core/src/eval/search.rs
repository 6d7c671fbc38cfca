//! Random hyperparameter search scored by k-fold accuracy.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::validate::repeated_kfold;
use crate::classifier::{ClassifierKind, ClassifierSpec};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ParamRange {
    IntUniform {
        min: i64,
        max: i64,
    },
    IntChoice(Vec<i64>),
    FloatUniform {
        min: f64,
        max: f64,
    },
    /// Log-uniform over [min, max]; both must be positive.
    FloatLogUniform {
        min: f64,
        max: f64,
    },
}

impl ParamRange {
    fn draw(&self, rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
        match self {
            ParamRange::IntUniform { min, max } => rng.gen_range(*min..=*max) as f64,
            ParamRange::IntChoice(choices) => choices[rng.gen_range(0..choices.len())] as f64,
            ParamRange::FloatUniform { min, max } => rng.gen_range(*min..=*max),
            ParamRange::FloatLogUniform { min, max } => {
                let lo = min.ln();
                let hi = max.ln();
                rng.gen_range(lo..=hi).exp()
            }
        }
    }
}

/// Distributions per named hyperparameter of one classifier kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamSpace {
    pub kind: ClassifierKind,
    pub params: Vec<(String, ParamRange)>,
}

/// One sampled parameter combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamDraw {
    pub values: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best_spec: ClassifierSpec,
    pub best_draw: ParamDraw,
    pub best_cv_accuracy: f64,
    /// Every draw with its cross-validated accuracy, in draw order.
    pub evaluated: Vec<(ParamDraw, f64)>,
}

/// Set one named hyperparameter on a spec.
pub fn apply_param(spec: &mut ClassifierSpec, name: &str, value: f64) -> Result<()> {
    let unknown = || Error::UnknownParam(name.to_string());
    let as_usize = |v: f64| v.round().max(0.0) as usize;
    match spec {
        ClassifierSpec::Cart(p) => match name {
            "max_depth" => p.max_depth = as_usize(value).max(1),
            "min_leaf_size" => p.min_leaf_size = as_usize(value).max(1),
            "min_split_size" => p.min_split_size = as_usize(value),
            _ => return Err(unknown()),
        },
        ClassifierSpec::RandomForest(p) | ClassifierSpec::ExtraTrees(p) => match name {
            "n_estimators" => p.n_estimators = as_usize(value).max(1),
            "max_depth" => p.max_depth = as_usize(value).max(1),
            "min_leaf_size" => p.min_leaf_size = as_usize(value).max(1),
            "min_split_size" => p.min_split_size = as_usize(value),
            _ => return Err(unknown()),
        },
        ClassifierSpec::AdaBoost(p) => match name {
            "n_estimators" => p.n_estimators = as_usize(value).max(1),
            "learning_rate" => p.learning_rate = value,
            _ => return Err(unknown()),
        },
        ClassifierSpec::Gbm(p) => match name {
            "n_estimators" => p.n_estimators = as_usize(value).max(1),
            "max_depth" => p.max_depth = as_usize(value).max(1),
            "min_split_size" => p.min_split_size = as_usize(value),
            "min_leaf_size" => p.min_leaf_size = as_usize(value).max(1),
            "learning_rate" => p.learning_rate = value,
            _ => return Err(unknown()),
        },
        ClassifierSpec::RegularizedGb(p) => match name {
            "n_estimators" => p.n_estimators = as_usize(value).max(1),
            "max_depth" => p.max_depth = as_usize(value).max(1),
            "min_child_weight" => p.min_child_weight = value,
            "gamma" => p.gamma = value,
            "subsample" => p.subsample = value,
            "lambda" => p.lambda = value,
            "learning_rate" => p.learning_rate = value,
            _ => return Err(unknown()),
        },
        ClassifierSpec::Mlp(p) => match name {
            "hidden_size" => p.hidden_size = as_usize(value).max(1),
            "learning_rate" => p.learning_rate = value,
            "max_iter" => p.max_iter = as_usize(value),
            "batch_size" => p.batch_size = as_usize(value).max(1),
            _ => return Err(unknown()),
        },
    }
    Ok(())
}

/// Draw `budget` combinations, score each with k-fold accuracy, return the
/// argmax (exact ties keep the earliest draw).
pub fn random_search(
    space: &ParamSpace,
    budget: usize,
    ds: &Dataset,
    k: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    if space.params.is_empty() || budget == 0 {
        return Err(Error::EmptySpace);
    }
    let mut evaluated = Vec::with_capacity(budget);
    let mut best: Option<(ClassifierSpec, ParamDraw, f64)> = None;

    for trial in 0..budget {
        let mut rng = rng_from(derive_seed(seed, "search-draw", &[trial as u64]));
        let draw = ParamDraw {
            values: space
                .params
                .iter()
                .map(|(name, range)| (name.clone(), range.draw(&mut rng)))
                .collect(),
        };
        let mut spec = ClassifierSpec::published_default(space.kind);
        for (name, value) in &draw.values {
            apply_param(&mut spec, name, *value)?;
        }
        let report = repeated_kfold(
            &spec,
            ds,
            k,
            1,
            1,
            derive_seed(seed, "search-cv", &[trial as u64]),
        )?;
        let score = report.mean.accuracy.unwrap_or(0.0);
        evaluated.push((draw.clone(), score));
        if best.as_ref().is_none_or(|(_, _, s)| score > *s) {
            best = Some((spec, draw, score));
        }
    }
    let (best_spec, best_draw, best_cv_accuracy) = best.expect("budget >= 1");
    Ok(SearchOutcome {
        best_spec,
        best_draw,
        best_cv_accuracy,
        evaluated,
    })
}
