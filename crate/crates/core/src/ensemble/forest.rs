//! Random forest and extremely randomized trees.
//!
//! Trees are fitted in parallel with per-tree RNG streams derived from the
//! master seed, so the model is identical for any worker count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from};
use crate::tree::{fit_tree_on, predict_tree, SplitMode, TreeNode, TreeParams, TreeTask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureSubset {
    All,
    /// floor(sqrt(q)) — the usual random-forest default.
    Sqrt,
    /// ceil(log2(q)) — used for extra trees.
    Log2,
    Fixed(usize),
}

impl FeatureSubset {
    pub fn resolve(&self, n_features: usize) -> Option<usize> {
        let m = match self {
            FeatureSubset::All => return None,
            FeatureSubset::Sqrt => (n_features as f64).sqrt().floor() as usize,
            FeatureSubset::Log2 => (n_features as f64).log2().ceil() as usize,
            FeatureSubset::Fixed(m) => *m,
        };
        Some(m.clamp(1, n_features))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub min_leaf_size: usize,
    pub min_split_size: usize,
    pub feature_subset: FeatureSubset,
    pub bootstrap: bool,
    pub split_mode: SplitMode,
}

impl ForestParams {
    /// Published benchmark settings for RF: 500 estimators, depth 26, bootstrap resamples,
    /// sqrt feature subset.
    pub fn random_forest_published() -> Self {
        ForestParams {
            n_estimators: 500,
            max_depth: 26,
            min_leaf_size: 1,
            min_split_size: 2,
            feature_subset: FeatureSubset::Sqrt,
            bootstrap: true,
            split_mode: SplitMode::Best,
        }
    }

    /// Published benchmark settings for ETC: 1788 estimators, depth 10, min split 5, full
    /// training sample per tree (no bootstrapping), random cut-points.
    pub fn extra_trees_published() -> Self {
        ForestParams {
            n_estimators: 1788,
            max_depth: 10,
            min_leaf_size: 1,
            min_split_size: 5,
            feature_subset: FeatureSubset::Log2,
            bootstrap: false,
            split_mode: SplitMode::RandomCut,
        }
    }

    fn tree_params(&self, n_features: usize) -> TreeParams {
        TreeParams {
            max_depth: self.max_depth,
            min_leaf_size: self.min_leaf_size,
            min_split_size: self.min_split_size,
            feature_subset: self.feature_subset.resolve(n_features),
            split_mode: self.split_mode,
            task: TreeTask::ClassifyGini,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ForestModel {
    pub trees: Vec<TreeNode>,
    pub params: ForestParams,
    pub n_features: usize,
    pub seed: u64,
}

impl ForestModel {
    /// Mean of per-tree attack probabilities and the majority vote
    /// (vote tie -> normal).
    pub fn predict(&self, x: &[f64]) -> Result<(u8, f64)> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let mut votes_attack = 0usize;
        let mut score_sum = 0.0;
        for tree in &self.trees {
            let (label, score) = predict_tree(tree, x);
            votes_attack += usize::from(label == 1);
            score_sum += score;
        }
        let n = self.trees.len();
        let label = u8::from(2 * votes_attack > n);
        Ok((label, score_sum / n as f64))
    }
}

fn fit_forest(
    train: &Dataset,
    params: &ForestParams,
    seed: u64,
    stream_name: &str,
) -> Result<ForestModel> {
    if train.n_rows() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if params.n_estimators == 0 {
        return Err(Error::BadParams("n_estimators must be >= 1".into()));
    }
    let n = train.n_rows();
    let tree_params = params.tree_params(train.n_features());
    let targets: Vec<f64> = train.labels().iter().map(|&l| f64::from(l)).collect();

    let trees: Result<Vec<TreeNode>> = (0..params.n_estimators)
        .into_par_iter()
        .map(|t| {
            let tree_seed = derive_seed(seed, stream_name, &[t as u64]);
            let indices: Vec<usize> = if params.bootstrap {
                let mut rng = rng_from(derive_seed(tree_seed, "bootstrap", &[]));
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            fit_tree_on(train.rows(), &targets, &indices, &tree_params, tree_seed)
        })
        .collect();

    Ok(ForestModel {
        trees: trees?,
        params: *params,
        n_features: train.n_features(),
        seed,
    })
}

pub fn fit_random_forest(train: &Dataset, params: &ForestParams, seed: u64) -> Result<ForestModel> {
    fit_forest(train, params, seed, "rf-tree")
}

pub fn fit_extra_trees(train: &Dataset, params: &ForestParams, seed: u64) -> Result<ForestModel> {
    fit_forest(train, params, seed, "etc-tree")
}
