//! Gradient boosted machine for binary log-loss.
//!
//! Stage m fits an MSE regression tree to the residuals y_i - p_i (the
//! negative log-loss gradient), then replaces each leaf's mean with the
//! Newton step sum(residual) / sum(p(1-p)) over the rows it covers, and the
//! additive model advances by learning_rate times the leaf value.

use serde::{Deserialize, Serialize};

use super::boost::{sigmoid, BoostDiagnostics, BoostKind, BoostModel};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::tree::{fit_tree_on, SplitMode, TreeNode, TreeParams, TreeTask};

/// Probability clipping bounds for the log-loss (avoids log(0)).
pub const PROB_CLIP: f64 = 1e-15;
const HESSIAN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GbmParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub min_split_size: usize,
    pub min_leaf_size: usize,
    pub learning_rate: f64,
}

impl GbmParams {
    /// Published benchmark settings: 500 estimators, depth 3, min 100 samples to split,
    /// 0.1 learning rate.
    pub fn published() -> Self {
        GbmParams {
            n_estimators: 500,
            max_depth: 3,
            min_split_size: 100,
            min_leaf_size: 1,
            learning_rate: 0.1,
        }
    }
}

/// Binary cross-entropy: -(1/N) * sum(y ln p + (1-y) ln(1-p)), with p
/// clipped into [PROB_CLIP, 1-PROB_CLIP].
pub fn log_loss(probs: &[f64], labels: &[u8]) -> f64 {
    debug_assert_eq!(probs.len(), labels.len());
    let n = probs.len() as f64;
    let sum: f64 = probs
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = p.clamp(PROB_CLIP, 1.0 - PROB_CLIP);
            if y == 1 {
                p.ln()
            } else {
                (1.0 - p).ln()
            }
        })
        .sum();
    -sum / n
}

/// Replace each leaf's value using `f(rows in leaf)`; rows are routed with
/// the tree's own rules.
fn rewrite_leaves(
    node: &mut TreeNode,
    idx: Vec<usize>,
    rows: &[Vec<f64>],
    f: &impl Fn(&[usize]) -> f64,
) {
    match node {
        TreeNode::Leaf { value, .. } => *value = f(&idx),
        TreeNode::Internal { rule, left, right } => {
            let (li, ri): (Vec<usize>, Vec<usize>) = idx
                .into_iter()
                .partition(|&i| rows[i][rule.feature_index] <= rule.threshold);
            rewrite_leaves(left, li, rows, f);
            rewrite_leaves(right, ri, rows, f);
        }
    }
}

pub fn fit_gbm(train: &Dataset, params: &GbmParams, seed: u64) -> Result<BoostModel> {
    if train.n_rows() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if !train.has_both_classes() {
        return Err(Error::SingleClassTrainingSet);
    }
    let rows = train.rows();
    let labels = train.labels();
    let n = rows.len();
    let all: Vec<usize> = (0..n).collect();

    let attack_rate = labels.iter().filter(|&&l| l == 1).count() as f64 / n as f64;
    let p0 = attack_rate.clamp(PROB_CLIP, 1.0 - PROB_CLIP);
    let base_score = (p0 / (1.0 - p0)).ln();

    let tree_params = TreeParams {
        max_depth: params.max_depth,
        min_leaf_size: params.min_leaf_size,
        min_split_size: params.min_split_size,
        feature_subset: None,
        split_mode: SplitMode::Best,
        task: TreeTask::RegressMse,
    };

    let mut raw = vec![base_score; n];
    let mut stages = Vec::with_capacity(params.n_estimators);
    let mut diagnostics = BoostDiagnostics::default();

    for stage in 0..params.n_estimators {
        let probs: Vec<f64> = raw.iter().map(|&r| sigmoid(r)).collect();
        let residuals: Vec<f64> = probs
            .iter()
            .zip(labels)
            .map(|(&p, &y)| f64::from(y) - p)
            .collect();

        let mut tree = fit_tree_on(
            rows,
            &residuals,
            &all,
            &tree_params,
            derive_seed(seed, "gbm-stage", &[stage as u64]),
        )?;
        rewrite_leaves(&mut tree, all.clone(), rows, &|leaf_rows| {
            let num: f64 = leaf_rows.iter().map(|&i| residuals[i]).sum();
            let den: f64 = leaf_rows.iter().map(|&i| probs[i] * (1.0 - probs[i])).sum();
            num / den.max(HESSIAN_FLOOR)
        });

        for (i, r) in raw.iter_mut().enumerate() {
            *r += params.learning_rate * tree.value_at(&rows[i]);
        }
        stages.push((tree, 1.0));

        let stage_probs: Vec<f64> = raw.iter().map(|&r| sigmoid(r)).collect();
        diagnostics
            .stage_train_loss
            .push(log_loss(&stage_probs, labels));
    }

    Ok(BoostModel {
        kind: BoostKind::Gbm,
        stages,
        learning_rate: params.learning_rate,
        base_score,
        n_features: train.n_features(),
        diagnostics,
    })
}
