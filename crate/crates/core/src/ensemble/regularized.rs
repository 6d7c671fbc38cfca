//! Regularized gradient boosting (second-order, leaf-penalized).
//!
//! Each stage draws a row subsample without replacement, computes log-loss
//! gradients g = p - y and hessians h = p(1-p), and grows a tree greedily
//! where a leaf weighs w* = -G/(H + lambda) and a split is accepted only when
//! gain = 0.5 * [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)] - gamma
//! is positive and both children carry at least min_child_weight hessian mass.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::boost::{sigmoid, BoostDiagnostics, BoostKind, BoostModel};
use super::gbm::{log_loss, PROB_CLIP};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from};
use crate::tree::{SplitRule, TreeNode};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RegularizedGbParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub min_child_weight: f64,
    /// Minimum loss reduction required to split (the gamma of the penalty).
    pub gamma: f64,
    /// Row fraction drawn (without replacement) per stage.
    pub subsample: f64,
    /// L2 penalty on leaf weights.
    pub lambda: f64,
    pub learning_rate: f64,
}

impl RegularizedGbParams {
    /// Published benchmark settings: 100 estimators, depth 8, min child weight 1,
    /// gamma 2, subsample 0.6. Shrinkage and lambda are not stated in the
    /// source; 0.3 and 1 are the common library defaults.
    pub fn published() -> Self {
        RegularizedGbParams {
            n_estimators: 100,
            max_depth: 8,
            min_child_weight: 1.0,
            gamma: 2.0,
            subsample: 0.6,
            lambda: 1.0,
            learning_rate: 0.3,
        }
    }
}

/// Optimal leaf weight under the L2 penalty: -G / (H + lambda).
pub fn leaf_weight(g_sum: f64, h_sum: f64, lambda: f64) -> f64 {
    -g_sum / (h_sum + lambda)
}

/// Penalized gain of a split of (G, H) into (gl, hl) and (gr, hr).
pub fn split_gain(gl: f64, hl: f64, gr: f64, hr: f64, lambda: f64, gamma: f64) -> f64 {
    let score = |g: f64, h: f64| g * g / (h + lambda);
    0.5 * (score(gl, hl) + score(gr, hr) - score(gl + gr, hl + hr)) - gamma
}

fn grow(
    rows: &[Vec<f64>],
    grad: &[f64],
    hess: &[f64],
    idx: &[usize],
    depth: usize,
    params: &RegularizedGbParams,
) -> TreeNode {
    let g_sum: f64 = idx.iter().map(|&i| grad[i]).sum();
    let h_sum: f64 = idx.iter().map(|&i| hess[i]).sum();
    let leaf = || TreeNode::Leaf {
        n_normal: idx.len() as u32,
        n_attack: 0,
        value: leaf_weight(g_sum, h_sum, params.lambda),
    };
    if depth >= params.max_depth || idx.len() < 2 {
        return leaf();
    }

    // Exhaustive scan: features ascending, boundaries ascending, strictly
    // better acceptance for deterministic tie-breaks.
    let n_features = rows[idx[0]].len();
    let mut best: Option<SplitRule> = None;
    let mut order = idx.to_vec();
    for feature in 0..n_features {
        order.sort_by(|&a, &b| rows[a][feature].partial_cmp(&rows[b][feature]).unwrap());
        let mut gl = 0.0;
        let mut hl = 0.0;
        for pos in 0..order.len() - 1 {
            let i = order[pos];
            gl += grad[i];
            hl += hess[i];
            let v = rows[i][feature];
            let v_next = rows[order[pos + 1]][feature];
            if v >= v_next {
                continue;
            }
            let (gr, hr) = (g_sum - gl, h_sum - hl);
            if hl < params.min_child_weight || hr < params.min_child_weight {
                continue;
            }
            let gain = split_gain(gl, hl, gr, hr, params.lambda, params.gamma);
            if gain <= 0.0 {
                continue;
            }
            if best.as_ref().is_none_or(|b| gain > b.gain) {
                best = Some(SplitRule {
                    feature_index: feature,
                    threshold: v + 0.5 * (v_next - v),
                    gain,
                });
            }
        }
    }

    match best {
        None => leaf(),
        Some(rule) => {
            let (li, ri): (Vec<usize>, Vec<usize>) = idx
                .iter()
                .partition(|&&i| rows[i][rule.feature_index] <= rule.threshold);
            let left = grow(rows, grad, hess, &li, depth + 1, params);
            let right = grow(rows, grad, hess, &ri, depth + 1, params);
            TreeNode::Internal {
                rule,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

pub fn fit_regularized_gb(
    train: &Dataset,
    params: &RegularizedGbParams,
    seed: u64,
) -> Result<BoostModel> {
    if train.n_rows() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if !train.has_both_classes() {
        return Err(Error::SingleClassTrainingSet);
    }
    let rows = train.rows();
    let labels = train.labels();
    let n = rows.len();

    let attack_rate = labels.iter().filter(|&&l| l == 1).count() as f64 / n as f64;
    let p0 = attack_rate.clamp(PROB_CLIP, 1.0 - PROB_CLIP);
    let base_score = (p0 / (1.0 - p0)).ln();

    let sample_size = ((params.subsample * n as f64).round() as usize).clamp(1, n);
    let mut raw = vec![base_score; n];
    let mut stages = Vec::with_capacity(params.n_estimators);
    let mut diagnostics = BoostDiagnostics::default();

    for stage in 0..params.n_estimators {
        let probs: Vec<f64> = raw.iter().map(|&r| sigmoid(r)).collect();
        let grad: Vec<f64> = probs
            .iter()
            .zip(labels)
            .map(|(&p, &y)| p - f64::from(y))
            .collect();
        let hess: Vec<f64> = probs.iter().map(|&p| p * (1.0 - p)).collect();

        let mut sample: Vec<usize> = (0..n).collect();
        sample.shuffle(&mut rng_from(derive_seed(
            seed,
            "xgb-subsample",
            &[stage as u64],
        )));
        sample.truncate(sample_size);
        sample.sort_unstable();

        let tree = grow(rows, &grad, &hess, &sample, 0, params);
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
        kind: BoostKind::RegularizedGb,
        stages,
        learning_rate: params.learning_rate,
        base_score,
        n_features: train.n_features(),
        diagnostics,
    })
}
