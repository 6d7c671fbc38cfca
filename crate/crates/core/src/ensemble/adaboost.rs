//! AdaBoost with depth-1 stumps (SAMME-style binary boosting).
//!
//! Each round fits the stump minimizing weighted misclassification over all
//! (feature, midpoint threshold, polarity) candidates, weighs it by
//! beta = lr * ln((1 - eps)/eps), bumps the weights of misclassified rows and
//! renormalizes. Stops early when eps hits 0 (perfect stump kept) or 0.5.

use serde::{Deserialize, Serialize};

use super::boost::{BoostDiagnostics, BoostKind, BoostModel};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::tree::{SplitRule, TreeNode};

const EPS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AdaBoostParams {
    pub n_estimators: usize,
    pub learning_rate: f64,
}

impl AdaBoostParams {
    /// Published benchmark settings: 50 estimators, 0.1 learning rate.
    pub fn published() -> Self {
        AdaBoostParams {
            n_estimators: 50,
            learning_rate: 0.1,
        }
    }
}

/// A weighted stump candidate: rows with value <= threshold predict
/// `left_label`, the rest predict its complement.
#[derive(Debug, Clone, Copy)]
struct Stump {
    feature: usize,
    threshold: f64,
    left_label: u8,
    weighted_error: f64,
}

impl Stump {
    fn predict(&self, x: &[f64]) -> u8 {
        if x[self.feature] <= self.threshold {
            self.left_label
        } else {
            1 - self.left_label
        }
    }

    fn to_tree(self) -> TreeNode {
        let leaf = |label: u8| TreeNode::Leaf {
            n_normal: u32::from(label == 0),
            n_attack: u32::from(label == 1),
            value: f64::from(label),
        };
        TreeNode::Internal {
            rule: SplitRule {
                feature_index: self.feature,
                threshold: self.threshold,
                gain: 0.5 - self.weighted_error,
            },
            left: Box::new(leaf(self.left_label)),
            right: Box::new(leaf(1 - self.left_label)),
        }
    }
}

/// Exhaustive weighted stump search. Candidates are visited in ascending
/// (feature, threshold) order with normal-left polarity first; acceptance is
/// strictly-better, so exact ties break deterministically.
fn best_stump(rows: &[Vec<f64>], labels: &[u8], weights: &[f64]) -> Option<Stump> {
    let n_features = rows.first()?.len();
    let total_attack: f64 = labels
        .iter()
        .zip(weights)
        .filter(|(&l, _)| l == 1)
        .map(|(_, &w)| w)
        .sum();
    let total_normal: f64 = weights.iter().sum::<f64>() - total_attack;

    let mut best: Option<Stump> = None;
    let mut order: Vec<usize> = (0..rows.len()).collect();
    for feature in 0..n_features {
        order.sort_by(|&a, &b| rows[a][feature].partial_cmp(&rows[b][feature]).unwrap());
        let mut left_attack = 0.0;
        let mut left_normal = 0.0;
        for pos in 0..order.len() - 1 {
            let i = order[pos];
            if labels[i] == 1 {
                left_attack += weights[i];
            } else {
                left_normal += weights[i];
            }
            let v = rows[i][feature];
            let v_next = rows[order[pos + 1]][feature];
            if v >= v_next {
                continue;
            }
            let threshold = v + 0.5 * (v_next - v);
            // left predicts normal: attacks on the left and normals on the right err
            let err_normal_left = left_attack + (total_normal - left_normal);
            // left predicts attack: complement
            let err_attack_left = left_normal + (total_attack - left_attack);
            for (left_label, err) in [(0u8, err_normal_left), (1u8, err_attack_left)] {
                if best.as_ref().is_none_or(|b| err < b.weighted_error) {
                    best = Some(Stump {
                        feature,
                        threshold,
                        left_label,
                        weighted_error: err,
                    });
                }
            }
        }
    }
    best
}

pub fn fit_adaboost(train: &Dataset, params: &AdaBoostParams, _seed: u64) -> Result<BoostModel> {
    if train.n_rows() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if !train.has_both_classes() {
        return Err(Error::SingleClassTrainingSet);
    }
    let rows = train.rows();
    let labels = train.labels();
    let n = rows.len();

    let mut weights = vec![1.0 / n as f64; n];
    let mut stages: Vec<(TreeNode, f64)> = Vec::new();
    let mut diagnostics = BoostDiagnostics::default();

    for _round in 0..params.n_estimators {
        let Some(stump) = best_stump(rows, labels, &weights) else {
            break; // no separating threshold exists at all
        };
        let eps = stump.weighted_error;
        if eps >= 0.5 {
            break;
        }
        let eps_clamped = eps.max(EPS_FLOOR);
        let beta = params.learning_rate * ((1.0 - eps_clamped) / eps_clamped).ln();
        stages.push((stump.to_tree(), beta));
        if eps <= EPS_FLOOR {
            // Perfect stump: keep it, then stop.
            diagnostics.weight_sums.push(weights.iter().sum());
            break;
        }

        // Reweight misclassified rows up, renormalize to sum 1.
        let factor = beta.exp();
        for i in 0..n {
            if stump.predict(&rows[i]) != labels[i] {
                weights[i] *= factor;
            }
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        diagnostics.weight_sums.push(weights.iter().sum());
    }

    Ok(BoostModel {
        kind: BoostKind::AdaBoost,
        stages,
        learning_rate: params.learning_rate,
        base_score: 0.0,
        n_features: train.n_features(),
        diagnostics,
    })
}
