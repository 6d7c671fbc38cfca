//! Shared additive-model container for the three boosting variants.

use crate::error::{Error, Result};
use crate::tree::{predict_tree, TreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoostKind {
    AdaBoost,
    Gbm,
    RegularizedGb,
}

/// Per-fit diagnostics kept out of the model file.
#[derive(Debug, Clone, Default)]
pub struct BoostDiagnostics {
    /// AdaBoost: instance-weight sum after each round's renormalization.
    pub weight_sums: Vec<f64>,
    /// GBM / regularized GB: training log-loss after each stage.
    pub stage_train_loss: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BoostModel {
    pub kind: BoostKind,
    /// (stage tree, stage weight). AdaBoost weights are the beta_p
    /// coefficients; gradient variants keep 1.0 and store real leaf values.
    pub stages: Vec<(TreeNode, f64)>,
    pub learning_rate: f64,
    /// Log-odds prior for the gradient variants; 0 for AdaBoost.
    pub base_score: f64,
    pub n_features: usize,
    pub diagnostics: BoostDiagnostics,
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl BoostModel {
    pub fn check_dims(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Raw additive output: AdaBoost margin, or log-odds for the gradient
    /// variants (before the sigmoid).
    pub fn raw_output(&self, x: &[f64]) -> f64 {
        match self.kind {
            BoostKind::AdaBoost => self
                .stages
                .iter()
                .map(|(tree, beta)| {
                    let (label, _) = predict_tree(tree, x);
                    let sign = if label == 1 { 1.0 } else { -1.0 };
                    beta * sign
                })
                .sum(),
            BoostKind::Gbm | BoostKind::RegularizedGb => {
                let sum: f64 = self.stages.iter().map(|(tree, _)| tree.value_at(x)).sum();
                self.base_score + self.learning_rate * sum
            }
        }
    }

    /// (label, attack score). AdaBoost maps its margin into [0,1] by
    /// normalizing with the total stage weight (margin 0 -> 0.5 -> normal);
    /// gradient variants apply the sigmoid and threshold at 0.5.
    pub fn predict(&self, x: &[f64]) -> Result<(u8, f64)> {
        self.check_dims(x)?;
        let raw = self.raw_output(x);
        match self.kind {
            BoostKind::AdaBoost => {
                let total: f64 = self.stages.iter().map(|(_, b)| b.abs()).sum();
                let score = if total > 0.0 {
                    0.5 * (1.0 + raw / total)
                } else {
                    0.5
                };
                Ok((u8::from(raw > 0.0), score))
            }
            BoostKind::Gbm | BoostKind::RegularizedGb => {
                let score = sigmoid(raw);
                Ok((u8::from(score > 0.5), score))
            }
        }
    }
}
