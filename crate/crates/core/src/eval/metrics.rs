//! Confusion matrix, the five evaluation metrics and AUC.
//!
//! Attack is the positive class: TP counts correctly classified attacks,
//! TN correctly classified normals. Metrics with a zero denominator are
//! reported as undefined (never silently 0 or 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }
}

pub fn confusion(preds: &[u8], truth: &[u8]) -> Result<ConfusionMatrix> {
    if preds.len() != truth.len() {
        return Err(Error::LengthMismatch {
            preds: preds.len(),
            truth: truth.len(),
        });
    }
    if preds.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut cm = ConfusionMatrix {
        tp: 0,
        tn: 0,
        fp: 0,
        fn_: 0,
    };
    for (&p, &t) in preds.iter().zip(truth) {
        match (t, p) {
            (1, 1) => cm.tp += 1,
            (0, 0) => cm.tn += 1,
            (0, 1) => cm.fp += 1,
            (1, 0) => cm.fn_ += 1,
            _ => unreachable!("labels are binary"),
        }
    }
    Ok(cm)
}

/// The four confusion-derived rates; each is None when its denominator is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmRates {
    pub accuracy: Option<f64>,
    pub specificity: Option<f64>,
    pub sensitivity: Option<f64>,
    pub fpr: Option<f64>,
}

impl CmRates {
    pub fn accuracy(&self) -> Result<f64> {
        self.accuracy.ok_or(Error::UndefinedMetric("accuracy"))
    }

    pub fn specificity(&self) -> Result<f64> {
        self.specificity
            .ok_or(Error::UndefinedMetric("specificity"))
    }

    pub fn sensitivity(&self) -> Result<f64> {
        self.sensitivity
            .ok_or(Error::UndefinedMetric("sensitivity"))
    }

    pub fn fpr(&self) -> Result<f64> {
        self.fpr.ok_or(Error::UndefinedMetric("fpr"))
    }
}

/// accuracy = (TP+TN)/all, specificity = TN/(TN+FP),
/// sensitivity = TP/(TP+FN), FPR = FP/(TN+FP).
pub fn metrics_from_cm(cm: &ConfusionMatrix) -> CmRates {
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            None
        } else {
            Some(num as f64 / den as f64)
        }
    };
    CmRates {
        accuracy: ratio(cm.tp + cm.tn, cm.total()),
        specificity: ratio(cm.tn, cm.tn + cm.fp),
        sensitivity: ratio(cm.tp, cm.tp + cm.fn_),
        fpr: ratio(cm.fp, cm.tn + cm.fp),
    }
}

/// Area under the ROC curve by threshold sweep with trapezoidal integration;
/// tied scores collapse into one threshold step, which makes this the
/// Mann-Whitney statistic with half credit for cross-class ties.
pub fn auc(scores: &[f64], truth: &[u8]) -> Result<f64> {
    if scores.len() != truth.len() {
        return Err(Error::LengthMismatch {
            preds: scores.len(),
            truth: truth.len(),
        });
    }
    let positives = truth.iter().filter(|&&t| t == 1).count();
    let negatives = truth.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClassTruth);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap());

    let (p, n) = (positives as f64, negatives as f64);
    let mut area = 0.0;
    let (mut tp, mut fp) = (0u64, 0u64);
    let (mut prev_tpr, mut prev_fpr) = (0.0f64, 0.0f64);
    let mut i = 0;
    while i < order.len() {
        // Consume the whole tie group at this score.
        let score = scores[order[i]];
        while i < order.len() && scores[order[i]] == score {
            if truth[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let tpr = tp as f64 / p;
        let fpr = fp as f64 / n;
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    Ok(area)
}

/// One evaluated round: the five metrics plus timing figures. Metric fields
/// are None when undefined for that round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub accuracy: Option<f64>,
    pub specificity: Option<f64>,
    pub sensitivity: Option<f64>,
    pub fpr: Option<f64>,
    pub auc: Option<f64>,
    /// Model build time for this round's fit.
    pub mbt_seconds: f64,
    /// Per-instance classification time.
    pub avg_response_seconds: f64,
}

impl MetricSet {
    pub const METRIC_NAMES: [&'static str; 5] =
        ["accuracy", "specificity", "sensitivity", "fpr", "auc"];

    pub fn metric(&self, name: &str) -> Option<f64> {
        match name {
            "accuracy" => self.accuracy,
            "specificity" => self.specificity,
            "sensitivity" => self.sensitivity,
            "fpr" => self.fpr,
            "auc" => self.auc,
            "mbt" => Some(self.mbt_seconds),
            "response" => Some(self.avg_response_seconds),
            _ => None,
        }
    }

    /// Arithmetic mean over rounds, per field; undefined rounds are skipped
    /// and a field is None only when undefined everywhere.
    pub fn mean_of(rounds: &[MetricSet]) -> MetricSet {
        fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
            let defined: Vec<f64> = values.flatten().collect();
            if defined.is_empty() {
                None
            } else {
                Some(defined.iter().sum::<f64>() / defined.len() as f64)
            }
        }
        MetricSet {
            accuracy: mean(rounds.iter().map(|m| m.accuracy)),
            specificity: mean(rounds.iter().map(|m| m.specificity)),
            sensitivity: mean(rounds.iter().map(|m| m.sensitivity)),
            fpr: mean(rounds.iter().map(|m| m.fpr)),
            auc: mean(rounds.iter().map(|m| m.auc)),
            mbt_seconds: rounds.iter().map(|m| m.mbt_seconds).sum::<f64>()
                / rounds.len().max(1) as f64,
            avg_response_seconds: rounds.iter().map(|m| m.avg_response_seconds).sum::<f64>()
                / rounds.len().max(1) as f64,
        }
    }
}
