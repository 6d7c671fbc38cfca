//! Nemenyi post-hoc pairwise comparison.
//!
//! gamma_xy = |mean_rank_x - mean_rank_y| / sqrt(k(k+1) / (6d)); the adjusted
//! p-value is the two-sided normal tail Bonferroni-corrected over all
//! k(k-1)/2 pairs: p = min(1, (k(k-1)/2) * 2 * (1 - Phi(gamma))).

use serde::{Deserialize, Serialize};

use super::dist::std_normal_cdf;
use super::friedman::{decide, Decision};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairComparison {
    pub x: String,
    pub y: String,
    pub gamma: f64,
    pub p_adjusted: f64,
    pub decisions: Vec<(f64, Decision)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NemenyiResult {
    pub pairs: Vec<PairComparison>,
}

impl NemenyiResult {
    /// Find a comparison by its unordered label pair.
    pub fn pair(&self, a: &str, b: &str) -> Option<&PairComparison> {
        self.pairs
            .iter()
            .find(|p| (p.x == a && p.y == b) || (p.x == b && p.y == a))
    }
}

/// All k(k-1)/2 pairwise comparisons of the classifiers' mean ranks over d
/// datasets, in (x, y) index order.
pub fn nemenyi(mean_ranks: &[f64], labels: &[String], d: usize, alphas: &[f64]) -> NemenyiResult {
    debug_assert_eq!(mean_ranks.len(), labels.len());
    let k = mean_ranks.len();
    let denom = (k as f64 * (k as f64 + 1.0) / (6.0 * d as f64)).sqrt();
    let n_pairs = (k * (k - 1) / 2) as f64;
    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    for x in 0..k {
        for y in (x + 1)..k {
            let gamma = (mean_ranks[x] - mean_ranks[y]).abs() / denom;
            let p_adjusted = (n_pairs * 2.0 * (1.0 - std_normal_cdf(gamma))).min(1.0);
            pairs.push(PairComparison {
                x: labels[x].clone(),
                y: labels[y].clone(),
                gamma,
                p_adjusted,
                decisions: decide(p_adjusted, alphas),
            });
        }
    }
    NemenyiResult { pairs }
}
