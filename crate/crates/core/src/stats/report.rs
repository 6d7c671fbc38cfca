//! Combined significance report over one or more metrics, with CSV and JSON
//! emitters shaped like the comparison tables the harness reproduces
//! (omnibus statistics, mean ranks, pairwise comparisons).

use serde_json::json;

use super::friedman::{friedman, FriedmanResult};
use super::nemenyi::{nemenyi, NemenyiResult};
use super::rank::{rank_rows, RankMatrix, ResultsMatrix};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct MetricStats {
    pub metric: String,
    pub mean_ranks: Vec<f64>,
    pub friedman: std::result::Result<FriedmanResult, String>,
    pub nemenyi: NemenyiResult,
}

#[derive(Debug, Clone)]
pub struct TestReport {
    pub classifier_labels: Vec<String>,
    pub alphas: Vec<f64>,
    pub metrics: Vec<MetricStats>,
}

/// Run Friedman + Nemenyi per metric matrix. A degenerate Friedman statistic
/// (perfect agreement) is reported as such, not dropped.
pub fn compute_stats(matrices: &[(String, ResultsMatrix)], alphas: &[f64]) -> Result<TestReport> {
    let mut metrics = Vec::with_capacity(matrices.len());
    let mut classifier_labels = Vec::new();
    for (name, matrix) in matrices {
        classifier_labels = matrix.classifier_labels.clone();
        let ranks = rank_rows(matrix);
        metrics.push(stats_from_ranks(
            name,
            &ranks,
            &matrix.classifier_labels,
            alphas,
        ));
    }
    Ok(TestReport {
        classifier_labels,
        alphas: alphas.to_vec(),
        metrics,
    })
}

/// Same, but starting from an existing rank matrix (e.g. published mean ranks).
pub fn stats_from_ranks(
    metric: &str,
    ranks: &RankMatrix,
    labels: &[String],
    alphas: &[f64],
) -> MetricStats {
    MetricStats {
        metric: metric.to_string(),
        mean_ranks: ranks.mean_ranks.clone(),
        friedman: friedman(ranks, alphas).map_err(|e| e.to_string()),
        nemenyi: nemenyi(&ranks.mean_ranks, labels, ranks.d, alphas),
    }
}

impl TestReport {
    /// Omnibus table: one column per metric, rows F-Statistic / p-value /
    /// one decision row per alpha.
    pub fn friedman_csv(&self) -> String {
        let mut out = String::from("statistic");
        for m in &self.metrics {
            out.push(',');
            out.push_str(&m.metric);
        }
        out.push('\n');
        let row = |label: &str, f: &dyn Fn(&MetricStats) -> String| {
            let mut line = label.to_string();
            for m in &self.metrics {
                line.push(',');
                line.push_str(&f(m));
            }
            line.push('\n');
            line
        };
        out.push_str(&row("F-Statistic", &|m| match &m.friedman {
            Ok(r) => format!("{:.4}", r.f_statistic),
            Err(_) => "degenerate".into(),
        }));
        out.push_str(&row("p-value", &|m| match &m.friedman {
            Ok(r) => format!("{:.4}", r.p_value),
            Err(_) => "degenerate".into(),
        }));
        for (i, alpha) in self.alphas.iter().enumerate() {
            out.push_str(&row(&format!("alpha={alpha}"), &|m| match &m.friedman {
                Ok(r) => r.decisions[i].1.mark().to_string(),
                Err(_) => "-".into(),
            }));
        }
        out
    }

    /// Mean-rank table: one row per classifier, one column per metric.
    pub fn mean_ranks_csv(&self) -> String {
        let mut out = String::from("classifier");
        for m in &self.metrics {
            out.push(',');
            out.push_str(&m.metric);
        }
        out.push('\n');
        for (j, label) in self.classifier_labels.iter().enumerate() {
            out.push_str(label);
            for m in &self.metrics {
                out.push_str(&format!(",{:.3}", m.mean_ranks[j]));
            }
            out.push('\n');
        }
        out
    }

    /// Pairwise table: per metric, gamma / adjusted p / per-alpha marks.
    pub fn nemenyi_csv(&self) -> String {
        let mut out = String::from("pair");
        for m in &self.metrics {
            out.push_str(&format!(",{0}_gamma,{0}_p", m.metric));
            for alpha in &self.alphas {
                out.push_str(&format!(",{}_alpha={alpha}", m.metric));
            }
        }
        out.push('\n');
        if self.metrics.is_empty() {
            return out;
        }
        let n_pairs = self.metrics[0].nemenyi.pairs.len();
        for i in 0..n_pairs {
            let first = &self.metrics[0].nemenyi.pairs[i];
            out.push_str(&format!("{} vs {}", first.x, first.y));
            for m in &self.metrics {
                let p = &m.nemenyi.pairs[i];
                out.push_str(&format!(",{:.4},{:.4}", p.gamma, p.p_adjusted));
                for (_, decision) in &p.decisions {
                    out.push(',');
                    out.push_str(decision.mark());
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let metrics: Vec<serde_json::Value> = self
            .metrics
            .iter()
            .map(|m| {
                json!({
                    "metric": m.metric,
                    "mean_ranks": m.mean_ranks,
                    "friedman": match &m.friedman {
                        Ok(r) => json!({
                            "q": r.q,
                            "f_statistic": r.f_statistic,
                            "df1": r.df1,
                            "df2": r.df2,
                            "p_value": r.p_value,
                            "decisions": r.decisions.iter()
                                .map(|(a, d)| json!({"alpha": a, "decision": d.mark()}))
                                .collect::<Vec<_>>(),
                        }),
                        Err(e) => json!({"error": e}),
                    },
                    "nemenyi": m.nemenyi.pairs.iter().map(|p| json!({
                        "x": p.x,
                        "y": p.y,
                        "gamma": p.gamma,
                        "p_adjusted": p.p_adjusted,
                        "decisions": p.decisions.iter()
                            .map(|(a, d)| json!({"alpha": a, "decision": d.mark()}))
                            .collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        Ok(serde_json::to_string_pretty(&json!({
            "classifiers": self.classifier_labels,
            "alphas": self.alphas,
            "metrics": metrics,
        }))?)
    }
}
