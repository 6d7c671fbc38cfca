//! Results matrix (datasets x classifiers) and within-row ranking.
//!
//! Ranking convention: the best performance in a row receives the HIGHEST
//! rank k (ties share the average of their positions). For LOWER_BETTER
//! columns such as FPR or build time the order inverts, so the best (lowest)
//! value still gets rank k.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

impl Direction {
    /// FPR and timing columns rank LOWER_BETTER by default.
    pub fn for_metric(name: &str) -> Direction {
        match name.to_ascii_lowercase().as_str() {
            "fpr" | "mbt" | "mbt_s" | "response" | "resp_s" => Direction::LowerBetter,
            _ => Direction::HigherBetter,
        }
    }
}

/// d x k grid of scores X_ij (dataset i, classifier j).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultsMatrix {
    values: Vec<Vec<f64>>,
    pub direction: Direction,
    pub dataset_labels: Vec<String>,
    pub classifier_labels: Vec<String>,
}

impl ResultsMatrix {
    pub fn new(
        values: Vec<Vec<f64>>,
        direction: Direction,
        dataset_labels: Vec<String>,
        classifier_labels: Vec<String>,
    ) -> Result<Self> {
        let d = values.len();
        let k = values.first().map_or(0, Vec::len);
        if d < 2 || k < 2 {
            return Err(Error::MatrixTooSmall { d, k });
        }
        if values.iter().any(|row| row.len() != k) {
            return Err(Error::BadResultsMatrix("ragged rows".into()));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::BadResultsMatrix("missing or non-finite cell".into()));
        }
        if dataset_labels.len() != d || classifier_labels.len() != k {
            return Err(Error::BadResultsMatrix("label counts mismatch".into()));
        }
        Ok(ResultsMatrix {
            values,
            direction,
            dataset_labels,
            classifier_labels,
        })
    }

    pub fn d(&self) -> usize {
        self.values.len()
    }

    pub fn k(&self) -> usize {
        self.values[0].len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// CSV layout: header `dataset,<classifier...>`, one row per dataset.
    pub fn from_csv_str(text: &str, direction: Direction) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = reader.records();
        let header = rows
            .next()
            .ok_or_else(|| Error::BadResultsMatrix("empty csv".into()))??;
        let classifier_labels: Vec<String> = header.iter().skip(1).map(|s| s.to_string()).collect();
        let mut dataset_labels = Vec::new();
        let mut values = Vec::new();
        for rec in rows {
            let rec = rec?;
            if rec.len() != classifier_labels.len() + 1 {
                return Err(Error::BadResultsMatrix(format!(
                    "row {:?} has {} fields, expected {}",
                    rec.get(0).unwrap_or(""),
                    rec.len(),
                    classifier_labels.len() + 1
                )));
            }
            dataset_labels.push(rec.get(0).unwrap_or("").to_string());
            let row: std::result::Result<Vec<f64>, _> =
                rec.iter().skip(1).map(str::parse::<f64>).collect();
            values.push(row.map_err(|e| Error::BadResultsMatrix(e.to_string()))?);
        }
        Self::new(values, direction, dataset_labels, classifier_labels)
    }

    pub fn from_csv_file(path: &Path, direction: Direction) -> Result<Self> {
        if !path.exists() {
            return Err(Error::FileNotFound(path.to_path_buf()));
        }
        Self::from_csv_str(&std::fs::read_to_string(path)?, direction)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("dataset");
        for label in &self.classifier_labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for (label, row) in self.dataset_labels.iter().zip(&self.values) {
            out.push_str(label);
            for v in row {
                out.push(',');
                out.push_str(&format!("{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Within-row ranks plus their column sums and means.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankMatrix {
    pub ranks: Vec<Vec<f64>>,
    pub rank_sums: Vec<f64>,
    pub mean_ranks: Vec<f64>,
    pub d: usize,
    pub k: usize,
}

impl RankMatrix {
    /// Rebuild from published mean ranks (rank rows unavailable): R_j = d * mean.
    pub fn from_mean_ranks(mean_ranks: &[f64], d: usize) -> Self {
        let k = mean_ranks.len();
        RankMatrix {
            ranks: vec![mean_ranks.to_vec(); d],
            rank_sums: mean_ranks.iter().map(|&m| m * d as f64).collect(),
            mean_ranks: mean_ranks.to_vec(),
            d,
            k,
        }
    }
}

/// Rank each row: ascending positions for HIGHER_BETTER (largest value ->
/// rank k), inverted for LOWER_BETTER; tied values share the average of the
/// positions they span.
pub fn rank_rows(results: &ResultsMatrix) -> RankMatrix {
    let d = results.d();
    let k = results.k();
    let mut ranks = Vec::with_capacity(d);
    for row in results.values() {
        ranks.push(rank_row(row, results.direction));
    }
    let mut rank_sums = vec![0.0; k];
    for row in &ranks {
        for (s, r) in rank_sums.iter_mut().zip(row) {
            *s += r;
        }
    }
    let mean_ranks = rank_sums.iter().map(|&s| s / d as f64).collect();
    RankMatrix {
        ranks,
        rank_sums,
        mean_ranks,
        d,
        k,
    }
}

fn rank_row(row: &[f64], direction: Direction) -> Vec<f64> {
    let k = row.len();
    let mut order: Vec<usize> = (0..k).collect();
    match direction {
        Direction::HigherBetter => {
            order.sort_by(|&a, &b| row[a].partial_cmp(&row[b]).unwrap());
        }
        Direction::LowerBetter => {
            order.sort_by(|&a, &b| row[b].partial_cmp(&row[a]).unwrap());
        }
    }
    let mut ranks = vec![0.0; k];
    let mut pos = 0;
    while pos < k {
        let mut end = pos + 1;
        while end < k && row[order[end]] == row[order[pos]] {
            end += 1;
        }
        // positions pos..end (0-based) hold equal values; average their
        // 1-based ranks.
        let avg = (pos + 1 + end) as f64 / 2.0;
        for &col in &order[pos..end] {
            ranks[col] = avg;
        }
        pos = end;
    }
    ranks
}
