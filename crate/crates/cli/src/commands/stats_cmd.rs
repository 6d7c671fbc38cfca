//! `stats`: significance tests over externally supplied results matrices or
//! published mean ranks — reproducing comparison tables without any training.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};

use idsbench::stats::{
    compute_stats, stats_from_ranks, Direction, RankMatrix, ResultsMatrix, TestReport,
};

use super::common::write_stats;

pub enum DirectionArg {
    Auto,
    Higher,
    Lower,
}

impl DirectionArg {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(DirectionArg::Auto),
            "higher" => Ok(DirectionArg::Higher),
            "lower" => Ok(DirectionArg::Lower),
            other => Err(anyhow!(
                "direction must be auto|higher|lower, got {other:?}"
            )),
        }
    }

    fn resolve(&self, metric: &str) -> Direction {
        match self {
            DirectionArg::Auto => Direction::for_metric(metric),
            DirectionArg::Higher => Direction::HigherBetter,
            DirectionArg::Lower => Direction::LowerBetter,
        }
    }
}

fn metric_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "metric".to_string())
}

/// Results-matrix mode: one CSV per metric (datasets as rows, classifiers as
/// columns, labels in the first row/column).
pub fn stats_from_matrices(
    files: &[PathBuf],
    direction: &DirectionArg,
    alphas: &[f64],
    out: &Path,
) -> Result<()> {
    let mut matrices = Vec::new();
    for file in files {
        let metric = metric_name(file);
        let matrix = ResultsMatrix::from_csv_file(file, direction.resolve(&metric))
            .with_context(|| format!("reading {}", file.display()))?;
        matrices.push((metric, matrix));
    }
    let report = compute_stats(&matrices, alphas)?;
    emit(&report, out)
}

/// Mean-ranks mode: CSV with header `classifier,<metric...>` and one row per
/// classifier (the layout `run` emits as stats/mean_ranks.csv), plus the
/// number of datasets the ranks were averaged over.
pub fn stats_from_mean_ranks(
    file: &Path,
    n_datasets: usize,
    alphas: &[f64],
    out: &Path,
) -> Result<()> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| anyhow!("empty mean-ranks csv"))?;
    let metrics: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
    if metrics.is_empty() {
        return Err(anyhow!("mean-ranks csv needs at least one metric column"));
    }
    let mut labels = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); metrics.len()];
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != metrics.len() + 1 {
            return Err(anyhow!(
                "row {:?} has {} fields, header implies {}",
                fields.first().unwrap_or(&""),
                fields.len(),
                metrics.len() + 1
            ));
        }
        labels.push(fields[0].trim().to_string());
        for (i, field) in fields[1..].iter().enumerate() {
            let v: f64 = field
                .trim()
                .parse()
                .with_context(|| format!("bad mean rank {field:?}"))?;
            columns[i].push(v);
        }
    }
    if labels.len() < 2 {
        return Err(anyhow!("need at least 2 classifiers"));
    }
    let metric_stats = metrics
        .iter()
        .zip(&columns)
        .map(|(metric, means)| {
            let ranks = RankMatrix::from_mean_ranks(means, n_datasets);
            stats_from_ranks(metric, &ranks, &labels, alphas)
        })
        .collect();
    let report = TestReport {
        classifier_labels: labels,
        alphas: alphas.to_vec(),
        metrics: metric_stats,
    };
    emit(&report, out)
}

fn emit(report: &TestReport, out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)?;
    write_stats(out, report)?;
    // Console view of the omnibus table.
    print!("{}", report.friedman_csv());
    eprintln!("stats written under {}", out.join("stats").display());
    Ok(())
}
