//! `report`: rebuild results matrices and statistics from a directory of
//! cell summaries produced by `run` or `evaluate`.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, Context, Result};

use idsbench::stats::{compute_stats, Direction, ResultsMatrix};

use super::common::write_stats;
use crate::config::ALL_METRICS;

pub fn report(results_dir: &Path, alphas: &[f64]) -> Result<()> {
    let cells_dir = results_dir.join("cells");
    let entries = std::fs::read_dir(&cells_dir)
        .with_context(|| format!("no cell summaries under {}", cells_dir.display()))?;

    // dataset -> classifier -> metric means
    let mut grid: BTreeMap<String, BTreeMap<String, serde_json::Value>> = BTreeMap::new();
    for entry in entries {
        let path = entry?.path();
        if !path
            .file_name()
            .is_some_and(|n| n.to_string_lossy().ends_with(".summary.json"))
        {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path)?)
            .with_context(|| format!("parsing {}", path.display()))?;
        let dataset = value["config"]["dataset"]
            .as_str()
            .ok_or_else(|| anyhow!("{}: missing config.dataset", path.display()))?
            .to_string();
        let classifier = value["config"]["classifier"]
            .as_str()
            .ok_or_else(|| anyhow!("{}: missing config.classifier", path.display()))?
            .to_string();
        grid.entry(dataset)
            .or_default()
            .insert(classifier, value["mean"].clone());
    }
    if grid.is_empty() {
        return Err(anyhow!(
            "no *.summary.json files under {} — nothing to report",
            cells_dir.display()
        ));
    }

    let dataset_labels: Vec<String> = grid.keys().cloned().collect();
    let classifier_labels: Vec<String> = grid
        .values()
        .next()
        .map(|row| row.keys().cloned().collect())
        .unwrap_or_default();
    if dataset_labels.len() < 2 || classifier_labels.len() < 2 {
        return Err(anyhow!(
            "statistics need at least a 2x2 grid; found {} dataset(s) x {} classifier(s)",
            dataset_labels.len(),
            classifier_labels.len()
        ));
    }

    let mut matrices = Vec::new();
    for metric in ALL_METRICS {
        let mut values = Vec::new();
        let mut complete = true;
        for ds in &dataset_labels {
            let mut row = Vec::new();
            for clf in &classifier_labels {
                match grid[ds].get(clf).and_then(|m| m[metric].as_f64()) {
                    Some(v) => row.push(v),
                    None => {
                        complete = false;
                    }
                }
            }
            values.push(row);
        }
        if !complete {
            eprintln!("note: metric {metric} missing in some cells; skipped");
            continue;
        }
        matrices.push((
            metric.to_string(),
            ResultsMatrix::new(
                values,
                Direction::for_metric(metric),
                dataset_labels.clone(),
                classifier_labels.clone(),
            )?,
        ));
    }

    let stats = compute_stats(&matrices, alphas)?;
    write_stats(results_dir, &stats)?;
    print!("{}", stats.friedman_csv());
    eprintln!(
        "stats written under {}",
        results_dir.join("stats").display()
    );
    Ok(())
}
