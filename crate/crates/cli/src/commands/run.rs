//! `run`: the full benchmark, and the staged `train` / `evaluate` halves.

use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};

use idsbench::eval::RunMode;

use super::common::{
    assemble_outputs, cell_name, cell_seed, execute_cell, init_workers, load_planned_dataset,
    write_cell,
};
use crate::config::Benchmark;
use crate::manifest::CellRecord;
use crate::store::DirModelStore;

#[derive(Clone, Copy, PartialEq)]
pub enum Stage {
    Full,
    TrainOnly,
    EvaluateOnly,
}

/// Execute every (dataset, classifier) cell in the requested stage.
/// Cell outputs are flushed as they complete.
pub fn run_benchmark(bench: &Benchmark, stage: Stage, models_dir: Option<&Path>) -> Result<()> {
    init_workers(bench.workers);
    let out_dir = &bench.output_dir;
    std::fs::create_dir_all(out_dir)?;
    let started = Instant::now();

    let mut all_reports: Vec<Vec<idsbench::eval::ValidationReport>> = Vec::new();
    let mut cells: Vec<CellRecord> = Vec::new();

    for (d, plan) in bench.datasets.iter().enumerate() {
        let (ds, _) = load_planned_dataset(plan, bench.master_seed, d)
            .with_context(|| format!("loading dataset {:?}", plan.name))?;
        let (n_normal, n_attack) = ds.class_counts();
        eprintln!(
            "dataset {:?}: {} rows ({n_normal} normal, {n_attack} attack)",
            plan.name,
            ds.n_rows()
        );

        let mut row_reports = Vec::new();
        for (c, clf) in bench.classifiers.iter().enumerate() {
            let name = cell_name(bench, d, c);
            let store = match stage {
                Stage::Full => None,
                Stage::TrainOnly => {
                    let dir = models_dir
                        .expect("train stage needs a models dir")
                        .join(&name);
                    Some(DirModelStore::create(&dir)?)
                }
                Stage::EvaluateOnly => {
                    let dir = models_dir
                        .expect("evaluate stage needs a models dir")
                        .join(&name);
                    Some(DirModelStore::open(&dir)?)
                }
            };
            let mode = match (stage, &store) {
                (Stage::Full, _) => RunMode::Direct,
                (Stage::TrainOnly, Some(s)) => RunMode::TrainOnly(s),
                (Stage::EvaluateOnly, Some(s)) => RunMode::EvaluateOnly(s),
                _ => unreachable!(),
            };
            let outcome =
                execute_cell(bench, &ds, d, c, mode).with_context(|| format!("cell {name}"))?;
            if stage == Stage::TrainOnly {
                store.as_ref().expect("train store").flush_times()?;
            }
            eprintln!(
                "  {:>4}: {:.2}s{}",
                clf.spec.name(),
                outcome.wall_seconds,
                outcome
                    .report
                    .as_ref()
                    .and_then(|r| r.mean.accuracy)
                    .map(|a| format!(", mean accuracy {a:.4}"))
                    .unwrap_or_default()
            );
            cells.push(CellRecord {
                dataset: plan.name.clone(),
                classifier: clf.spec.name().to_string(),
                base_seed: cell_seed(bench.master_seed, d, c),
                wall_seconds: outcome.wall_seconds,
                tuned_spec: outcome.tuned_spec,
            });
            if let Some(report) = outcome.report {
                write_cell(out_dir, &name, &report)?;
                row_reports.push(report);
            }
        }
        if !row_reports.is_empty() {
            all_reports.push(row_reports);
        }
    }

    if stage == Stage::TrainOnly {
        eprintln!("models written under {}", models_dir.unwrap().display());
        return Ok(());
    }
    assemble_outputs(
        bench,
        &all_reports,
        &cells,
        out_dir,
        started.elapsed().as_secs_f64(),
    )?;
    eprintln!("outputs written under {}", out_dir.display());
    Ok(())
}
