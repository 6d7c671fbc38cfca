//! Shared benchmark plumbing: dataset loading, cell execution, output
//! assembly. `run`, `train` and `evaluate` all funnel through here so the
//! staged pipeline reproduces the monolithic one.

use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};

use idsbench::classifier::ClassifierSpec;
use idsbench::data::{
    load_cache, load_dataset_report, sample_stratified, Dataset, LoadReport, CACHE_MAGIC,
};
use idsbench::derive_seed;
use idsbench::eval::report_io::{rounds_csv_string, summary_json};
use idsbench::eval::{random_search, run_plan_with, RunMode, ValidationReport};
use idsbench::stats::{compute_stats, Direction, ResultsMatrix, TestReport};

use crate::config::{Benchmark, DatasetPlan};
use crate::manifest::{manifest_json, CellRecord};

/// Honor --workers by sizing the global rayon pool (first caller wins).
pub fn init_workers(workers: Option<usize>) {
    if let Some(n) = workers {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Load one dataset (delimited text or IDSB0001 cache) and apply its
/// configured stratified sample.
pub fn load_planned_dataset(
    plan: &DatasetPlan,
    master_seed: u64,
    ds_index: usize,
) -> Result<(Dataset, LoadReport)> {
    let is_cache = std::fs::File::open(&plan.path)
        .ok()
        .and_then(|mut f| {
            use std::io::Read;
            let mut magic = [0u8; 8];
            f.read_exact(&mut magic).ok()?;
            Some(magic == *CACHE_MAGIC)
        })
        .unwrap_or(false);
    let (ds, report) = if is_cache {
        (load_cache(&plan.path)?, LoadReport::default())
    } else {
        load_dataset_report(&plan.path, &plan.schema)?
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let ds = match plan.sample {
        Some((normal, attack)) => sample_stratified(
            &ds,
            normal,
            attack,
            derive_seed(master_seed, "sample", &[ds_index as u64]),
        )?,
        None => ds,
    };
    Ok((ds, report))
}

pub fn cell_seed(master_seed: u64, ds_index: usize, clf_index: usize) -> u64 {
    derive_seed(master_seed, "cell", &[ds_index as u64, clf_index as u64])
}

pub struct CellOutcome {
    pub report: Option<ValidationReport>,
    pub tuned_spec: Option<ClassifierSpec>,
    pub wall_seconds: f64,
}

/// Run one (dataset, classifier) cell in the given mode, tuning first when a
/// search plan is configured.
pub fn execute_cell(
    bench: &Benchmark,
    ds: &Dataset,
    ds_index: usize,
    clf_index: usize,
    mode: RunMode<'_>,
) -> Result<CellOutcome> {
    let clf = &bench.classifiers[clf_index];
    let started = Instant::now();
    let (spec, tuned_spec) = match &clf.search {
        None => (clf.spec.clone(), None),
        Some(search) => {
            let outcome = random_search(
                &search.space,
                search.budget,
                ds,
                search.k,
                derive_seed(
                    bench.master_seed,
                    "search",
                    &[ds_index as u64, clf_index as u64],
                ),
            )?;
            (outcome.best_spec.clone(), Some(outcome.best_spec))
        }
    };
    let base_seed = cell_seed(bench.master_seed, ds_index, clf_index);
    let mut report = run_plan_with(
        &spec,
        ds,
        bench.plan,
        bench.rounds,
        bench.repeats,
        base_seed,
        mode,
    )?;
    if let Some(r) = report.as_mut() {
        r.config.dataset = bench.datasets[ds_index].name.clone();
    }
    Ok(CellOutcome {
        report,
        tuned_spec,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Cell directory name: dataset__CLASSIFIER.
pub fn cell_name(bench: &Benchmark, ds_index: usize, clf_index: usize) -> String {
    format!(
        "{}__{}",
        bench.datasets[ds_index].name,
        bench.classifiers[clf_index].spec.name()
    )
}

/// Write one cell's rounds CSV and summary JSON (flushed as soon as the cell
/// finishes so partial results survive an abort).
pub fn write_cell(out_dir: &Path, name: &str, report: &ValidationReport) -> Result<()> {
    let cells = out_dir.join("cells");
    std::fs::create_dir_all(&cells)?;
    std::fs::write(
        cells.join(format!("{name}.rounds.csv")),
        rounds_csv_string(report)?,
    )?;
    std::fs::write(
        cells.join(format!("{name}.summary.json")),
        summary_json(report)?,
    )?;
    Ok(())
}

/// Build the per-metric results matrices (datasets x classifiers of grand
/// means). Requires at least 2 datasets and 2 classifiers.
pub fn build_matrices(
    bench: &Benchmark,
    reports: &[Vec<ValidationReport>],
) -> Result<Vec<(String, ResultsMatrix)>> {
    let dataset_labels: Vec<String> = bench.datasets.iter().map(|d| d.name.clone()).collect();
    let classifier_labels: Vec<String> = bench
        .classifiers
        .iter()
        .map(|c| c.spec.name().to_string())
        .collect();
    let mut matrices = Vec::new();
    for metric in &bench.metrics {
        let mut values = Vec::with_capacity(reports.len());
        for (d, row) in reports.iter().enumerate() {
            let mut out_row = Vec::with_capacity(row.len());
            for (c, report) in row.iter().enumerate() {
                let v = report.mean.metric(metric).ok_or_else(|| {
                    anyhow!(
                        "metric {metric} undefined for cell {}",
                        cell_name(bench, d, c)
                    )
                })?;
                out_row.push(v);
            }
            values.push(out_row);
        }
        let matrix = ResultsMatrix::new(
            values,
            Direction::for_metric(metric),
            dataset_labels.clone(),
            classifier_labels.clone(),
        )?;
        matrices.push((metric.clone(), matrix));
    }
    Ok(matrices)
}

pub fn write_stats(out_dir: &Path, report: &TestReport) -> Result<()> {
    let stats_dir = out_dir.join("stats");
    std::fs::create_dir_all(&stats_dir)?;
    std::fs::write(stats_dir.join("friedman.csv"), report.friedman_csv())?;
    std::fs::write(stats_dir.join("mean_ranks.csv"), report.mean_ranks_csv())?;
    std::fs::write(stats_dir.join("nemenyi.csv"), report.nemenyi_csv())?;
    std::fs::write(stats_dir.join("report.json"), report.to_json()?)?;
    Ok(())
}

/// Plot-data CSVs: per-classifier metric means across datasets, and the
/// dataset x classifier timing grids.
fn write_plot_data(
    bench: &Benchmark,
    reports: &[Vec<ValidationReport>],
    out_dir: &Path,
) -> Result<()> {
    let plots = out_dir.join("plots");
    std::fs::create_dir_all(&plots)?;
    let classifiers: Vec<&str> = bench.classifiers.iter().map(|c| c.spec.name()).collect();

    let mean_over_datasets = |metric: &str, c: usize| -> Option<f64> {
        let vals: Vec<f64> = reports
            .iter()
            .filter_map(|row| row[c].mean.metric(metric))
            .collect();
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    };
    let fmt = |v: Option<f64>| v.map_or("undefined".to_string(), |x| format!("{x:.6}"));

    let mut fig1 = String::from("classifier,accuracy,specificity,sensitivity,auc\n");
    let mut fig2 = String::from("classifier,fpr\n");
    for (c, name) in classifiers.iter().enumerate() {
        fig1.push_str(&format!(
            "{name},{},{},{},{}\n",
            fmt(mean_over_datasets("accuracy", c)),
            fmt(mean_over_datasets("specificity", c)),
            fmt(mean_over_datasets("sensitivity", c)),
            fmt(mean_over_datasets("auc", c)),
        ));
        fig2.push_str(&format!("{name},{}\n", fmt(mean_over_datasets("fpr", c))));
    }
    std::fs::write(plots.join("metrics_mean.csv"), fig1)?;
    std::fs::write(plots.join("fpr.csv"), fig2)?;

    for (file, metric) in [("mbt.csv", "mbt"), ("response_time.csv", "response")] {
        let mut grid = String::from("dataset");
        for name in &classifiers {
            grid.push(',');
            grid.push_str(name);
        }
        grid.push('\n');
        for (d, row) in reports.iter().enumerate() {
            grid.push_str(&bench.datasets[d].name);
            for report in row {
                grid.push_str(&format!(",{}", fmt(report.mean.metric(metric))));
            }
            grid.push('\n');
        }
        std::fs::write(plots.join(file), grid)?;
    }
    Ok(())
}

/// Everything after the cells are computed: results matrices, statistics,
/// plot data and the manifest. Statistics are skipped (with a note) when
/// fewer than 2 datasets or classifiers are configured.
pub fn assemble_outputs(
    bench: &Benchmark,
    reports: &[Vec<ValidationReport>],
    cells: &[CellRecord],
    out_dir: &Path,
    wall_seconds_total: f64,
) -> Result<()> {
    if bench.datasets.len() >= 2 && bench.classifiers.len() >= 2 {
        let matrices = build_matrices(bench, reports).context("building results matrices")?;
        let results_dir = out_dir.join("results");
        std::fs::create_dir_all(&results_dir)?;
        for (metric, matrix) in &matrices {
            std::fs::write(
                results_dir.join(format!("{metric}.csv")),
                matrix.to_csv_string(),
            )?;
        }
        let stats = compute_stats(&matrices, &bench.alphas)?;
        write_stats(out_dir, &stats)?;
    } else {
        eprintln!(
            "note: statistics need at least 2 datasets and 2 classifiers ({}x{} configured); skipping stats section",
            bench.datasets.len(),
            bench.classifiers.len()
        );
    }
    write_plot_data(bench, reports, out_dir)?;
    std::fs::write(
        out_dir.join("manifest.json"),
        manifest_json(bench, cells, wall_seconds_total),
    )?;
    Ok(())
}
