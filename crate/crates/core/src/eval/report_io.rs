//! ValidationReport serialization: per-round CSV (fixed column set) and a
//! JSON summary. Undefined metrics print as the literal `undefined`, never 0.

use std::io::Write;

use serde_json::json;

use super::metrics::MetricSet;
use super::validate::ValidationReport;
use crate::error::Result;

pub const ROUND_CSV_HEADER: &str =
    "dataset,classifier,round,repeat,accuracy,specificity,sensitivity,fpr,auc,mbt_s,resp_s";

fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "undefined".to_string(),
    }
}

/// One row per round, stable column order, shortest-roundtrip float text.
pub fn write_rounds_csv<W: Write>(report: &ValidationReport, mut w: W) -> Result<()> {
    writeln!(w, "{ROUND_CSV_HEADER}")?;
    for rec in &report.records {
        let m = &rec.metrics;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            report.config.dataset,
            report.config.classifier,
            rec.round,
            rec.repeat,
            cell(m.accuracy),
            cell(m.specificity),
            cell(m.sensitivity),
            cell(m.fpr),
            cell(m.auc),
            m.mbt_seconds,
            m.avg_response_seconds,
        )?;
    }
    Ok(())
}

pub fn rounds_csv_string(report: &ValidationReport) -> Result<String> {
    let mut buf = Vec::new();
    write_rounds_csv(report, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf8"))
}

fn metric_json(m: &MetricSet) -> serde_json::Value {
    json!({
        "accuracy": m.accuracy,
        "specificity": m.specificity,
        "sensitivity": m.sensitivity,
        "fpr": m.fpr,
        "auc": m.auc,
        "mbt_s": m.mbt_seconds,
        "resp_s": m.avg_response_seconds,
    })
}

/// Config echo, grand mean and per-repeat means.
pub fn summary_json(report: &ValidationReport) -> Result<String> {
    let value = json!({
        "config": {
            "dataset": report.config.dataset,
            "classifier": report.config.classifier,
            "plan": report.config.plan,
            "rounds": report.config.rounds,
            "repeats": report.config.repeats,
            "base_seed": report.config.base_seed,
        },
        "mean": metric_json(&report.mean),
        "repeat_means": report.repeat_means().iter().map(metric_json).collect::<Vec<_>>(),
        "n_records": report.records.len(),
    });
    Ok(serde_json::to_string_pretty(&value)?)
}
