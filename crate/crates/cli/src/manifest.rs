//! Run manifest: everything needed to re-derive any cell of the results
//! matrix (config echo, per-cell seeds) plus wall-clock bookkeeping.

use serde_json::json;

use crate::config::Benchmark;
use idsbench::classifier::ClassifierSpec;

pub struct CellRecord {
    pub dataset: String,
    pub classifier: String,
    pub base_seed: u64,
    pub wall_seconds: f64,
    pub tuned_spec: Option<ClassifierSpec>,
}

fn spec_json(spec: &ClassifierSpec) -> serde_json::Value {
    serde_json::to_value(spec).unwrap_or(serde_json::Value::Null)
}

pub fn manifest_json(bench: &Benchmark, cells: &[CellRecord], wall_seconds_total: f64) -> String {
    let plan = match bench.plan {
        idsbench::data::SplitPlan::Holdout { train_fraction } => {
            json!({"kind": "holdout", "train_fraction": train_fraction})
        }
        idsbench::data::SplitPlan::StratifiedHoldout { train_fraction } => {
            json!({"kind": "holdout", "train_fraction": train_fraction, "stratified": true})
        }
        idsbench::data::SplitPlan::KFold { k } => json!({"kind": "kfold", "k": k}),
    };
    let value = json!({
        "tool": {"name": "idsbench", "version": env!("CARGO_PKG_VERSION")},
        "master_seed": bench.master_seed,
        "alphas": bench.alphas,
        "metrics": bench.metrics,
        "validation": {
            "plan": plan,
            "rounds": bench.rounds,
            "repeats": bench.repeats,
        },
        "datasets": bench.datasets.iter().map(|d| json!({
            "name": d.name,
            "path": d.path.display().to_string(),
            "schema": d.schema_id,
            "sample": d.sample.map(|(n, a)| json!({"normal": n, "attack": a})),
        })).collect::<Vec<_>>(),
        "classifiers": bench.classifiers.iter().map(|c| json!({
            "name": c.spec.name(),
            "params": spec_json(&c.spec),
            "search": c.search.as_ref().map(|s| json!({
                "budget": s.budget,
                "k": s.k,
                "params": s.space.params.iter().map(|(n, _)| n).collect::<Vec<_>>(),
            })),
        })).collect::<Vec<_>>(),
        "cells": cells.iter().map(|c| json!({
            "dataset": c.dataset,
            "classifier": c.classifier,
            "base_seed": c.base_seed,
            "wall_seconds": c.wall_seconds,
            "tuned_params": c.tuned_spec.as_ref().map(spec_json),
        })).collect::<Vec<_>>(),
        "wall_seconds_total": wall_seconds_total,
    });
    serde_json::to_string_pretty(&value).expect("manifest serializes")
}
