//! Repeated hold-out and repeated k-fold validation.
//!
//! Each repeat derives its own seed from the base seed; each round inside a
//! repeat derives split and fit seeds from that. Preprocessing is fitted on
//! the round's training partition only and reapplied to its test partition.
//! Rounds run in parallel; all metric values are deterministic under a fixed
//! base seed (timing fields are measurements and are not).
//!
//! The same round loop serves three modes: fit-and-score in one pass, fit and
//! persist models (train stage), or load persisted models and score them
//! (evaluate stage). Staged runs therefore reproduce the monolithic run's
//! metrics exactly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use super::metrics::{auc, confusion, metrics_from_cm, MetricSet};
use crate::classifier::{Classifier, ClassifierSpec, TrainedModel};
use crate::data::{kfold_partitions, split_holdout, Dataset, Preprocessor, SplitPlan};
use crate::error::{Error, Result};
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub repeat: usize,
    pub round: usize,
    pub metrics: MetricSet,
}

/// Echo of how a validation was produced, kept with its results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub dataset: String,
    pub classifier: String,
    pub plan: String,
    pub rounds: usize,
    pub repeats: usize,
    pub base_seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub config: ValidationConfig,
    pub records: Vec<RoundRecord>,
    pub mean: MetricSet,
}

impl ValidationReport {
    fn assemble(config: ValidationConfig, records: Vec<RoundRecord>) -> Self {
        let all: Vec<MetricSet> = records.iter().map(|r| r.metrics).collect();
        ValidationReport {
            config,
            mean: MetricSet::mean_of(&all),
            records,
        }
    }

    /// Per-repeat means (the "iterations" the grand mean averages).
    pub fn repeat_means(&self) -> Vec<MetricSet> {
        let max_repeat = self.records.iter().map(|r| r.repeat).max().unwrap_or(0);
        (0..=max_repeat)
            .map(|r| {
                let rounds: Vec<MetricSet> = self
                    .records
                    .iter()
                    .filter(|rec| rec.repeat == r)
                    .map(|rec| rec.metrics)
                    .collect();
                MetricSet::mean_of(&rounds)
            })
            .collect()
    }
}

/// Persistence surface for the staged train / evaluate pipeline. Keys name
/// one fitted model within a cell (repeat, round and fold encoded).
pub trait ModelStore: Sync {
    fn save(&self, key: &str, model: &TrainedModel, fit_seconds: f64) -> Result<()>;
    fn load(&self, key: &str) -> Result<(TrainedModel, f64)>;
}

#[derive(Clone, Copy)]
pub enum RunMode<'a> {
    /// Fit and score in one pass.
    Direct,
    /// Fit and persist each round's model; no scoring.
    TrainOnly(&'a dyn ModelStore),
    /// Load each round's persisted model and score it.
    EvaluateOnly(&'a dyn ModelStore),
}

/// Seed derivation shared by every mode: (split seed, fit seed) for one
/// round of one repeat.
pub fn round_seeds(base_seed: u64, repeat: usize, round: usize) -> (u64, u64) {
    let repeat_seed = derive_seed(base_seed, "repeat", &[repeat as u64]);
    let split_seed = derive_seed(repeat_seed, "round", &[round as u64]);
    let fit_seed = derive_seed(split_seed, "fit", &[]);
    (split_seed, fit_seed)
}

pub fn fold_seed(fit_seed_base: u64, fold: usize) -> u64 {
    derive_seed(fit_seed_base, "fold", &[fold as u64])
}

/// Encode a train/test pair with statistics fitted on train only.
/// Already-encoded partitions pass through untouched.
pub fn prepare_partitions(train: &Dataset, test: &Dataset) -> Result<(Dataset, Dataset)> {
    if train.is_encoded() {
        Ok((train.clone(), test.clone()))
    } else {
        let pre = Preprocessor::fit(train)?;
        Ok((pre.transform(train)?, pre.transform(test)?))
    }
}

/// Score a fitted model on an encoded test partition: confusion metrics at
/// threshold 0.5, AUC over scores, one-at-a-time response timing.
/// `mbt_seconds` is supplied by the caller (fit time or stored time).
pub fn score_model(model: &TrainedModel, test: &Dataset, mbt_seconds: f64) -> Result<MetricSet> {
    if test.n_rows() == 0 {
        return Err(Error::EmptyTestSet);
    }
    let mut preds = Vec::with_capacity(test.n_rows());
    let mut scores = Vec::with_capacity(test.n_rows());
    let classify_start = Instant::now();
    for row in test.rows() {
        let (label, score) = model.predict(row)?;
        preds.push(label);
        scores.push(score);
    }
    let avg_response_seconds = classify_start.elapsed().as_secs_f64() / test.n_rows() as f64;

    let cm = confusion(&preds, test.labels())?;
    let rates = metrics_from_cm(&cm);
    let auc_value = match auc(&scores, test.labels()) {
        Ok(v) => Some(v),
        Err(Error::SingleClassTruth) => None,
        Err(e) => return Err(e),
    };
    Ok(MetricSet {
        accuracy: rates.accuracy,
        specificity: rates.specificity,
        sensitivity: rates.sensitivity,
        fpr: rates.fpr,
        auc: auc_value,
        mbt_seconds,
        avg_response_seconds,
    })
}

/// Fit on `train`, score on `test`, timing the fit. Raw partitions are
/// encoded first (statistics from train only).
pub fn evaluate_split(
    spec: &ClassifierSpec,
    train: &Dataset,
    test: &Dataset,
    fit_seed: u64,
) -> Result<MetricSet> {
    let (train_enc, test_enc) = prepare_partitions(train, test)?;
    let fit_start = Instant::now();
    let model = spec.fit(&train_enc, fit_seed)?;
    let mbt_seconds = fit_start.elapsed().as_secs_f64();
    score_model(&model, &test_enc, mbt_seconds)
}

/// One (train, test, fit_seed, key) unit in whichever mode is active.
/// Returns metrics except in train-only mode.
fn run_unit(
    spec: &ClassifierSpec,
    train: &Dataset,
    test: &Dataset,
    fit_seed: u64,
    key: &str,
    mode: RunMode<'_>,
) -> Result<Option<MetricSet>> {
    let (train_enc, test_enc) = prepare_partitions(train, test)?;
    match mode {
        RunMode::Direct => {
            let fit_start = Instant::now();
            let model = spec.fit(&train_enc, fit_seed)?;
            let mbt = fit_start.elapsed().as_secs_f64();
            Ok(Some(score_model(&model, &test_enc, mbt)?))
        }
        RunMode::TrainOnly(store) => {
            let fit_start = Instant::now();
            let model = spec.fit(&train_enc, fit_seed)?;
            let mbt = fit_start.elapsed().as_secs_f64();
            store.save(key, &model, mbt)?;
            Ok(None)
        }
        RunMode::EvaluateOnly(store) => {
            let (model, mbt) = store.load(key)?;
            Ok(Some(score_model(&model, &test_enc, mbt)?))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn repeated_holdout_impl(
    spec: &ClassifierSpec,
    ds: &Dataset,
    train_fraction: f64,
    stratified: bool,
    rounds: usize,
    repeats: usize,
    base_seed: u64,
    mode: RunMode<'_>,
) -> Result<Option<ValidationReport>> {
    crate::classifier::require_both_classes(ds)?;
    let cells: Vec<(usize, usize)> = (0..repeats)
        .flat_map(|r| (0..rounds).map(move |n| (r, n)))
        .collect();
    let outcomes: Result<Vec<Option<RoundRecord>>> = cells
        .par_iter()
        .map(|&(repeat, round)| {
            let (split_seed, fit_seed) = round_seeds(base_seed, repeat, round);
            let (train, test) = if stratified {
                crate::data::sample::split_holdout_stratified(ds, train_fraction, split_seed)?
            } else {
                split_holdout(ds, train_fraction, split_seed)?
            };
            let key = format!("h_r{repeat}_n{round}");
            let metrics = run_unit(spec, &train, &test, fit_seed, &key, mode)?;
            Ok(metrics.map(|m| RoundRecord {
                repeat,
                round,
                metrics: m,
            }))
        })
        .collect();
    let records: Option<Vec<RoundRecord>> = outcomes?.into_iter().collect();
    Ok(records.map(|records| {
        ValidationReport::assemble(
            ValidationConfig {
                dataset: String::new(),
                classifier: spec.name().to_string(),
                plan: if stratified {
                    format!("stratified-holdout({train_fraction})")
                } else {
                    format!("holdout({train_fraction})")
                },
                rounds,
                repeats,
                base_seed,
            },
            records,
        )
    }))
}

fn repeated_kfold_impl(
    spec: &ClassifierSpec,
    ds: &Dataset,
    k: usize,
    rounds: usize,
    repeats: usize,
    base_seed: u64,
    mode: RunMode<'_>,
) -> Result<Option<ValidationReport>> {
    crate::classifier::require_both_classes(ds)?;
    let cells: Vec<(usize, usize)> = (0..repeats)
        .flat_map(|r| (0..rounds).map(move |n| (r, n)))
        .collect();
    let outcomes: Result<Vec<Option<RoundRecord>>> = cells
        .par_iter()
        .map(|&(repeat, round)| {
            let (split_seed, fit_seed_base) = round_seeds(base_seed, repeat, round);
            let partitions = kfold_partitions(ds, k, split_seed)?;
            let mut fold_metrics = Vec::with_capacity(k);
            for (fold, (train_idx, test_idx)) in partitions.iter().enumerate() {
                let train = ds.subset(train_idx);
                let test = ds.subset(test_idx);
                let key = format!("k_r{repeat}_n{round}_f{fold}");
                match run_unit(
                    spec,
                    &train,
                    &test,
                    fold_seed(fit_seed_base, fold),
                    &key,
                    mode,
                )? {
                    Some(m) => fold_metrics.push(m),
                    None => continue,
                }
            }
            if fold_metrics.is_empty() {
                return Ok(None); // train-only mode records nothing
            }
            Ok(Some(RoundRecord {
                repeat,
                round,
                metrics: MetricSet::mean_of(&fold_metrics),
            }))
        })
        .collect();
    let records: Option<Vec<RoundRecord>> = outcomes?.into_iter().collect();
    Ok(records.map(|records| {
        ValidationReport::assemble(
            ValidationConfig {
                dataset: String::new(),
                classifier: spec.name().to_string(),
                plan: format!("kfold({k})"),
                rounds,
                repeats,
                base_seed,
            },
            records,
        )
    }))
}

/// `repeats` outer seeds x `rounds` fresh hold-out splits each.
pub fn repeated_holdout(
    spec: &ClassifierSpec,
    ds: &Dataset,
    train_fraction: f64,
    rounds: usize,
    repeats: usize,
    base_seed: u64,
) -> Result<ValidationReport> {
    repeated_holdout_impl(
        spec,
        ds,
        train_fraction,
        false,
        rounds,
        repeats,
        base_seed,
        RunMode::Direct,
    )
    .map(|r| r.expect("direct mode yields a report"))
}

/// `repeats` outer seeds x `rounds` k-fold partitions; a round's metrics are
/// the mean over its k folds.
pub fn repeated_kfold(
    spec: &ClassifierSpec,
    ds: &Dataset,
    k: usize,
    rounds: usize,
    repeats: usize,
    base_seed: u64,
) -> Result<ValidationReport> {
    repeated_kfold_impl(spec, ds, k, rounds, repeats, base_seed, RunMode::Direct)
        .map(|r| r.expect("direct mode yields a report"))
}

/// Run whichever plan is configured, in any mode. Train-only returns None.
pub fn run_plan_with(
    spec: &ClassifierSpec,
    ds: &Dataset,
    plan: SplitPlan,
    rounds: usize,
    repeats: usize,
    base_seed: u64,
    mode: RunMode<'_>,
) -> Result<Option<ValidationReport>> {
    match plan {
        SplitPlan::Holdout { train_fraction } => repeated_holdout_impl(
            spec,
            ds,
            train_fraction,
            false,
            rounds,
            repeats,
            base_seed,
            mode,
        ),
        SplitPlan::StratifiedHoldout { train_fraction } => repeated_holdout_impl(
            spec,
            ds,
            train_fraction,
            true,
            rounds,
            repeats,
            base_seed,
            mode,
        ),
        SplitPlan::KFold { k } => {
            repeated_kfold_impl(spec, ds, k, rounds, repeats, base_seed, mode)
        }
    }
}

/// Run whichever plan is configured, fitting and scoring in one pass.
pub fn run_plan(
    spec: &ClassifierSpec,
    ds: &Dataset,
    plan: SplitPlan,
    rounds: usize,
    repeats: usize,
    base_seed: u64,
) -> Result<ValidationReport> {
    run_plan_with(spec, ds, plan, rounds, repeats, base_seed, RunMode::Direct)
        .map(|r| r.expect("direct mode yields a report"))
}
