//! `ingest`: parse a delimited flow file against a schema, optionally take a
//! stratified sample, and write the columnar binary cache.

use std::path::Path;

use anyhow::{Context, Result};

use idsbench::data::{load_dataset_report, sample_stratified, save_cache};

use crate::config::resolve_schema;

pub fn ingest(
    data: &Path,
    schema_arg: &str,
    out: &Path,
    sample: Option<(usize, usize)>,
    seed: u64,
) -> Result<()> {
    let schema = resolve_schema(schema_arg, Path::new("."))?;
    let (ds, report) = load_dataset_report(data, &schema)
        .with_context(|| format!("loading {}", data.display()))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let (n_normal, n_attack) = ds.class_counts();
    eprintln!(
        "{}: kept {} rows ({n_normal} normal, {n_attack} attack), excluded {}, skipped {}",
        data.display(),
        report.rows_kept,
        report.rows_excluded,
        report.rows_skipped
    );
    let ds = match sample {
        Some((normal, attack)) => {
            let sampled = sample_stratified(&ds, normal, attack, seed)?;
            eprintln!("sampled {normal} normal + {attack} attack rows (seed {seed})");
            sampled
        }
        None => ds,
    };
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    save_cache(&ds, out)?;
    eprintln!("cache written to {}", out.display());
    Ok(())
}
