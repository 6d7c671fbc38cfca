//! Delimited-text ingestion for the flow datasets.
//!
//! Auto-detects comma vs tab, handles RFC-4180 quoting via the csv crate,
//! matches headers to the schema by name (order-insensitive), binarizes
//! labels through the schema's class rules and interns categorical cells.
//! Unparseable rows are skipped and collected; the load fails when more than
//! 1% of data rows are bad.

use std::path::Path;
use std::sync::Arc;

use super::dataset::{ColumnVocab, Dataset};
use super::schema::{ColumnKind, ColumnRole, DatasetSchema};
use crate::error::{Error, Result};

const BAD_ROW_LIMIT_PERCENT: f64 = 1.0;
const ERROR_SAMPLE_CAP: usize = 20;

/// What happened during a load, beyond the rows themselves.
#[derive(Debug, Clone, Default)]
pub struct LoadReport {
    pub rows_kept: usize,
    /// Rows dropped by the schema's exclude rules (e.g. CIDDS suspicious).
    pub rows_excluded: usize,
    pub rows_skipped: usize,
    /// First few (line number, reason) pairs for skipped rows.
    pub skipped_sample: Vec<(u64, String)>,
    pub warnings: Vec<String>,
}

pub fn load_dataset(path: &Path, schema: &DatasetSchema) -> Result<Dataset> {
    load_dataset_report(path, schema).map(|(ds, _)| ds)
}

pub fn load_dataset_report(path: &Path, schema: &DatasetSchema) -> Result<(Dataset, LoadReport)> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let text_head = sniff_head(path)?;
    let delimiter = detect_delimiter(&text_head);

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(delimiter)
        .from_path(path)?;

    // Map each schema column to its position in the file.
    let mut records = reader.records();
    let col_positions: Vec<usize> = if schema.headerless {
        (0..schema.columns.len()).collect()
    } else {
        let header = match records.next() {
            Some(rec) => rec?,
            None => {
                // Completely empty file: treat as header-only.
                let report = LoadReport {
                    warnings: vec![format!("{}: empty file, 0 rows loaded", path.display())],
                    ..Default::default()
                };
                return Ok((empty_dataset(schema), report));
            }
        };
        let names: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
        let mut positions = Vec::with_capacity(schema.columns.len());
        for col in &schema.columns {
            match names.iter().position(|n| n == &col.name) {
                Some(p) => positions.push(p),
                None => return Err(Error::SchemaMismatch(col.name.clone())),
            }
        }
        positions
    };

    let feature_slots: Vec<(usize, ColumnKind)> = schema
        .columns
        .iter()
        .zip(&col_positions)
        .filter_map(|(col, &pos)| match col.role {
            ColumnRole::Feature(kind) => Some((pos, kind)),
            _ => None,
        })
        .collect();
    let label_slots: Vec<usize> = schema
        .columns
        .iter()
        .zip(&col_positions)
        .filter(|(col, _)| col.role == ColumnRole::Label)
        .map(|(_, &pos)| pos)
        .collect();
    let min_record_len = col_positions.iter().max().map_or(0, |m| m + 1);

    let mut vocab: Vec<ColumnVocab> = vec![ColumnVocab::default(); feature_slots.len()];
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    let mut report = LoadReport::default();
    let mut data_rows = 0usize;

    let mut line_no: u64 = if schema.headerless { 0 } else { 1 };
    for rec in records {
        line_no += 1;
        data_rows += 1;
        let rec = match rec {
            Ok(r) => r,
            Err(e) => {
                skip(&mut report, line_no, format!("csv: {e}"));
                continue;
            }
        };
        if rec.len() == 1 && rec.get(0).is_some_and(|f| f.trim().is_empty()) {
            data_rows -= 1; // blank line, not a data row
            continue;
        }
        if rec.len() < min_record_len {
            skip(
                &mut report,
                line_no,
                format!(
                    "expected at least {min_record_len} fields, got {}",
                    rec.len()
                ),
            );
            continue;
        }

        let label_values: Vec<&str> = label_slots
            .iter()
            .map(|&pos| rec.get(pos).unwrap_or("").trim())
            .collect();
        let label = match schema.binarize(&label_values) {
            Some(l) => l,
            None => {
                report.rows_excluded += 1;
                continue;
            }
        };

        let mut row = Vec::with_capacity(feature_slots.len());
        let mut bad: Option<String> = None;
        for (fi, &(pos, kind)) in feature_slots.iter().enumerate() {
            let cell = rec.get(pos).unwrap_or("").trim();
            match kind {
                ColumnKind::Numeric => match parse_numeric(cell) {
                    Ok(v) => row.push(v),
                    Err(reason) => {
                        bad = Some(format!("field {pos}: {reason}"));
                        break;
                    }
                },
                ColumnKind::Categorical => {
                    row.push(f64::from(vocab[fi].intern(cell)));
                }
            }
        }
        match bad {
            Some(reason) => skip(&mut report, line_no, reason),
            None => {
                rows.push(row);
                labels.push(label);
            }
        }
    }

    report.rows_kept = rows.len();
    if data_rows == 0 {
        report.warnings.push(format!(
            "{}: header-only file, 0 rows loaded",
            path.display()
        ));
    }
    if report.rows_skipped > 0 {
        let percent = 100.0 * report.rows_skipped as f64 / data_rows as f64;
        if percent > BAD_ROW_LIMIT_PERCENT {
            return Err(Error::TooManyBadRows {
                skipped: report.rows_skipped,
                total: data_rows,
                limit_percent: BAD_ROW_LIMIT_PERCENT,
                sample: report
                    .skipped_sample
                    .iter()
                    .map(|(l, r)| format!("line {l}: {r}"))
                    .collect(),
            });
        }
        report.warnings.push(format!(
            "{}: skipped {} of {} rows ({percent:.3}%)",
            path.display(),
            report.rows_skipped,
            data_rows
        ));
    }

    let ds = Dataset::new(Arc::new(schema.clone()), rows, labels, Arc::new(vocab));
    Ok((ds, report))
}

fn skip(report: &mut LoadReport, line_no: u64, reason: String) {
    report.rows_skipped += 1;
    if report.skipped_sample.len() < ERROR_SAMPLE_CAP {
        report.skipped_sample.push((line_no, reason));
    }
}

fn empty_dataset(schema: &DatasetSchema) -> Dataset {
    let vocab = vec![ColumnVocab::default(); schema.feature_count()];
    Dataset::new(
        Arc::new(schema.clone()),
        Vec::new(),
        Vec::new(),
        Arc::new(vocab),
    )
}

/// Numeric cell parser. Empty / placeholder cells are missing (NaN, imputed
/// later from train medians). CIDDS-001 prints byte counts like "2.1 M";
/// K/M/G suffixes are expanded.
fn parse_numeric(cell: &str) -> std::result::Result<f64, String> {
    if cell.is_empty() || cell == "?" || cell == "-" || cell.eq_ignore_ascii_case("na") {
        return Ok(f64::NAN);
    }
    if let Ok(v) = cell.parse::<f64>() {
        return Ok(v);
    }
    // Hex ports appear in some UNSW-NB15 rows (e.g. 0x20205321).
    if let Some(hex) = cell.strip_prefix("0x").or_else(|| cell.strip_prefix("0X")) {
        if let Ok(v) = u64::from_str_radix(hex, 16) {
            return Ok(v as f64);
        }
    }
    let (mantissa, scale) = match cell.chars().last() {
        Some('K' | 'k') => (&cell[..cell.len() - 1], 1e3),
        Some('M' | 'm') => (&cell[..cell.len() - 1], 1e6),
        Some('G' | 'g') => (&cell[..cell.len() - 1], 1e9),
        _ => return Err(format!("not numeric: {cell:?}")),
    };
    mantissa
        .trim()
        .parse::<f64>()
        .map(|v| v * scale)
        .map_err(|_| format!("not numeric: {cell:?}"))
}

fn sniff_head(path: &Path) -> Result<String> {
    use std::io::{BufRead, BufReader};
    let file = std::fs::File::open(path)?;
    let mut line = String::new();
    BufReader::new(file).read_line(&mut line)?;
    Ok(line)
}

fn detect_delimiter(head: &str) -> u8 {
    let mut in_quotes = false;
    let (mut commas, mut tabs) = (0usize, 0usize);
    for c in head.chars() {
        match c {
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => commas += 1,
            '\t' if !in_quotes => tabs += 1,
            _ => {}
        }
    }
    if tabs > commas {
        b'\t'
    } else {
        b','
    }
}
