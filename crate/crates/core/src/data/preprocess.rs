//! Encoding and normalization.
//!
//! A [`Preprocessor`] is fitted on a training partition only: categorical
//! dictionaries in order of first appearance (codes start at 1; 0 is reserved
//! for categories unseen at fit time), numeric min-max statistics and the
//! median used to impute missing values. The fitted transform is then
//! *applied* to test partitions, never refitted.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::schema::ColumnKind;
use crate::error::{Error, Result};

/// Code reserved for categories not present in the fitting partition.
pub const UNSEEN_CODE: f64 = 0.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ColumnTransform {
    Categorical {
        /// dict[i] holds the category encoded as i + 1.
        dict: Vec<String>,
    },
    Numeric {
        min: f64,
        max: f64,
        median: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Preprocessor {
    columns: Vec<ColumnTransform>,
    #[serde(skip)]
    lookup: Vec<Option<HashMap<String, f64>>>,
}

impl Preprocessor {
    /// Fit dictionaries and normalization statistics on `train`.
    pub fn fit(train: &Dataset) -> Result<Self> {
        if train.is_encoded() {
            return Err(Error::InvalidSchema(
                "dataset is already encoded; fit on raw data".into(),
            ));
        }
        let kinds = train.feature_kinds();
        let mut columns = Vec::with_capacity(kinds.len());
        for (col, kind) in kinds.iter().enumerate() {
            match kind {
                ColumnKind::Categorical => {
                    let vocab = &train.vocab()[col];
                    let mut seen = vec![false; vocab.len()];
                    let mut dict = Vec::new();
                    for row in train.rows() {
                        let id = row[col] as usize;
                        if !seen[id] {
                            seen[id] = true;
                            dict.push(
                                vocab
                                    .resolve(id as u32)
                                    .expect("raw id within vocab")
                                    .to_string(),
                            );
                        }
                    }
                    columns.push(ColumnTransform::Categorical { dict });
                }
                ColumnKind::Numeric => {
                    let mut values: Vec<f64> = train
                        .rows()
                        .iter()
                        .map(|r| r[col])
                        .filter(|v| !v.is_nan())
                        .collect();
                    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    let (min, max, median) = if values.is_empty() {
                        (0.0, 0.0, 0.0)
                    } else {
                        let n = values.len();
                        let median = if n % 2 == 1 {
                            values[n / 2]
                        } else {
                            0.5 * (values[n / 2 - 1] + values[n / 2])
                        };
                        (values[0], values[n - 1], median)
                    };
                    columns.push(ColumnTransform::Numeric { min, max, median });
                }
            }
        }
        let mut pre = Preprocessor {
            columns,
            lookup: Vec::new(),
        };
        pre.rebuild_lookup();
        Ok(pre)
    }

    /// Rebuild the string->code maps after fit or deserialization.
    pub fn rebuild_lookup(&mut self) {
        self.lookup = self
            .columns
            .iter()
            .map(|c| match c {
                ColumnTransform::Categorical { dict } => Some(
                    dict.iter()
                        .enumerate()
                        .map(|(i, s)| (s.clone(), (i + 1) as f64))
                        .collect(),
                ),
                ColumnTransform::Numeric { .. } => None,
            })
            .collect();
    }

    /// Apply the fitted transform: categorical cells to dictionary codes
    /// (unseen -> 0), numeric cells imputed with the train median then
    /// min-max scaled; zero-range columns map to all zeros.
    pub fn transform(&self, ds: &Dataset) -> Result<Dataset> {
        if ds.n_features() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                got: ds.n_features(),
            });
        }
        let kinds = ds.feature_kinds();
        let mut rows = Vec::with_capacity(ds.n_rows());
        for row in ds.rows() {
            let mut out = Vec::with_capacity(row.len());
            for (col, &cell) in row.iter().enumerate() {
                match (&self.columns[col], kinds[col]) {
                    (ColumnTransform::Categorical { .. }, ColumnKind::Categorical) => {
                        let code = ds
                            .raw_category(col, cell)
                            .and_then(|s| self.encode_category(col, s))
                            .unwrap_or(UNSEEN_CODE);
                        out.push(code);
                    }
                    (ColumnTransform::Numeric { min, max, median }, ColumnKind::Numeric) => {
                        let v = if cell.is_nan() { *median } else { cell };
                        let range = max - min;
                        out.push(if range > 0.0 { (v - min) / range } else { 0.0 });
                    }
                    _ => {
                        return Err(Error::InvalidSchema(format!(
                            "column {col} kind does not match fitted transform"
                        )))
                    }
                }
            }
            rows.push(out);
        }
        let encoded = Dataset::new(ds.schema_arc(), rows, ds.labels().to_vec(), ds.vocab_arc());
        Ok(encoded.with_transform(Arc::new(self.clone())))
    }

    /// Code for a known category of a fitted categorical column.
    pub fn encode_category(&self, col: usize, value: &str) -> Option<f64> {
        self.lookup.get(col)?.as_ref()?.get(value).copied()
    }

    /// Category string for a code of a fitted categorical column
    /// (code 0 is the reserved unseen bucket).
    pub fn decode_category(&self, col: usize, code: f64) -> Option<&str> {
        match &self.columns[col] {
            ColumnTransform::Categorical { dict } => {
                let code = code as usize;
                if code == 0 {
                    None
                } else {
                    dict.get(code - 1).map(String::as_str)
                }
            }
            ColumnTransform::Numeric { .. } => None,
        }
    }

    pub fn columns(&self) -> &[ColumnTransform] {
        &self.columns
    }

    pub fn from_columns(columns: Vec<ColumnTransform>) -> Self {
        let mut pre = Preprocessor {
            columns,
            lookup: Vec::new(),
        };
        pre.rebuild_lookup();
        pre
    }
}

/// Fit on `ds` and transform it in one step.
pub fn encode_and_normalize(ds: &Dataset) -> Result<Dataset> {
    Preprocessor::fit(ds)?.transform(ds)
}
