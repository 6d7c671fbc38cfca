//! In-memory dataset: numeric feature rows plus binary labels.
//!
//! Raw (pre-encoding) datasets store categorical cells as string-table ids and
//! missing numerics as NaN; [`super::preprocess::Preprocessor`] turns them into
//! the fully numeric form the learners consume. Datasets are immutable after
//! construction and cheap to subset, so parallel workers share them freely.

use std::collections::HashMap;
use std::sync::Arc;

use super::preprocess::Preprocessor;
use super::schema::{ColumnKind, DatasetSchema};
use crate::error::{Error, Result};

/// Per-column string table for categorical cells. Index order is file
/// appearance order; the same table is shared by every subset of one load.
#[derive(Debug, Default, Clone)]
pub struct ColumnVocab {
    values: Vec<String>,
    index: HashMap<String, u32>,
}

impl ColumnVocab {
    pub fn intern(&mut self, value: &str) -> u32 {
        if let Some(&id) = self.index.get(value) {
            return id;
        }
        let id = self.values.len() as u32;
        self.values.push(value.to_string());
        self.index.insert(value.to_string(), id);
        id
    }

    pub fn resolve(&self, id: u32) -> Option<&str> {
        self.values.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.values.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    schema: Arc<DatasetSchema>,
    rows: Vec<Vec<f64>>,
    labels: Vec<u8>,
    /// One vocab per feature column; empty for numeric columns.
    vocab: Arc<Vec<ColumnVocab>>,
    /// Set once the dataset has been encoded/normalized; carries the fitted
    /// transform so test partitions reuse (never refit) the train statistics.
    transform: Option<Arc<Preprocessor>>,
}

impl Dataset {
    pub fn new(
        schema: Arc<DatasetSchema>,
        rows: Vec<Vec<f64>>,
        labels: Vec<u8>,
        vocab: Arc<Vec<ColumnVocab>>,
    ) -> Self {
        debug_assert_eq!(rows.len(), labels.len());
        Dataset {
            schema,
            rows,
            labels,
            vocab,
            transform: None,
        }
    }

    pub(crate) fn with_transform(mut self, pre: Arc<Preprocessor>) -> Self {
        self.transform = Some(pre);
        self
    }

    pub fn schema(&self) -> &DatasetSchema {
        &self.schema
    }

    pub fn schema_arc(&self) -> Arc<DatasetSchema> {
        Arc::clone(&self.schema)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.schema.feature_count()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn vocab(&self) -> &[ColumnVocab] {
        &self.vocab
    }

    pub fn vocab_arc(&self) -> Arc<Vec<ColumnVocab>> {
        Arc::clone(&self.vocab)
    }

    pub fn transform(&self) -> Option<&Arc<Preprocessor>> {
        self.transform.as_ref()
    }

    pub fn is_encoded(&self) -> bool {
        self.transform.is_some()
    }

    /// (normal, attack) instance counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let attack = self.labels.iter().filter(|&&l| l == 1).count();
        (self.labels.len() - attack, attack)
    }

    pub fn has_both_classes(&self) -> bool {
        let (n, a) = self.class_counts();
        n > 0 && a > 0
    }

    /// New dataset holding the given rows (in the given order). Vocab, schema
    /// and any fitted transform are shared.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: Arc::clone(&self.schema),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            vocab: Arc::clone(&self.vocab),
            transform: self.transform.clone(),
        }
    }

    /// Decode a categorical cell of a *raw* dataset back to its string.
    pub fn raw_category(&self, feature: usize, raw_id: f64) -> Option<&str> {
        self.vocab.get(feature)?.resolve(raw_id as u32)
    }

    pub fn feature_kinds(&self) -> Vec<ColumnKind> {
        self.schema.feature_kinds()
    }

    pub fn check_dims(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                got: x.len(),
            });
        }
        Ok(())
    }
}
