//! Index-value data: one numeric value per category of a taxonomy.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::label::{CategoryLabel, LabelError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("invalid key at entry {index}: {source}")]
    InvalidKey {
        index: usize,
        #[source]
        source: LabelError,
    },
    #[error("duplicate key {0}")]
    DuplicateKey(CategoryLabel),
    #[error("value for {0} is not finite")]
    NonFiniteValue(CategoryLabel),
}

/// Category-to-value association tagged with the taxonomy its keys belong to.
///
/// Entries iterate in ascending key order.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedSeries {
    taxonomy: String,
    entries: BTreeMap<CategoryLabel, f64>,
}

impl IndexedSeries {
    pub fn new<I, K>(taxonomy: impl Into<String>, entries: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (K, f64)>,
        K: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (index, (key, value)) in entries.into_iter().enumerate() {
            let key = CategoryLabel::new(key).map_err(|source| SeriesError::InvalidKey { index, source })?;
            if !value.is_finite() {
                return Err(SeriesError::NonFiniteValue(key));
            }
            if map.contains_key(&key) {
                return Err(SeriesError::DuplicateKey(key));
            }
            map.insert(key, value);
        }
        Ok(Self {
            taxonomy: taxonomy.into(),
            entries: map,
        })
    }

    /// Wraps an already-validated map. Callers guarantee finite values.
    pub(crate) fn from_map(taxonomy: impl Into<String>, entries: BTreeMap<CategoryLabel, f64>) -> Self {
        debug_assert!(entries.values().all(|v| v.is_finite()));
        Self {
            taxonomy: taxonomy.into(),
            entries,
        }
    }

    pub fn taxonomy(&self) -> &str {
        &self.taxonomy
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.entries.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CategoryLabel, f64)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &CategoryLabel> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all values in key order.
    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }
}
