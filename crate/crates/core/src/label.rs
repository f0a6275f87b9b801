//! Category labels: the codes that name nodes in a taxonomy layer.

use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Why a piece of text was refused as a category label.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("category label is empty")]
    Empty,
    #[error("category label {0:?} contains a forbidden character (comma, newline or double quote)")]
    ForbiddenCharacter(String),
}

/// A taxonomy category code such as `BLX` or `004`.
///
/// Labels are opaque strings. They are trimmed on construction and then
/// compared byte-for-byte, so `"004"` and `"4"` are different categories and
/// no case folding happens. Commas, newlines and double quotes are rejected so
/// that the CSV formats in [`crate::io`] never need quoting.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CategoryLabel(String);

impl CategoryLabel {
    pub fn new(text: impl AsRef<str>) -> Result<Self, LabelError> {
        let trimmed = text.as_ref().trim();
        if trimmed.is_empty() {
            return Err(LabelError::Empty);
        }
        if trimmed.contains([',', '\n', '\r', '"']) {
            return Err(LabelError::ForbiddenCharacter(trimmed.to_string()));
        }
        Ok(Self(trimmed.to_string()))
    }

    /// Wraps text without validation, for diagnostics only.
    pub(crate) fn raw(text: String) -> Self {
        Self(text)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CategoryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CategoryLabel {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for CategoryLabel {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for CategoryLabel {
    type Error = LabelError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl TryFrom<&str> for CategoryLabel {
    type Error = LabelError;

    fn try_from(value: &str) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<CategoryLabel> for String {
    fn from(label: CategoryLabel) -> Self {
        label.0
    }
}
