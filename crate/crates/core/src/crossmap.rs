//! The crossmap: a validated, directed, weighted bipartite mapping from the
//! categories of a source taxonomy to the categories of a target taxonomy.
//!
//! Each [`Link`] says what share of a source category's numeric mass flows to
//! a target category. A [`Crossmap`] can only be obtained through validation,
//! which enforces:
//!
//! * at least one link,
//! * at most one link per `(from, to)` pair,
//! * every weight in `(0, 1]`,
//! * the outgoing weights of every source category sum to one (within
//!   [`WEIGHT_SUM_TOLERANCE`]).
//!
//! Incoming weight totals are not constrained: a target fed by two unit links
//! (an aggregation) receives a total weight of two.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::{CategoryLabel, LabelError};

/// Allowed deviation of a source category's outgoing weight sum from one.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrossmapError {
    #[error("crossmap has no links")]
    EmptyCrossmap,
    #[error("link {index} has an invalid {side} label: {source}")]
    InvalidLabel {
        index: usize,
        side: &'static str,
        #[source]
        source: LabelError,
    },
    #[error("duplicate link {from} -> {to}")]
    DuplicateLink { from: CategoryLabel, to: CategoryLabel },
    #[error("link {from} -> {to} has weight {weight}, expected a value in (0, 1]")]
    WeightOutOfRange {
        from: CategoryLabel,
        to: CategoryLabel,
        weight: f64,
    },
    #[error("outgoing weights of {from} sum to {sum}, expected 1")]
    WeightSumViolation { from: CategoryLabel, sum: f64 },
    #[error("unknown category {0}")]
    UnknownCategory(CategoryLabel),
}

/// One weighted relation between a source and a target category.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub from: CategoryLabel,
    pub to: CategoryLabel,
    pub weight: f64,
}

impl Link {
    pub fn new(from: CategoryLabel, to: CategoryLabel, weight: f64) -> Self {
        Self { from, to, weight }
    }
}

/// Structural role of a category within a crossmap.
///
/// `OneToOne` and `Split` describe source categories by out-degree;
/// `Unique` and `Aggregate` describe target categories by in-degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    OneToOne,
    Split,
    Unique,
    Aggregate,
}

/// Relation census and syntheticness statistics of a crossmap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossmapSummary {
    pub n_sources: usize,
    pub n_targets: usize,
    pub n_links: usize,
    pub n_splits: usize,
    pub n_aggregates: usize,
    pub max_in_degree: usize,
    pub is_crosswalk: bool,
    /// Every target with its in-degree, highest in-degree first, ties by label.
    pub most_synthetic_targets: Vec<(CategoryLabel, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Crossmap {
    source_taxonomy: String,
    target_taxonomy: String,
    links: Vec<Link>,
    sources: Vec<CategoryLabel>,
    targets: Vec<CategoryLabel>,
    out_degree: BTreeMap<CategoryLabel, usize>,
    in_degree: BTreeMap<CategoryLabel, usize>,
}

/// Builds a crossmap from raw `(from, to, weight)` triples.
///
/// Labels are trimmed and validated, then the links go through
/// [`Crossmap::new`]. Input order is kept.
pub fn build_crossmap<I, F, T>(
    source_taxonomy: impl Into<String>,
    target_taxonomy: impl Into<String>,
    links: I,
) -> Result<Crossmap, CrossmapError>
where
    I: IntoIterator<Item = (F, T, f64)>,
    F: AsRef<str>,
    T: AsRef<str>,
{
    let links = links
        .into_iter()
        .enumerate()
        .map(|(index, (from, to, weight))| {
            let from = CategoryLabel::new(from).map_err(|source| CrossmapError::InvalidLabel {
                index,
                side: "from",
                source,
            })?;
            let to = CategoryLabel::new(to).map_err(|source| CrossmapError::InvalidLabel {
                index,
                side: "to",
                source,
            })?;
            Ok(Link::new(from, to, weight))
        })
        .collect::<Result<Vec<_>, CrossmapError>>()?;
    Crossmap::new(source_taxonomy, target_taxonomy, links)
}

fn by_pair(a: &Link, b: &Link) -> Ordering {
    a.from.cmp(&b.from).then_with(|| a.to.cmp(&b.to))
}

fn first_appearance<'a>(labels: impl Iterator<Item = &'a CategoryLabel>) -> Vec<CategoryLabel> {
    let mut seen = BTreeSet::new();
    labels.filter(|label| seen.insert(*label)).cloned().collect()
}

impl Crossmap {
    /// Validates `links` and returns the crossmap.
    ///
    /// Checks run in a fixed order: emptiness, finiteness of weights,
    /// duplicate pairs, per-source weight sums, then the `(0, 1]` range of
    /// each weight. Every check walks the links sorted by `(from, to)`, so the
    /// reported error does not depend on input order.
    pub fn new(
        source_taxonomy: impl Into<String>,
        target_taxonomy: impl Into<String>,
        links: Vec<Link>,
    ) -> Result<Self, CrossmapError> {
        if links.is_empty() {
            return Err(CrossmapError::EmptyCrossmap);
        }
        let mut sorted: Vec<&Link> = links.iter().collect();
        sorted.sort_by(|a, b| by_pair(a, b));

        if let Some(link) = sorted.iter().find(|l| !l.weight.is_finite()) {
            return Err(CrossmapError::WeightOutOfRange {
                from: link.from.clone(),
                to: link.to.clone(),
                weight: link.weight,
            });
        }
        if let Some(pair) = sorted.windows(2).find(|w| w[0].from == w[1].from && w[0].to == w[1].to) {
            return Err(CrossmapError::DuplicateLink {
                from: pair[0].from.clone(),
                to: pair[0].to.clone(),
            });
        }
        for group in sorted.chunk_by(|a, b| a.from == b.from) {
            let sum: f64 = group.iter().map(|l| l.weight).sum();
            if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                return Err(CrossmapError::WeightSumViolation {
                    from: group[0].from.clone(),
                    sum,
                });
            }
        }
        if let Some(link) = sorted.iter().find(|l| l.weight <= 0.0 || l.weight > 1.0) {
            return Err(CrossmapError::WeightOutOfRange {
                from: link.from.clone(),
                to: link.to.clone(),
                weight: link.weight,
            });
        }

        let mut out_degree = BTreeMap::new();
        let mut in_degree = BTreeMap::new();
        for link in &links {
            *out_degree.entry(link.from.clone()).or_insert(0) += 1;
            *in_degree.entry(link.to.clone()).or_insert(0) += 1;
        }
        Ok(Self {
            source_taxonomy: source_taxonomy.into(),
            target_taxonomy: target_taxonomy.into(),
            sources: first_appearance(links.iter().map(|l| &l.from)),
            targets: first_appearance(links.iter().map(|l| &l.to)),
            links,
            out_degree,
            in_degree,
        })
    }

    pub fn source_taxonomy(&self) -> &str {
        &self.source_taxonomy
    }

    pub fn target_taxonomy(&self) -> &str {
        &self.target_taxonomy
    }

    /// Links in input order.
    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Links sorted by `(from, to)`. All numeric reductions use this order.
    pub fn sorted_links(&self) -> Vec<&Link> {
        let mut sorted: Vec<&Link> = self.links.iter().collect();
        sorted.sort_by(|a, b| by_pair(a, b));
        sorted
    }

    /// Source categories in order of first appearance.
    pub fn sources(&self) -> &[CategoryLabel] {
        &self.sources
    }

    /// Target categories in order of first appearance.
    pub fn targets(&self) -> &[CategoryLabel] {
        &self.targets
    }

    pub fn has_source(&self, label: &str) -> bool {
        self.out_degree.contains_key(label)
    }

    pub fn has_target(&self, label: &str) -> bool {
        self.in_degree.contains_key(label)
    }

    /// Out-degree of a source category, zero if unknown.
    pub fn out_degree(&self, label: &str) -> usize {
        self.out_degree.get(label).copied().unwrap_or(0)
    }

    /// In-degree of a target category, zero if unknown.
    pub fn in_degree(&self, label: &str) -> usize {
        self.in_degree.get(label).copied().unwrap_or(0)
    }

    pub fn weight(&self, from: &str, to: &str) -> Option<f64> {
        self.links
            .iter()
            .find(|l| l.from.as_str() == from && l.to.as_str() == to)
            .map(|l| l.weight)
    }

    /// Outgoing links of `from`, sorted by target label.
    pub fn links_from(&self, from: &str) -> Vec<&Link> {
        let mut out: Vec<&Link> = self.links.iter().filter(|l| l.from.as_str() == from).collect();
        out.sort_by(|a, b| a.to.cmp(&b.to));
        out
    }

    /// True when every link has unit weight, i.e. the crossmap is a plain
    /// lookup table with no splits.
    pub fn is_crosswalk(&self) -> bool {
        self.links.iter().all(|l| l.weight == 1.0)
    }

    pub fn classify_source(&self, label: &str) -> Result<RelationKind, CrossmapError> {
        match self.out_degree.get(label) {
            Some(&d) if d > 1 => Ok(RelationKind::Split),
            Some(_) => Ok(RelationKind::OneToOne),
            None => Err(CrossmapError::UnknownCategory(unknown(label))),
        }
    }

    pub fn classify_target(&self, label: &str) -> Result<RelationKind, CrossmapError> {
        match self.in_degree.get(label) {
            Some(&d) if d > 1 => Ok(RelationKind::Aggregate),
            Some(_) => Ok(RelationKind::Unique),
            None => Err(CrossmapError::UnknownCategory(unknown(label))),
        }
    }

    pub fn summarize(&self) -> CrossmapSummary {
        let mut most_synthetic: Vec<(CategoryLabel, usize)> =
            self.in_degree.iter().map(|(label, &d)| (label.clone(), d)).collect();
        // BTreeMap iteration is label-ascending, so a stable sort keeps label ties ordered.
        most_synthetic.sort_by_key(|&(_, d)| std::cmp::Reverse(d));
        CrossmapSummary {
            n_sources: self.sources.len(),
            n_targets: self.targets.len(),
            n_links: self.links.len(),
            n_splits: self.out_degree.values().filter(|&&d| d > 1).count(),
            n_aggregates: self.in_degree.values().filter(|&&d| d > 1).count(),
            max_in_degree: self.in_degree.values().copied().max().unwrap_or(0),
            is_crosswalk: self.is_crosswalk(),
            most_synthetic_targets: most_synthetic,
        }
    }
}

// Labels passed in as &str may not be valid labels at all; keep the text
// readable in the error either way.
fn unknown(label: &str) -> CategoryLabel {
    CategoryLabel::new(label).unwrap_or_else(|_| CategoryLabel::raw(format!("{label:?}")))
}
