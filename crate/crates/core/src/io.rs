//! Text interchange formats.
//!
//! | document        | header           |
//! |-----------------|------------------|
//! | edge list       | `from,to,weight` |
//! | value series    | `key,value`      |
//! | panel           | `unit,key,value` |
//! | wide crosswalk  | any column names |
//!
//! All formats are plain comma-separated UTF-8 without quoting; category
//! labels cannot contain commas, quotes or newlines, so none is needed.
//! Output always uses `\n` line endings; input also accepts `\r\n`. Blank
//! lines are ignored. Line numbers in errors are 1-based and count the header.
//!
//! Labels are never interpreted as numbers, so codes like `004` survive
//! verbatim.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::crossmap::{Crossmap, CrossmapError, CrossmapSummary, Link};
use crate::label::CategoryLabel;
use crate::series::IndexedSeries;
use crate::transform::{HarmonisedPanel, PanelRow};

pub const EDGE_LIST_HEADER: &str = "from,to,weight";
pub const SERIES_HEADER: &str = "key,value";
pub const PANEL_HEADER: &str = "unit,key,value";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{}{source}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Crossmap {
        line: Option<usize>,
        #[source]
        source: CrossmapError,
    },
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("line {line}: source code {label} appears more than once")]
    DuplicateSourceCode { line: usize, label: CategoryLabel },
    #[error("line {line}: empty cell in column {column:?}")]
    EmptyCell { line: usize, column: String },
    #[error("line {line}: duplicate key {label}")]
    DuplicateKey { line: usize, label: CategoryLabel },
    #[error("line {line}: value is not a finite number")]
    NonFiniteValue { line: usize },
    #[error("invalid summary JSON: {0}")]
    Json(String),
}

type Result<T> = std::result::Result<T, IoError>;

/// Non-blank lines with their 1-based line numbers, `\r` stripped.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    text.split('\n')
        .enumerate()
        .map(|(i, line)| (i + 1, line.strip_suffix('\r').unwrap_or(line)))
        .filter(|(_, line)| !line.trim().is_empty())
}

fn parse_err(line: usize, reason: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        reason: reason.into(),
    }
}

fn expect_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, header: &str) -> Result<()> {
    match lines.next() {
        Some((_, text)) if text.trim() == header => Ok(()),
        Some((line, text)) => Err(parse_err(line, format!("expected header {header:?}, found {text:?}"))),
        None => Err(parse_err(1, format!("missing header {header:?}"))),
    }
}

fn fields(line: usize, text: &str, expected: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = text.split(',').map(str::trim).collect();
    if fields.len() != expected {
        return Err(parse_err(
            line,
            format!("expected {expected} fields, found {}", fields.len()),
        ));
    }
    Ok(fields)
}

fn label(line: usize, text: &str) -> Result<CategoryLabel> {
    CategoryLabel::new(text).map_err(|e| parse_err(line, e.to_string()))
}

fn number(line: usize, text: &str, what: &str) -> Result<f64> {
    text.parse::<f64>()
        .map_err(|_| parse_err(line, format!("invalid {what} {text:?}")))
}

/// Parses a `from,to,weight` edge list into a validated crossmap.
///
/// Validation failures from [`Crossmap::new`] are reported with the line of
/// the offending row.
pub fn read_edge_list(
    text: &str,
    source_taxonomy: impl Into<String>,
    target_taxonomy: impl Into<String>,
) -> Result<Crossmap> {
    let mut lines = numbered_lines(text);
    expect_header(&mut lines, EDGE_LIST_HEADER)?;
    let mut links = Vec::new();
    let mut line_of = Vec::new();
    for (line, row) in lines {
        let f = fields(line, row, 3)?;
        let weight = number(line, f[2], "weight")?;
        if !weight.is_finite() {
            return Err(parse_err(line, format!("invalid weight {:?}", f[2])));
        }
        links.push(Link::new(label(line, f[0])?, label(line, f[1])?, weight));
        line_of.push(line);
    }
    if links.is_empty() {
        return Err(IoError::Crossmap {
            line: None,
            source: CrossmapError::EmptyCrossmap,
        });
    }
    let located = |pred: &dyn Fn(&Link) -> bool, last: bool| {
        let mut hits = links.iter().zip(&line_of).filter(|(l, _)| pred(l)).map(|(_, &n)| n);
        if last {
            hits.last()
        } else {
            hits.next()
        }
    };
    let lookup_line = |err: &CrossmapError| match err {
        CrossmapError::DuplicateLink { from, to } => located(&|l| &l.from == from && &l.to == to, true),
        CrossmapError::WeightOutOfRange { from, to, .. } => located(&|l| &l.from == from && &l.to == to, false),
        CrossmapError::WeightSumViolation { from, .. } => located(&|l| &l.from == from, false),
        _ => None,
    };
    Crossmap::new(source_taxonomy, target_taxonomy, links.clone()).map_err(|source| IoError::Crossmap {
        line: lookup_line(&source),
        source,
    })
}

/// Formats a weight with at most nine fractional digits, trailing zeros
/// trimmed; unit weights print as `1`.
pub fn format_weight(weight: f64) -> String {
    let text = format!("{weight:.9}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".to_string()
    } else {
        text.to_string()
    }
}

pub fn write_edge_list(map: &Crossmap) -> String {
    let mut out = String::from(EDGE_LIST_HEADER);
    out.push('\n');
    for link in map.links() {
        let _ = writeln!(out, "{},{},{}", link.from, link.to, format_weight(link.weight));
    }
    out
}

/// A table of aligned code columns, one row per correspondence.
///
/// Extra descriptive columns (country names and the like) may be present;
/// only the two columns selected at import time are used.
#[derive(Debug, Clone, PartialEq)]
pub struct WideCrosswalkDocument {
    columns: Vec<String>,
    rows: Vec<(usize, Vec<String>)>,
}

impl WideCrosswalkDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = numbered_lines(text);
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
        let mut seen = BTreeSet::new();
        for c in &columns {
            if c.is_empty() {
                return Err(parse_err(1, "empty column name"));
            }
            if !seen.insert(c.as_str()) {
                return Err(parse_err(1, format!("duplicate column {c:?}")));
            }
        }
        let rows = lines
            .map(|(line, row)| {
                let cells = fields(line, row, columns.len())?;
                Ok((line, cells.into_iter().map(str::to_string).collect()))
            })
            .collect::<Result<_>>()?;
        Ok(Self { columns, rows })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| IoError::MissingColumn(name.to_string()))
    }
}

/// Turns two columns of a wide crosswalk table into a unit-weight crossmap.
///
/// The column names become the taxonomy names. Each source code must occur
/// once; target codes may repeat (many-to-one).
pub fn import_crosswalk(doc: &WideCrosswalkDocument, from_col: &str, to_col: &str) -> Result<Crossmap> {
    let from_idx = doc.column_index(from_col)?;
    let to_idx = doc.column_index(to_col)?;
    let mut seen = BTreeSet::new();
    let mut links = Vec::with_capacity(doc.rows.len());
    for (line, cells) in &doc.rows {
        let cell = |idx: usize, column: &str| {
            let text = &cells[idx];
            if text.is_empty() {
                Err(IoError::EmptyCell {
                    line: *line,
                    column: column.to_string(),
                })
            } else {
                label(*line, text)
            }
        };
        let from = cell(from_idx, from_col)?;
        let to = cell(to_idx, to_col)?;
        if !seen.insert(from.clone()) {
            return Err(IoError::DuplicateSourceCode {
                line: *line,
                label: from,
            });
        }
        links.push(Link::new(from, to, 1.0));
    }
    Crossmap::new(from_col, to_col, links).map_err(|source| IoError::Crossmap { line: None, source })
}

/// Parses a `key,value` series.
pub fn read_series(text: &str, taxonomy: impl Into<String>) -> Result<IndexedSeries> {
    let mut lines = numbered_lines(text);
    expect_header(&mut lines, SERIES_HEADER)?;
    let mut entries = BTreeMap::new();
    for (line, row) in lines {
        let f = fields(line, row, 2)?;
        let key = label(line, f[0])?;
        let value = number(line, f[1], "value")?;
        if !value.is_finite() {
            return Err(IoError::NonFiniteValue { line });
        }
        if entries.contains_key(&key) {
            return Err(IoError::DuplicateKey { line, label: key });
        }
        entries.insert(key, value);
    }
    Ok(IndexedSeries::from_map(taxonomy, entries))
}

/// Writes a series as `key,value` rows in ascending key order. Values use
/// the shortest text that parses back to the same number.
pub fn write_series(series: &IndexedSeries) -> String {
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for (key, value) in series.iter() {
        let _ = writeln!(out, "{key},{value}");
    }
    out
}

pub fn write_panel(panel: &HarmonisedPanel) -> String {
    let mut out = String::from(PANEL_HEADER);
    out.push('\n');
    for row in &panel.rows {
        let _ = writeln!(out, "{},{},{}", row.unit, row.key, row.value);
    }
    out
}

/// Parses a `unit,key,value` panel. Row order is kept as written.
pub fn read_panel(text: &str, target_taxonomy: impl Into<String>) -> Result<HarmonisedPanel> {
    let mut lines = numbered_lines(text);
    expect_header(&mut lines, PANEL_HEADER)?;
    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    for (line, row) in lines {
        let f = fields(line, row, 3)?;
        if f[0].is_empty() {
            return Err(parse_err(line, "empty unit"));
        }
        let key = label(line, f[1])?;
        let value = number(line, f[2], "value")?;
        if !value.is_finite() {
            return Err(IoError::NonFiniteValue { line });
        }
        if !seen.insert((f[0].to_string(), key.clone())) {
            return Err(IoError::DuplicateKey { line, label: key });
        }
        rows.push(PanelRow {
            unit: f[0].to_string(),
            key,
            value,
        });
    }
    Ok(HarmonisedPanel {
        target_taxonomy: target_taxonomy.into(),
        rows,
    })
}

/// Compact single-line JSON with keys in a fixed order:
/// `n_sources, n_targets, n_links, n_splits, n_aggregates, max_in_degree,
/// is_crosswalk, most_synthetic_targets`.
pub fn write_summary_json(summary: &CrossmapSummary) -> String {
    serde_json::to_string(summary).expect("summary serialises")
}

pub fn read_summary_json(text: &str) -> Result<CrossmapSummary> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}
