//! Column layouts: which row every category occupies in its taxonomy column.

use std::collections::{BTreeMap, BTreeSet};

use crate::crossmap::{Crossmap, RelationKind};
use crate::io::format_weight;
use crate::label::CategoryLabel;
use crate::transform::MultiStepChain;

/// How to order the two columns of a single crossmap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    /// Split sources above one-to-one sources; targets follow their sources.
    #[default]
    SplitsFirst,
    /// Most-aggregated targets on top; sources follow their targets.
    TargetInDegree,
    /// Both columns in order of first appearance in the link list.
    InputOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineStyle {
    Solid,
    Dashed,
}

/// Visual role of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeStyle {
    /// Relation kind of the node's outgoing links; `None` in the last column.
    pub outgoing: Option<RelationKind>,
    /// Number of incoming links; zero in the first column.
    pub in_degree: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedNode {
    pub label: CategoryLabel,
    pub column: usize,
    pub row: usize,
    pub style: NodeStyle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutColumn {
    pub taxonomy: String,
    /// Nodes in row order.
    pub nodes: Vec<PlacedNode>,
}

/// A link between nodes of adjacent columns. Positions are `(column, row)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedEdge {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub from_label: CategoryLabel,
    pub to_label: CategoryLabel,
    pub weight: f64,
    pub line_style: LineStyle,
    pub label_text: Option<String>,
}

/// Resolved positions and styles for every node and edge.
///
/// Edges are sorted by column, then source label, then target label.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutPlan {
    pub columns: Vec<LayoutColumn>,
    pub edges: Vec<PlacedEdge>,
}

impl LayoutPlan {
    /// Labels of one column in row order.
    pub fn column_order(&self, column: usize) -> Vec<&str> {
        self.columns[column].nodes.iter().map(|n| n.label.as_str()).collect()
    }

    /// Total edge crossings between all pairs of adjacent columns.
    pub fn crossings(&self) -> usize {
        (0..self.columns.len().saturating_sub(1))
            .map(|c| {
                let pairs: Vec<(usize, usize)> = self
                    .edges
                    .iter()
                    .filter(|e| e.from.0 == c)
                    .map(|e| (e.from.1, e.to.1))
                    .collect();
                count_crossings(&pairs)
            })
            .sum()
    }
}

/// Crossings among straight edges between two columns, given as
/// `(upper row, lower row)` pairs.
///
/// Two edges cross when their endpoints are in opposite order in the two
/// columns; edges sharing an endpoint never cross. Counted as inversions of
/// the second coordinate after sorting, with a Fenwick tree.
pub fn count_crossings(edges: &[(usize, usize)]) -> usize {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    let size = sorted.iter().map(|e| e.1).max().map_or(0, |m| m + 1);
    let mut tree = vec![0usize; size + 1];
    let mut crossings = 0;
    for (seen, &(_, row)) in sorted.iter().enumerate() {
        // Earlier edges with a lower-column row <= this one.
        let mut i = row + 1;
        let mut not_greater = 0;
        while i > 0 {
            not_greater += tree[i];
            i &= i - 1;
        }
        crossings += seen - not_greater;
        let mut i = row + 1;
        while i <= size {
            tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }
    crossings
}

fn row_index(order: &[CategoryLabel]) -> BTreeMap<&CategoryLabel, usize> {
    order.iter().enumerate().map(|(i, l)| (l, i)).collect()
}

/// Sorts `order` by the mean row of each node's neighbours in `fixed`.
/// Nodes without neighbours keep their current row as key. `tie_by_label`
/// breaks equal keys by label, otherwise the sort is stable.
fn barycenter_sort(
    order: &mut [CategoryLabel],
    fixed: &[CategoryLabel],
    neighbours: &BTreeMap<&CategoryLabel, Vec<&CategoryLabel>>,
    tie_by_label: bool,
) {
    let rows = row_index(fixed);
    let mut keyed: Vec<(f64, usize, CategoryLabel)> = order
        .iter()
        .enumerate()
        .map(|(current, label)| {
            let ns = neighbours.get(label).map(Vec::as_slice).unwrap_or(&[]);
            let placed: Vec<usize> = ns.iter().filter_map(|n| rows.get(*n).copied()).collect();
            let key = if placed.is_empty() {
                current as f64
            } else {
                placed.iter().sum::<usize>() as f64 / placed.len() as f64
            };
            (key, current, label.clone())
        })
        .collect();
    keyed.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| if tie_by_label { a.2.cmp(&b.2) } else { a.1.cmp(&b.1) })
    });
    for (slot, (_, _, label)) in order.iter_mut().zip(keyed) {
        *slot = label;
    }
}

fn forward(map: &Crossmap) -> BTreeMap<&CategoryLabel, Vec<&CategoryLabel>> {
    let mut out: BTreeMap<&CategoryLabel, Vec<&CategoryLabel>> = BTreeMap::new();
    for l in map.links() {
        out.entry(&l.from).or_default().push(&l.to);
    }
    out
}

fn backward(map: &Crossmap) -> BTreeMap<&CategoryLabel, Vec<&CategoryLabel>> {
    let mut out: BTreeMap<&CategoryLabel, Vec<&CategoryLabel>> = BTreeMap::new();
    for l in map.links() {
        out.entry(&l.to).or_default().push(&l.from);
    }
    out
}

/// Lays out a single crossmap as a source column and a target column.
pub fn layout_bipartite(map: &Crossmap, ordering: Ordering) -> LayoutPlan {
    let mut sources = map.sources().to_vec();
    let mut targets = map.targets().to_vec();
    match ordering {
        Ordering::InputOrder => {}
        Ordering::SplitsFirst => {
            sources.sort_by_key(|s| map.out_degree(s.as_str()) <= 1);
            barycenter_sort(&mut targets, &sources, &backward(map), true);
        }
        Ordering::TargetInDegree => {
            targets.sort_by(|a, b| {
                map.in_degree(b.as_str())
                    .cmp(&map.in_degree(a.as_str()))
                    .then_with(|| a.cmp(b))
            });
            barycenter_sort(&mut sources, &targets, &forward(map), true);
        }
    }
    assemble(
        vec![map.source_taxonomy().to_string(), map.target_taxonomy().to_string()],
        vec![sources, targets],
        &[map],
    )
}

/// Initial column orders for a chain: first appearance, with any source of a
/// later step that no earlier step reaches appended to its column.
fn chain_columns(chain: &MultiStepChain) -> Vec<Vec<CategoryLabel>> {
    let steps = chain.steps();
    let mut columns = vec![steps[0].sources().to_vec()];
    for (i, step) in steps.iter().enumerate() {
        let mut column = step.targets().to_vec();
        if let Some(next) = steps.get(i + 1) {
            let present: BTreeSet<CategoryLabel> = column.iter().cloned().collect();
            column.extend(next.sources().iter().filter(|s| !present.contains(*s)).cloned());
        }
        columns.push(column);
    }
    columns
}

/// Lays out a multi-step chain, one column per taxonomy layer.
///
/// Starts from first-appearance order and runs `sweeps` rounds of barycenter
/// reordering, each a left-to-right pass followed by a right-to-left pass.
/// The ordering with the fewest crossings seen (the start included) wins, so
/// the result never has more crossings than input order. `sweeps` below one
/// is treated as one.
pub fn layout_chain(chain: &MultiStepChain, sweeps: usize) -> LayoutPlan {
    let steps: Vec<&Crossmap> = chain.steps().iter().collect();
    let taxonomies: Vec<String> = chain.taxonomies().into_iter().map(str::to_string).collect();
    let mut columns = chain_columns(chain);
    let fwd: Vec<_> = steps.iter().map(|s| forward(s)).collect();
    let bwd: Vec<_> = steps.iter().map(|s| backward(s)).collect();

    let mut best = columns.clone();
    let mut best_crossings = chain_crossings(&columns, &steps);
    for _ in 0..sweeps.max(1) {
        for c in 1..columns.len() {
            let (left, right) = columns.split_at_mut(c);
            barycenter_sort(&mut right[0], &left[c - 1], &bwd[c - 1], false);
        }
        for c in (0..columns.len() - 1).rev() {
            let (left, right) = columns.split_at_mut(c + 1);
            barycenter_sort(&mut left[c], &right[0], &fwd[c], false);
        }
        let crossings = chain_crossings(&columns, &steps);
        if crossings < best_crossings {
            best_crossings = crossings;
            best = columns.clone();
        }
    }
    assemble(taxonomies, best, &steps)
}

fn chain_crossings(columns: &[Vec<CategoryLabel>], steps: &[&Crossmap]) -> usize {
    steps
        .iter()
        .enumerate()
        .map(|(i, step)| {
            let up = row_index(&columns[i]);
            let down = row_index(&columns[i + 1]);
            let pairs: Vec<(usize, usize)> = step.links().iter().map(|l| (up[&l.from], down[&l.to])).collect();
            count_crossings(&pairs)
        })
        .sum()
}

/// Builds the plan from final column orders. `steps[i]` links column `i` to
/// column `i + 1`.
fn assemble(taxonomies: Vec<String>, orders: Vec<Vec<CategoryLabel>>, steps: &[&Crossmap]) -> LayoutPlan {
    let columns: Vec<LayoutColumn> = orders
        .iter()
        .zip(taxonomies)
        .enumerate()
        .map(|(c, (order, taxonomy))| LayoutColumn {
            taxonomy,
            nodes: order
                .iter()
                .enumerate()
                .map(|(row, label)| PlacedNode {
                    label: label.clone(),
                    column: c,
                    row,
                    style: NodeStyle {
                        outgoing: steps.get(c).and_then(|s| s.classify_source(label.as_str()).ok()),
                        in_degree: c.checked_sub(1).map_or(0, |p| steps[p].in_degree(label.as_str())),
                    },
                })
                .collect(),
        })
        .collect();

    let mut edges = Vec::new();
    for (c, step) in steps.iter().enumerate() {
        let up = row_index(&orders[c]);
        let down = row_index(&orders[c + 1]);
        for link in step.sorted_links() {
            let split = step.out_degree(link.from.as_str()) > 1;
            edges.push(PlacedEdge {
                from: (c, up[&link.from]),
                to: (c + 1, down[&link.to]),
                from_label: link.from.clone(),
                to_label: link.to.clone(),
                weight: link.weight,
                line_style: if split { LineStyle::Dashed } else { LineStyle::Solid },
                label_text: Some(format_weight(link.weight)),
            });
        }
    }
    LayoutPlan { columns, edges }
}
