//! Node-link diagrams of crossmaps.
//!
//! Each taxonomy is a column of nodes and each link a straight line between
//! adjacent columns. The encodings:
//!
//! * source labels of split categories are italic, one-to-one sources bold;
//! * links leaving a split category are dashed, all others solid;
//! * link weights are printed near the middle of each link, optionally
//!   omitting unit weights;
//! * target nodes get darker with every extra incoming link, so heavily
//!   aggregated (synthetic) categories stand out.

mod dot;
mod layout;
mod svg;

use std::collections::BTreeSet;

use thiserror::Error;

pub use self::dot::{render_dot, render_plan_dot};
pub use self::layout::{
    count_crossings, layout_bipartite, layout_chain, LayoutColumn, LayoutPlan, LineStyle, NodeStyle, Ordering,
    PlacedEdge, PlacedNode,
};
pub use self::svg::{render_chain_svg, render_svg, target_opacity};

use crate::crossmap::Crossmap;

/// Default number of barycenter sweeps for [`layout_chain`].
pub const DEFAULT_SWEEPS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VizError {
    #[error("layout does not match the crossmap: {0}")]
    PlanMismatch(String),
    #[error("invalid render style: {0}")]
    InvalidStyle(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    /// Leave weight labels off links with weight 1.
    pub hide_unit_weights: bool,
    /// Scale node opacity with in-degree; otherwise all shaded nodes use the floor.
    pub shade_by_in_degree: bool,
    /// Vertical distance between rows.
    pub node_spacing: f64,
    /// Horizontal distance between columns.
    pub layer_spacing: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            hide_unit_weights: false,
            shade_by_in_degree: true,
            node_spacing: 36.0,
            layer_spacing: 240.0,
        }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<(), VizError> {
        for (name, value) in [
            ("node_spacing", self.node_spacing),
            ("layer_spacing", self.layer_spacing),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(VizError::InvalidStyle(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }
}

/// Checks that the plan's columns hold exactly the categories of `steps`
/// (column `c` linking through `steps[c]`) and that every link has an edge.
fn check_plan(plan: &LayoutPlan, steps: &[&Crossmap]) -> Result<(), VizError> {
    if plan.columns.len() != steps.len() + 1 {
        return Err(VizError::PlanMismatch(format!(
            "{} columns for {} taxonomy layers",
            plan.columns.len(),
            steps.len() + 1
        )));
    }
    for (c, column) in plan.columns.iter().enumerate() {
        let placed: BTreeSet<&str> = column.nodes.iter().map(|n| n.label.as_str()).collect();
        let mut expected = BTreeSet::new();
        if let Some(step) = steps.get(c) {
            expected.extend(step.sources().iter().map(|s| s.as_str()));
        }
        if let Some(prev) = c.checked_sub(1).map(|p| steps[p]) {
            expected.extend(prev.targets().iter().map(|s| s.as_str()));
        }
        if placed != expected || placed.len() != column.nodes.len() {
            return Err(VizError::PlanMismatch(format!(
                "column {c} nodes differ from the categories of {:?}",
                column.taxonomy
            )));
        }
    }
    for (c, step) in steps.iter().enumerate() {
        let edges: BTreeSet<(&str, &str)> = plan
            .edges
            .iter()
            .filter(|e| e.from.0 == c)
            .map(|e| (e.from_label.as_str(), e.to_label.as_str()))
            .collect();
        let links: BTreeSet<(&str, &str)> = step.links().iter().map(|l| (l.from.as_str(), l.to.as_str())).collect();
        if edges != links {
            return Err(VizError::PlanMismatch(format!(
                "edges out of column {c} differ from the links"
            )));
        }
    }
    Ok(())
}
