use std::fmt::Write as _;

use super::{layout_bipartite, LayoutPlan, LineStyle, Ordering};
use crate::crossmap::Crossmap;

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for ch in text.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

fn node_id(column: usize, label: &str) -> String {
    quote(&format!("L{column}:{label}"))
}

/// Renders `map` in the DOT language using the splits-first layout.
///
/// Node identifiers carry the column index, so a category that keeps its
/// code (a self-loop such as `AUS -> AUS`) still yields two nodes.
pub fn render_dot(map: &Crossmap) -> String {
    render_plan_dot(&layout_bipartite(map, Ordering::SplitsFirst))
}

/// Renders any layout plan, one same-rank subgraph per column.
pub fn render_plan_dot(plan: &LayoutPlan) -> String {
    let mut out = String::from("digraph crossmap {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box, fontname=\"sans-serif\"];\n");
    for (c, column) in plan.columns.iter().enumerate() {
        let _ = writeln!(out, "  subgraph layer_{c} {{");
        out.push_str("    rank=same;\n");
        let _ = writeln!(out, "    // taxonomy {}", quote(&column.taxonomy));
        for node in &column.nodes {
            let _ = writeln!(
                out,
                "    {} [label={}];",
                node_id(c, node.label.as_str()),
                quote(node.label.as_str())
            );
        }
        out.push_str("  }\n");
    }
    for edge in &plan.edges {
        let label = edge.label_text.as_deref().unwrap_or("");
        let style = match edge.line_style {
            LineStyle::Dashed => ", style=dashed",
            LineStyle::Solid => "",
        };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            node_id(edge.from.0, edge.from_label.as_str()),
            node_id(edge.to.0, edge.to_label.as_str()),
            quote(label)
        );
    }
    out.push_str("}\n");
    out
}
