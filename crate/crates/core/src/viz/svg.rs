use std::fmt::Write as _;

use super::{check_plan, LayoutPlan, LineStyle, PlacedNode, RenderStyle, VizError};
use crate::crossmap::{Crossmap, RelationKind};
use crate::transform::MultiStepChain;

const MARGIN_X: f64 = 200.0;
const MARGIN_Y: f64 = 30.0;
const NODE_RADIUS: f64 = 5.0;
const MAX_LABEL_CHARS: usize = 24;
const NODE_COLOUR: &str = "#1f3b73";
const EDGE_COLOUR: &str = "#4d4d4d";
const OPACITY_FLOOR: f64 = 0.35;
const OPACITY_STEP: f64 = 0.25;

/// Fill opacity of a node with `in_degree` incoming links: 0.35 for one
/// link, 0.25 darker per extra link, capped at 1.
pub fn target_opacity(in_degree: usize) -> f64 {
    (OPACITY_FLOOR + OPACITY_STEP * in_degree.saturating_sub(1) as f64).min(1.0)
}

/// Renders a two-column layout of `map` as an SVG 1.1 document.
///
/// `plan` must come from [`super::layout_bipartite`] on the same crossmap.
pub fn render_svg(plan: &LayoutPlan, map: &Crossmap, style: &RenderStyle) -> Result<String, VizError> {
    style.validate()?;
    check_plan(plan, &[map])?;
    Ok(render(plan, style))
}

/// Renders a multi-column layout from [`super::layout_chain`].
pub fn render_chain_svg(plan: &LayoutPlan, chain: &MultiStepChain, style: &RenderStyle) -> Result<String, VizError> {
    style.validate()?;
    let steps: Vec<&Crossmap> = chain.steps().iter().collect();
    check_plan(plan, &steps)?;
    Ok(render(plan, style))
}

fn num(v: f64) -> String {
    let text = format!("{v:.2}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".into()
    } else {
        text.into()
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\'' => out.push_str("&apos;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn render(plan: &LayoutPlan, style: &RenderStyle) -> String {
    let x_of = |column: usize| MARGIN_X + column as f64 * style.layer_spacing;
    let y_of = |row: usize| MARGIN_Y + row as f64 * style.node_spacing;
    let last = plan.columns.len() - 1;
    let max_rows = plan.columns.iter().map(|c| c.nodes.len()).max().unwrap_or(1);
    let width = 2.0 * MARGIN_X + last as f64 * style.layer_spacing;
    let height = 2.0 * MARGIN_Y + (max_rows - 1) as f64 * style.node_spacing;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"12\">",
        w = num(width),
        h = num(height)
    );

    for column in &plan.columns {
        let x = x_of(column.nodes.first().map_or(0, |n| n.column));
        let _ = writeln!(
            out,
            "<text class=\"taxonomy\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>",
            num(x),
            num(MARGIN_Y / 2.0),
            escape(&column.taxonomy)
        );
        for node in &column.nodes {
            node_svg(&mut out, node, x, y_of(node.row), node.column == last, style);
        }
    }

    for edge in &plan.edges {
        let dash = match edge.line_style {
            LineStyle::Dashed => " stroke-dasharray=\"6,4\"",
            LineStyle::Solid => "",
        };
        let _ = writeln!(
            out,
            "<line class=\"edge\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{EDGE_COLOUR}\" stroke-width=\"1.2\"{dash}><title>{} \u{2192} {}</title></line>",
            num(x_of(edge.from.0) + NODE_RADIUS),
            num(y_of(edge.from.1)),
            num(x_of(edge.to.0) - NODE_RADIUS),
            num(y_of(edge.to.1)),
            escape(edge.from_label.as_str()),
            escape(edge.to_label.as_str()),
        );
    }

    for (i, edge) in plan.edges.iter().enumerate() {
        let Some(text) = &edge.label_text else { continue };
        if style.hide_unit_weights && edge.weight == 1.0 {
            continue;
        }
        let mid_x = (x_of(edge.from.0) + x_of(edge.to.0)) / 2.0;
        let mid_y = (y_of(edge.from.1) + y_of(edge.to.1)) / 2.0;
        // Alternate edges sit above and below the line.
        let offset = if i % 2 == 0 { -4.0 } else { 12.0 };
        let _ = writeln!(
            out,
            "<text class=\"weight\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"10\">{}</text>",
            num(mid_x),
            num(mid_y + offset),
            escape(text)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn node_svg(out: &mut String, node: &PlacedNode, x: f64, y: f64, last_column: bool, style: &RenderStyle) {
    let opacity = if node.style.in_degree == 0 {
        1.0
    } else if style.shade_by_in_degree {
        target_opacity(node.style.in_degree)
    } else {
        OPACITY_FLOOR
    };
    let _ = writeln!(
        out,
        "<circle class=\"node\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{NODE_COLOUR}\" fill-opacity=\"{opacity:.2}\" stroke=\"{NODE_COLOUR}\"/>",
        num(x),
        num(y),
        num(NODE_RADIUS)
    );

    let font = match node.style.outgoing {
        Some(RelationKind::Split) => " font-style=\"italic\"",
        Some(_) => " font-weight=\"bold\"",
        None => "",
    };
    let (label_x, anchor) = if node.column == 0 {
        (x - 2.0 * NODE_RADIUS, "end")
    } else {
        (x + 2.0 * NODE_RADIUS, "start")
    };
    let full = node.label.as_str();
    let chars = full.chars().count();
    let (shown, title) = if chars > MAX_LABEL_CHARS {
        let head: String = full.chars().take(MAX_LABEL_CHARS - 1).collect();
        (format!("{head}\u{2026}"), format!("<title>{}</title>", escape(full)))
    } else {
        (full.to_string(), String::new())
    };
    // Middle columns put labels above the node to stay clear of outgoing links.
    let label_y = if node.column == 0 || last_column {
        y + 4.0
    } else {
        y - 8.0
    };
    let _ = writeln!(
        out,
        "<text class=\"label\" x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\"{font}>{}{title}</text>",
        num(label_x),
        num(label_y),
        escape(&shown)
    );
}
