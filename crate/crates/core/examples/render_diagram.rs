//! Draw a crossmap as SVG and DOT, plus a three-layer chain.
//!
//! cargo run --example render_diagram -- [output-dir]

use std::path::PathBuf;

use crossmap::viz::{self, Ordering, RenderStyle};
use crossmap::{build_crossmap, MultiStepChain};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);

    let map = build_crossmap(
        "countries_1980",
        "countries_2000",
        [
            ("BLX", "BEL", 0.5),
            ("BLX", "LUX", 0.5),
            ("E.GER", "DEU", 1.0),
            ("W.GER", "DEU", 1.0),
            ("AUS", "AUS", 1.0),
        ],
    )?;

    let style = RenderStyle {
        hide_unit_weights: true,
        ..RenderStyle::default()
    };
    for (name, ordering) in [
        ("splits_first", Ordering::SplitsFirst),
        ("by_indegree", Ordering::TargetInDegree),
    ] {
        let plan = viz::layout_bipartite(&map, ordering);
        println!(
            "{name}: sources {:?}, targets {:?}",
            plan.column_order(0),
            plan.column_order(1)
        );
        let path = dir.join(format!("countries_{name}.svg"));
        std::fs::write(&path, viz::render_svg(&plan, &map, &style)?)?;
        println!("wrote {}", path.display());
    }
    let dot = dir.join("countries.dot");
    std::fs::write(&dot, viz::render_dot(&map))?;
    println!("wrote {}", dot.display());

    let regions = build_crossmap(
        "countries_2000",
        "regions",
        [
            ("BEL", "EU", 1.0),
            ("LUX", "EU", 1.0),
            ("DEU", "EU", 1.0),
            ("AUS", "OC", 1.0),
        ],
    )?;
    let chain = MultiStepChain::new(vec![map, regions])?;
    let plan = viz::layout_chain(&chain, viz::DEFAULT_SWEEPS);
    println!("chain crossings: {}", plan.crossings());
    let path = dir.join("countries_chain.svg");
    std::fs::write(&path, viz::render_chain_svg(&plan, &chain, &style)?)?;
    println!("wrote {}", path.display());
    Ok(())
}
