//! Chain two crossmaps through an intermediate taxonomy and compare stepwise
//! application with the composed crossmap.
//!
//! cargo run --example compose_chain

use crossmap::transform::{apply, apply_chain};
use crossmap::{build_crossmap, io, IndexedSeries, MultiStepChain};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Illustrative occupation codes: a detailed national code splits across
    // two international unit groups, which then roll up into one sub-major group.
    let detailed = build_crossmap(
        "national",
        "international",
        [
            ("111111", "1112", 0.5),
            ("111111", "1114", 0.5),
            ("111211", "1112", 1.0),
            ("111212", "1120", 1.0),
        ],
    )?;
    let rollup = build_crossmap(
        "international",
        "sub_major",
        [("1112", "11", 1.0), ("1114", "11", 1.0), ("1120", "11", 1.0)],
    )?;
    let chain = MultiStepChain::new(vec![detailed, rollup])?;
    println!("layers: {:?}", chain.taxonomies());

    let composed = chain.compose()?;
    print!("{}", io::write_edge_list(&composed));

    let workers = IndexedSeries::new("national", [("111111", 120.0), ("111211", 45.0), ("111212", 80.0)])?;
    let stepwise = apply_chain(&chain, &workers)?;
    let direct = apply(&composed, &workers, false)?;
    print!("{}", io::write_series(&stepwise));
    assert_eq!(stepwise, direct);
    Ok(())
}
