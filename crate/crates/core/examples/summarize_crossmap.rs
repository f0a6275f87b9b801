//! Build the country crossmap, classify its categories and print the summary.
//!
//! cargo run --example summarize_crossmap

use crossmap::{build_crossmap, io, RelationKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Belgium-Luxembourg splits 50/50, East and West Germany merge, Australia is unchanged.
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

    for source in map.sources() {
        let kind = match map.classify_source(source.as_str())? {
            RelationKind::Split => "split",
            _ => "one-to-one",
        };
        println!("{source:>6} -> {kind}");
    }
    for target in map.targets() {
        let kind = match map.classify_target(target.as_str())? {
            RelationKind::Aggregate => "aggregate",
            _ => "unique",
        };
        println!("{target:>6} <- {kind} (in-degree {})", map.in_degree(target.as_str()));
    }

    println!("{}", io::write_summary_json(&map.summarize()));

    // Shares that do not add up are rejected with the category at fault.
    let broken = build_crossmap("a", "b", [("BLX", "BEL", 0.6), ("BLX", "LUX", 0.5)]);
    println!("broken map: {}", broken.unwrap_err());
    Ok(())
}
