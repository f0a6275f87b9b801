//! Bring two datasets recorded under different schemes into one panel.
//!
//! cargo run --example harmonise_panel

use crossmap::{build_crossmap, io, transform, IndexedSeries};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let old_scheme = build_crossmap(
        "countries_1980",
        "countries_2000",
        [
            ("BLX", "BEL", 0.5),
            ("BLX", "LUX", 0.5),
            ("E.GER", "DEU", 1.0),
            ("W.GER", "DEU", 1.0),
        ],
    )?;
    let current = build_crossmap(
        "countries_2000_raw",
        "countries_2000",
        [("BEL", "BEL", 1.0), ("LUX", "LUX", 1.0), ("DEU", "DEU", 1.0)],
    )?;

    let survey_1985 = IndexedSeries::new("countries_1980", [("BLX", 10.0), ("E.GER", 5.0), ("W.GER", 7.0)])?;
    let survey_2005 = IndexedSeries::new("countries_2000_raw", [("BEL", 6.5), ("LUX", 4.0), ("DEU", 13.0)])?;

    let panel = transform::harmonise([("1985", &old_scheme, &survey_1985), ("2005", &current, &survey_2005)])?;
    print!("{}", io::write_panel(&panel));
    for unit in panel.units() {
        println!("{unit}: total {}", panel.unit_total(unit));
    }
    Ok(())
}
