//! Import code columns from a wide crosswalk table and invert a one-to-one pair.
//!
//! cargo run --example import_crosswalk

use crossmap::io::{self, WideCrosswalkDocument};
use crossmap::transform;

const ISO_CODES: &str = "country,ISO2,ISO3,ISONumeric
Afghanistan,AF,AFG,004
Albania,AL,ALB,008
Algeria,DZ,DZA,012
American Samoa,AS,ASM,016
Andorra,AD,AND,020
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = WideCrosswalkDocument::parse(ISO_CODES)?;
    println!("columns: {:?}", table.columns());

    let iso2_to_iso3 = io::import_crosswalk(&table, "ISO2", "ISO3")?;
    print!("{}", io::write_edge_list(&iso2_to_iso3));

    // Numeric codes stay labels, leading zeros included.
    let numeric = io::import_crosswalk(&table, "ISO3", "ISONumeric")?;
    print!("{}", io::write_edge_list(&numeric));

    let back = transform::invert(&iso2_to_iso3)?;
    println!("{} -> {}", back.source_taxonomy(), back.target_taxonomy());
    print!("{}", io::write_edge_list(&back));
    Ok(())
}
