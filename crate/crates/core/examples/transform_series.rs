//! Move a value series from one taxonomy to another.
//!
//! cargo run --example transform_series

use crossmap::{io, transform};

const EDGES: &str = "from,to,weight
BLX,BEL,0.5
BLX,LUX,0.5
E.GER,DEU,1
W.GER,DEU,1
AUS,AUS,1
";

const GDP: &str = "key,value
BLX,10
E.GER,5
W.GER,7
AUS,3
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = io::read_edge_list(EDGES, "countries_1980", "countries_2000")?;
    let gdp = io::read_series(GDP, "countries_1980")?;

    let out = transform::apply(&map, &gdp, false)?;
    print!("{}", io::write_series(&out));
    println!("total before {} / after {}", gdp.total(), out.total());

    // A category the crossmap does not cover is an error by default...
    let with_extra = io::read_series("key,value\nAUS,3\nFRA,4\n", "countries_1980")?;
    if let Err(err) = transform::apply(&map, &with_extra, false) {
        println!("strict: {err}");
    }
    // ...or can be dropped explicitly, with a report of what was lost.
    let report = transform::apply_with_report(&map, &with_extra, true)?;
    println!("lenient: dropped {:?}", report.unmatched);
    Ok(())
}
