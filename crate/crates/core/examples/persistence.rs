// Usage: cargo run --example persistence

use std::fs::File;

use hopes::filtration::DEFAULT_EPSILON;
use hopes::{persistence_diagram, vr_weights, FieldSpec, PointCloud};

fn main() -> hopes::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/circle10.csv");
    let cloud = PointCloud::points_from_csv(File::open(path)?)?;
    let w = vr_weights(&cloud, 2, DEFAULT_EPSILON)?;
    for d in 0..=1 {
        let pd = persistence_diagram(&w, d, FieldSpec::gf2());
        print!("{}", pd.to_csv());
    }
    Ok(())
}
