// Usage: cargo run --example tetrahedron
//
// Four points at the vertices of a regular tetrahedron, d = 2. Under the
// Čech weighting the solid tetrahedron appears after its triangles, so one
// critical triangle lives for a while; under Rips it dies immediately.

use std::fs::File;

use hopes::filtration::DEFAULT_EPSILON;
use hopes::{build_hopes, cech_weights, vr_weights, FieldSpec, PointCloud, TieOrder};

fn main() -> hopes::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tetra4.csv");
    let cloud = PointCloud::points_from_csv(File::open(path)?)?;
    for (name, w) in [("cech", cech_weights(&cloud, 3, DEFAULT_EPSILON)?), ("rips", vr_weights(&cloud, 3, DEFAULT_EPSILON)?)] {
        let h = build_hopes(&w, 2, FieldSpec::gf3(), &TieOrder::Lexicographic)?;
        println!("{name}: skeleton f-vector {:?}", h.complex().f_vector());
        for (f, label) in h.critical() {
            println!("  critical {f} {label}");
        }
    }
    Ok(())
}
