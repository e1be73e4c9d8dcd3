// Usage: cargo run --example square_skeleton

use std::fs::File;

use hopes::filtration::DEFAULT_EPSILON;
use hopes::{build_hopes, persistence_diagram, reduced_hopes, vr_weights, FieldSpec, PointCloud, TieOrder};
use hopes::skeleton::diagram_correspondence;

fn main() -> hopes::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/square.csv");
    let w = vr_weights(&PointCloud::points_from_csv(File::open(path)?)?, 2, DEFAULT_EPSILON)?;
    let h = build_hopes(&w, 1, FieldSpec::gf2(), &TieOrder::Lexicographic)?;
    for f in h.faces().filter(|f| f.face.dim() == 1) {
        println!("{:8} {:?} {}", f.face.to_string(), f.kind, f.label);
    }
    for alpha in [0.4, 0.5, 0.6, 0.75] {
        let r = reduced_hopes(&h, alpha);
        println!("alpha {alpha}: {} edges, weight {}", r.count(1), h.reduced_weight(alpha));
    }
    let pd = persistence_diagram(&w, 1, FieldSpec::gf2());
    for (face, dot) in diagram_correspondence(&h, &pd, &w)? {
        println!("{face} <-> ({}, {})", dot.birth, dot.death);
    }
    println!("{}", h.to_json());
    Ok(())
}
