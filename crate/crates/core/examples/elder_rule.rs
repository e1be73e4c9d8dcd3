// Usage: cargo run --example elder_rule
//
// Two critical edges born at the same time, once in a planar cloud and once in
// an abstract weighted simplex. Every way of choosing the dying faces is
// enumerated; only the heaviest choices keep the reduced skeleton optimal at
// every scale.

use std::fs;

use hopes::oracle::{all_death_assignments, min_fitting_subcomplex, scales_with_midpoints, SearchBudget};
use hopes::{
    minimal_spanning_tree, reduced_complex, vr_weights, FieldSpec, LabeledSkeleton, PointCloud, TieOrder,
    WeightedComplex,
};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/");

fn main() -> hopes::Result<()> {
    let cloud = PointCloud::points_from_csv(fs::File::open(format!("{DATA}tied_cloud.csv"))?)?;
    println!("cloud (Vietoris-Rips):");
    enumerate(&vr_weights(&cloud, 2, 1e-9)?)?;
    println!("weighted simplex:");
    enumerate(&WeightedComplex::from_json(&fs::read_to_string(format!("{DATA}tied_births.json"))?, 1e-9)?)
}

fn enumerate(w: &WeightedComplex) -> hopes::Result<()> {
    let field = FieldSpec::rational();
    let t = minimal_spanning_tree(&w, 1, field, &TieOrder::Lexicographic)?;
    let budget = SearchBudget::default();
    for a in all_death_assignments(&w, &t, field, 100)? {
        let deaths: Vec<String> = a.criticals.iter().map(|c| format!("{} dies {}", c.face, c.death)).collect();
        let h = LabeledSkeleton::assemble(&t, &a.criticals)?;
        let mut worst = None;
        for alpha in scales_with_midpoints(&w) {
            let best = min_fitting_subcomplex(&w, &reduced_complex(&w, alpha), 1, field, &budget)?.weight;
            if h.reduced_weight(alpha) != best && worst.is_none() {
                worst = Some((alpha, h.reduced_weight(alpha), best));
            }
        }
        let verdict = match worst {
            None => "optimal everywhere".to_string(),
            Some((alpha, got, best)) => format!("at {alpha}: weight {got} > optimum {best}"),
        };
        println!("  {} [{}] {verdict}", if a.elder { "elder" } else { "other" }, deaths.join(", "));
    }
    Ok(())
}
