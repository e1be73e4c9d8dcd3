// Usage: cargo run --example spanning_tree

use hopes::filtration::DEFAULT_EPSILON;
use hopes::{critical_values, minimal_spanning_tree, reduced_mst, vr_weights, FieldSpec, PointCloud, TieOrder};
use rand::{Rng, SeedableRng};

fn main() -> hopes::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let points: Vec<Vec<f64>> = (0..7).map(|_| vec![rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0)]).collect();
    let cloud = PointCloud::from_points(points)?;
    let w = vr_weights(&cloud, 3, DEFAULT_EPSILON)?;
    for d in 1..=2 {
        let t = minimal_spanning_tree(&w, d, FieldSpec::gf2(), &TieOrder::Lexicographic)?;
        println!("d = {d}: {} faces of dimension {d}, total weight {:.4}", t.d_faces().len(), t.total_weight());
        for f in t.d_faces() {
            println!("  {f}  w = {:.4}", t.weight(f).unwrap());
        }
    }
    let t = minimal_spanning_tree(&w, 1, FieldSpec::gf2(), &TieOrder::Lexicographic)?;
    println!("reduced tree profile:");
    for alpha in critical_values(&w).into_iter().take(8) {
        let r = reduced_mst(&t, alpha);
        println!("  alpha {alpha:.4}: {} edges, weight {:.4}", r.count(1), w.total_weight(&r)?);
    }
    Ok(())
}
