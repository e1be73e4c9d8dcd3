// Usage: cargo run --example verify_random [seed]

use hopes::filtration::random_weighted_simplex;
use hopes::oracle::{format_table, scales_with_midpoints, verify_scales, SearchBudget};
use hopes::{assign_deaths, minimal_spanning_tree, FieldSpec, LabeledSkeleton, TieOrder};

fn main() -> hopes::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let w = random_weighted_simplex(5, 3, 6, seed)?;
    let field = FieldSpec::gf3();
    let t = minimal_spanning_tree(&w, 2, field, &TieOrder::Seeded(seed))?;
    let h = LabeledSkeleton::assemble(&t, &assign_deaths(&w, &t, field)?)?;
    let rows = verify_scales(&w, &t, &h, field, &scales_with_midpoints(&w), &SearchBudget::default())?;
    print!("{}", format_table(&rows));
    Ok(())
}
