// Usage: cargo run --example field_algebra

use hopes::{leading_sets, FieldMatrix, FieldSpec};

fn main() -> hopes::Result<()> {
    let m = FieldMatrix::from_ints(FieldSpec::rational(), 2, 3, &[1, 2, 3, 2, 4, 6])?;
    println!("rank over Q: {}", m.rank());
    let k = m.kernel_basis();
    println!("kernel has {} basis vectors: {:?}", k.cols(), k);
    let gf3 = FieldMatrix::from_ints(FieldSpec::gf3(), 2, 2, &[1, 1, 1, 4])?;
    println!("[[1,1],[1,4]] has rank {} over GF(3)", gf3.rank());

    // leading variables of maximal total weight
    let c = FieldMatrix::from_ints(FieldSpec::gf2(), 2, 3, &[1, 1, 0, 0, 1, 1])?;
    for weights in [[1.0, 1.0, 1.0], [1.0, 2.0, 5.0], [4.0, 1.0, 3.0]] {
        println!("weights {weights:?} -> columns {:?}", leading_sets(&c, &weights)?);
    }
    Ok(())
}
