// Usage: cargo run --example complexes
//
// Faces, complexes and Betti numbers; the projective plane has different
// homology over GF(2) and over the rationals.

use hopes::complex::full_simplex;
use hopes::homology::betti_numbers;
use hopes::{Face, FieldSpec, SimplicialComplex};

fn main() -> hopes::Result<()> {
    let sphere = full_simplex(4)?.skeleton(2);
    println!("tetrahedron boundary: f = {:?}, chi = {}", sphere.f_vector(), sphere.euler_characteristic());
    println!("  betti over GF(2): {:?}", betti_numbers(&sphere, FieldSpec::gf2()));

    let triangles = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
        [1, 2, 4], [1, 3, 4], [1, 3, 5], [2, 3, 5], [2, 4, 5],
    ];
    let faces = triangles.iter().map(|t| Face::new(t.to_vec())).collect::<hopes::Result<Vec<_>>>()?;
    let rp2 = SimplicialComplex::from_faces(6, faces)?;
    println!("projective plane: f = {:?}, chi = {}", rp2.f_vector(), rp2.euler_characteristic());
    for field in [FieldSpec::gf2(), FieldSpec::gf3(), FieldSpec::rational()] {
        println!("  betti over {field}: {:?}", betti_numbers(&rp2, field));
    }
    Ok(())
}
