//! Minimal spanning d-trees of a weighted simplex.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{FieldSpec, IncrementalBasis};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{invalid, Result};
use crate::filtration::{sum_sorted, WeightedComplex, WeightedFaceEntry};
use crate::homology::boundary_column;

/// Order in which `d`-faces of equal weight are offered to the greedy step.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum TieOrder {
    #[default]
    Lexicographic,
    /// Uniform shuffle of the `d`-faces from a seeded generator.
    Seeded(u64),
    /// A permutation of all `d`-faces of the complex.
    Explicit(Vec<Face>),
}

impl TieOrder {
    fn seed(&self) -> Option<u64> {
        match self {
            TieOrder::Seeded(s) => Some(*s),
            _ => None,
        }
    }

    /// Rank of every face in `faces` (which are in canonical order).
    fn ranks(&self, faces: &[Face]) -> Result<Vec<usize>> {
        match self {
            TieOrder::Lexicographic => Ok((0..faces.len()).collect()),
            TieOrder::Seeded(seed) => {
                let mut perm: Vec<usize> = (0..faces.len()).collect();
                perm.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                let mut ranks = vec![0; faces.len()];
                for (r, &i) in perm.iter().enumerate() {
                    ranks[i] = r;
                }
                Ok(ranks)
            }
            TieOrder::Explicit(order) => {
                if order.len() != faces.len() {
                    return invalid(format!("tie order lists {} faces, expected {}", order.len(), faces.len()));
                }
                let pos: HashMap<&Face, usize> = order.iter().enumerate().map(|(r, f)| (f, r)).collect();
                faces
                    .iter()
                    .map(|f| match pos.get(f) {
                        Some(&r) => Ok(r),
                        None => invalid(format!("tie order misses {f}")),
                    })
                    .collect::<Result<Vec<_>>>()
                    .and_then(|r| {
                        if pos.len() == faces.len() {
                            Ok(r)
                        } else {
                            invalid("tie order repeats a face")
                        }
                    })
            }
        }
    }
}

/// The final stage of the greedy construction: every face of dimension
/// below `d` together with the accepted `d`-faces, each with its weight.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanningTree {
    d: usize,
    complex: SimplicialComplex,
    weights: Vec<Vec<f64>>,
    tie_seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    d: usize,
    vertices: usize,
    tie_order_seed: Option<u64>,
    faces: Vec<WeightedFaceEntry>,
}

impl SpanningTree {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn tie_seed(&self) -> Option<u64> {
        self.tie_seed
    }

    /// The accepted top-dimensional faces.
    pub fn d_faces(&self) -> &[Face] {
        self.complex.faces(self.d as isize)
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.complex.contains(face)
    }

    pub fn weight(&self, face: &Face) -> Option<f64> {
        self.complex.index_of(face).map(|i| self.weights[face.dim()][i])
    }

    pub fn faces_with_weights(&self, k: isize) -> impl Iterator<Item = (&Face, f64)> + '_ {
        let ws: &[f64] = if k < 0 { &[] } else { self.weights.get(k as usize).map_or(&[], |v| v) };
        self.complex.faces(k).iter().zip(ws.iter().copied())
    }

    pub fn total_weight(&self) -> f64 {
        sum_sorted(self.weights.iter().flatten().copied().collect())
    }

    pub fn to_json(&self) -> String {
        let file = TreeFile {
            d: self.d,
            vertices: self.complex.vertex_count(),
            tie_order_seed: self.tie_seed,
            faces: (0..=self.complex.dim())
                .flat_map(|k| self.faces_with_weights(k).map(|(f, w)| WeightedFaceEntry { v: f.vertices().to_vec(), w }))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("tree serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TreeFile = serde_json::from_str(text)?;
        let mut by_face = Vec::with_capacity(file.faces.len());
        for e in file.faces {
            by_face.push((Face::new(e.v)?, e.w));
        }
        let complex = SimplicialComplex::from_faces_strict(file.vertices, by_face.iter().map(|p| p.0.clone()))?;
        if complex.dim() > file.d as isize {
            return invalid("tree has faces above its dimension");
        }
        let map: HashMap<Face, f64> = by_face.into_iter().collect();
        let weights = (0..=complex.dim())
            .map(|k| complex.faces(k).iter().map(|f| map[f]).collect())
            .collect();
        Ok(SpanningTree {
            d: file.d,
            complex,
            weights,
            tie_seed: file.tie_order_seed,
        })
    }
}

/// Greedy construction of a minimal spanning `d`-tree.
///
/// Sub-`d` faces are all kept; `d`-faces are scanned by weight, then by the
/// tie order, and kept when their boundary is independent of the boundaries
/// already accepted.
pub fn minimal_spanning_tree(w: &WeightedComplex, d: usize, field: FieldSpec, tie: &TieOrder) -> Result<SpanningTree> {
    if !w.is_complete(d) {
        return invalid(format!("weighted complex is not complete up to dimension {d}"));
    }
    let x = w.complex();
    let k = d as isize;
    let faces = x.faces(k);
    let ranks = tie.ranks(faces)?;
    let ws = w.weights(k);
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by(|&a, &b| ws[a].total_cmp(&ws[b]).then(ranks[a].cmp(&ranks[b])));
    let mut basis = IncrementalBasis::new(field, x.count(k - 1));
    let mut accepted = Vec::new();
    for i in order {
        if d > 0 && basis.insert_sparse(&boundary_column(x, &faces[i])) {
            accepted.push(faces[i].clone());
        }
    }
    accepted.sort();
    let lower = x.skeleton(k - 1);
    let complex = SimplicialComplex::from_closed(x.vertex_count(), lower.iter().cloned().chain(accepted));
    let weights = (0..=complex.dim())
        .map(|j| complex.faces(j).iter().map(|f| w.weight(f).unwrap()).collect())
        .collect();
    Ok(SpanningTree {
        d,
        complex,
        weights,
        tie_seed: tie.seed(),
    })
}

/// Faces of the tree with weight at most `alpha`.
pub fn reduced_mst(t: &SpanningTree, alpha: f64) -> SimplicialComplex {
    t.complex.retain(|f| t.weight(f).unwrap() <= alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{is_spanning, k_subsets};
    use crate::filtration::{
        binomial, complete_to_simplex, critical_values, reduced_complex, vr_weights, PointCloud, DEFAULT_EPSILON,
    };
    use crate::homology::{is_fitting, is_forest, is_tree};
    use proptest::prelude::*;

    fn cloud(points: Vec<Vec<f64>>) -> PointCloud {
        PointCloud::from_points(points).unwrap()
    }

    fn vr(c: &PointCloud, dim: usize) -> WeightedComplex {
        vr_weights(c, dim, DEFAULT_EPSILON).unwrap()
    }

    fn f(v: &[usize]) -> Face {
        Face::new(v.to_vec()).unwrap()
    }

    /// Kruskal with its own union-find, on the half-distance edge weights.
    fn kruskal(c: &PointCloud) -> f64 {
        let n = c.len();
        let mut edges: Vec<(f64, usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (0.5 * c.distance(i, j), i, j)).collect();
        edges.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut total = 0.0;
        for (wt, i, j) in edges {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
                total += wt;
            }
        }
        total
    }

    #[test]
    fn zero_dimensional_tree_is_empty() {
        let w = vr(&cloud(vec![vec![0.0], vec![1.0], vec![3.0]]), 1);
        let t = minimal_spanning_tree(&w, 0, FieldSpec::gf2(), &TieOrder::Lexicographic).unwrap();
        assert!(t.complex().is_empty());
        assert_eq!(t.total_weight(), 0.0);
    }

    #[test]
    fn equilateral_triangle() {
        let s3 = 3f64.sqrt() / 2.0;
        let w = vr(&cloud(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, s3]]), 2);
        let t = minimal_spanning_tree(&w, 1, FieldSpec::gf2(), &TieOrder::Lexicographic).unwrap();
        assert_eq!(t.d_faces(), &[f(&[0, 1]), f(&[0, 2])]);
        for seed in 0..10 {
            let t = minimal_spanning_tree(&w, 1, FieldSpec::rational(), &TieOrder::Seeded(seed)).unwrap();
            assert_eq!(t.d_faces().len(), 2);
            assert_eq!(t.tie_seed(), Some(seed));
        }
    }

    #[test]
    fn incomplete_input_is_rejected() {
        let w = WeightedComplex::from_face_weights(3, vec![(f(&[0]), 0.0), (f(&[1]), 0.0), (f(&[2]), 0.0), (f(&[0, 1]), 1.0)], 1e-9)
            .unwrap();
        assert!(minimal_spanning_tree(&w, 1, FieldSpec::gf2(), &TieOrder::Lexicographic).is_err());
        let w = complete_to_simplex(&w, 1, 0.1).unwrap();
        assert!(minimal_spanning_tree(&w, 1, FieldSpec::gf2(), &TieOrder::Lexicographic).is_ok());
        let bad = TieOrder::Explicit(vec![f(&[0, 1])]);
        assert!(minimal_spanning_tree(&w, 1, FieldSpec::gf2(), &bad).is_err());
    }

    #[test]
    fn four_generic_points_in_space() {
        let c = cloud(vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.3, 1.2, 0.0], vec![0.4, 0.5, 1.7]]);
        let w = vr(&c, 3);
        let t = minimal_spanning_tree(&w, 2, FieldSpec::gf2(), &TieOrder::Lexicographic).unwrap();
        assert_eq!(t.d_faces().len(), 3);
        // exhaustive over all 3-subsets of the 4 triangles
        let all: Vec<Face> = k_subsets(4, 3);
        let mut min_weight = f64::INFINITY;
        for skip in &all {
            let chosen: Vec<Face> = all.iter().filter(|g| *g != skip).cloned().collect();
            let s = t.complex().skeleton(1).with_faces(chosen).unwrap();
            assert!(is_tree(&s, 2, FieldSpec::gf2()).unwrap());
            min_weight = min_weight.min(w.total_weight(&s).unwrap());
        }
        assert_eq!(t.total_weight(), min_weight);
    }

    #[test]
    fn reduced_examples() {
        let w = vr(&cloud(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]), 2);
        let t = minimal_spanning_tree(&w, 1, FieldSpec::gf2(), &TieOrder::Lexicographic).unwrap();
        assert!(reduced_mst(&t, -1.0).is_empty());
        assert_eq!(&reduced_mst(&t, 5.0), t.complex());
        let r = reduced_mst(&t, 0.5);
        assert_eq!(r.f_vector(), vec![4, 3]);
    }

    #[test]
    fn json_roundtrip() {
        let w = vr(&cloud(vec![vec![0.0], vec![1.0], vec![3.0], vec![7.0]]), 2);
        let t = minimal_spanning_tree(&w, 1, FieldSpec::gf2(), &TieOrder::Seeded(7)).unwrap();
        let text = t.to_json();
        assert!(text.contains("\"tie_order_seed\": 7"));
        assert_eq!(SpanningTree::from_json(&text).unwrap(), t);
    }

    fn random_cloud(n: usize, dim: usize, seed: u64) -> PointCloud {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // integer lattice coordinates so distances tie often
        cloud((0..n).map(|_| (0..dim).map(|_| rng.gen_range(0..4) as f64).collect()).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn tree_properties(n in 3usize..7, d in 1usize..3, seed in any::<u64>(), tie in any::<u64>()) {
            let c = random_cloud(n, 2, seed);
            let w = vr(&c, d + 1);
            let field = FieldSpec::gf2();
            let t = minimal_spanning_tree(&w, d, field, &TieOrder::Lexicographic).unwrap();
            prop_assert_eq!(t.d_faces().len(), binomial(n - 1, d));
            prop_assert!(is_spanning(t.complex(), w.complex(), d).unwrap());
            prop_assert!(is_tree(t.complex(), d, field).unwrap());
            // maximality in the full complex
            for g in w.complex().faces(d as isize) {
                if !t.contains(g) {
                    let bigger = t.complex().with_faces([g.clone()]).unwrap();
                    prop_assert!(!is_forest(&bigger, d, field).unwrap());
                }
            }
            // tie-order invariance of the weight profile
            let other = minimal_spanning_tree(&w, d, field, &TieOrder::Seeded(tie)).unwrap();
            for alpha in critical_values(&w) {
                let a = w.total_weight(&reduced_mst(&t, alpha)).unwrap();
                let b = w.total_weight(&reduced_mst(&other, alpha)).unwrap();
                prop_assert_eq!(a, b);
                let q = reduced_complex(&w, alpha);
                let r = reduced_mst(&t, alpha);
                prop_assert!(is_forest(&r, d, field).unwrap());
                prop_assert!(is_fitting(&r, &q, d - 1, field).unwrap());
            }
        }

        #[test]
        fn kruskal_agrees(n in 2usize..9, seed in any::<u64>()) {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = cloud((0..n).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect());
            let t = minimal_spanning_tree(&vr(&c, 1), 1, FieldSpec::gf3(), &TieOrder::Lexicographic).unwrap();
            prop_assert!((t.total_weight() - kruskal(&c)).abs() < 1e-9);
        }
    }
}
