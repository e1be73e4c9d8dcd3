//! Point clouds and weighted complexes.
//!
//! A [`WeightedComplex`] stores the faces of the full simplex on a cloud up
//! to some dimension, each with a monotone weight. Weights closer than the
//! configured tolerance are snapped to a common representative at
//! construction, so every later comparison between weights is exact.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::complex::{simplex_skeleton, Face, SimplicialComplex};
use crate::error::{invalid, Error, Result};

/// Default absolute tolerance for grouping equal weights.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Default relative margin used by [`complete_to_simplex`].
pub const DEFAULT_MARGIN: f64 = 0.1;

/// A finite metric space, given by coordinates or by its distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum PointCloud {
    Coordinates(Vec<Vec<f64>>),
    Distances(Vec<Vec<f64>>),
}

impl PointCloud {
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = points.first() {
            let dim = first.len();
            if points.iter().any(|p| p.len() != dim) {
                return invalid("points have inconsistent dimensions");
            }
            if points.iter().flatten().any(|x| !x.is_finite()) {
                return invalid("coordinates must be finite");
            }
        }
        Ok(PointCloud::Coordinates(points))
    }

    /// Accepts a square, symmetric, non-negative matrix with zero diagonal.
    /// The triangle inequality is not checked.
    pub fn from_distances(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return invalid(format!("distance matrix row {i} has length {} (expected {n})", row.len()));
            }
            if row[i] != 0.0 {
                return invalid(format!("distance matrix has non-zero diagonal at {i}"));
            }
            for (j, &x) in row.iter().enumerate() {
                if !(x.is_finite() && x >= 0.0) {
                    return invalid(format!("invalid distance {x} at ({i},{j})"));
                }
                if (x - matrix[j][i]).abs() > 1e-12 * x.abs().max(1.0) {
                    return invalid(format!("distance matrix is not symmetric at ({i},{j})"));
                }
            }
        }
        Ok(PointCloud::Distances(matrix))
    }

    /// One point per CSV row.
    pub fn points_from_csv(reader: impl Read) -> Result<Self> {
        Self::from_points(read_csv_numbers(reader)?)
    }

    /// A square distance matrix in CSV form.
    pub fn distances_from_csv(reader: impl Read) -> Result<Self> {
        Self::from_distances(read_csv_numbers(reader)?)
    }

    pub fn len(&self) -> usize {
        match self {
            PointCloud::Coordinates(p) => p.len(),
            PointCloud::Distances(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            PointCloud::Coordinates(p) => euclidean(&p[i], &p[j]),
            PointCloud::Distances(m) => m[i][j],
        }
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn read_csv_numbers(reader: impl Read) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("row {}: {f:?} is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Faces up to some dimension with monotone weights, kept parallel to the
/// canonical face order of the underlying complex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedComplex {
    complex: SimplicialComplex,
    weights: Vec<Vec<f64>>,
    epsilon: f64,
}

impl WeightedComplex {
    /// Validates monotonicity (up to `epsilon`) and snaps near-equal weights.
    pub fn new(complex: SimplicialComplex, mut weights: Vec<Vec<f64>>, epsilon: f64) -> Result<Self> {
        // -0.0 and 0.0 must share a bit pattern for snapping
        weights.iter_mut().flatten().for_each(|w| *w += 0.0);
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return invalid("epsilon must be positive");
        }
        let dims = (complex.dim() + 1) as usize;
        if weights.len() != dims || (0..dims).any(|k| weights[k].len() != complex.count(k as isize)) {
            return invalid("weights do not match the faces of the complex");
        }
        if let Some(w) = weights.iter().flatten().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return invalid(format!("weight {w} is not a non-negative real"));
        }
        let mut wc = WeightedComplex {
            complex,
            weights,
            epsilon,
        };
        if let Some((a, b)) = wc.monotonicity_violation(epsilon) {
            return invalid(format!(
                "weights are not monotone: w({a}) = {} > w({b}) = {}",
                wc.weight(&a).unwrap(),
                wc.weight(&b).unwrap()
            ));
        }
        wc.snap();
        debug_assert!(wc.monotonicity_violation(0.0).is_none());
        Ok(wc)
    }

    /// Builds from explicit `(face, weight)` pairs. Faces must be closed under subsets.
    pub fn from_face_weights(vertex_count: usize, faces: Vec<(Face, f64)>, epsilon: f64) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (f, w) in faces {
            if map.insert(f.clone(), w).is_some() {
                return invalid(format!("face {f} listed twice"));
            }
        }
        let complex = SimplicialComplex::from_faces_strict(vertex_count, map.keys().cloned())?;
        let weights = (0..=complex.dim())
            .map(|k| complex.faces(k).iter().map(|f| map[f]).collect())
            .collect();
        Self::new(complex, weights, epsilon)
    }

    fn monotonicity_violation(&self, tol: f64) -> Option<(Face, Face)> {
        for k in 1..=self.complex.dim() {
            for (i, f) in self.complex.faces(k).iter().enumerate() {
                let w = self.weights[k as usize][i];
                for (_, g) in f.facets() {
                    let wg = self.weight(&g).expect("complex is closed");
                    if wg > w + tol {
                        return Some((g, f.clone()));
                    }
                }
            }
        }
        None
    }

    /// Groups sorted distinct weights whose consecutive gaps are at most
    /// epsilon and replaces each by the smallest value of its group.
    fn snap(&mut self) {
        let mut all: Vec<f64> = self.weights.iter().flatten().copied().collect();
        all.sort_by(f64::total_cmp);
        all.dedup();
        let mut rep: BTreeMap<u64, f64> = BTreeMap::new();
        let mut current = f64::NAN;
        let mut prev = f64::NAN;
        for &w in &all {
            if current.is_nan() || w - prev > self.epsilon {
                current = w;
            }
            rep.insert(w.to_bits(), current);
            prev = w;
        }
        for w in self.weights.iter_mut().flatten() {
            *w = rep[&w.to_bits()];
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn vertex_count(&self) -> usize {
        self.complex.vertex_count()
    }

    pub fn max_dim(&self) -> isize {
        self.complex.dim()
    }

    pub fn weight(&self, face: &Face) -> Option<f64> {
        let k = face.dim();
        self.complex.index_of(face).map(|i| self.weights[k][i])
    }

    /// Weights of the `k`-faces, parallel to `complex().faces(k)`.
    pub fn weights(&self, k: isize) -> &[f64] {
        if k < 0 {
            return &[];
        }
        self.weights.get(k as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn faces_with_weights(&self, k: isize) -> impl Iterator<Item = (&Face, f64)> + '_ {
        self.complex.faces(k).iter().zip(self.weights(k).iter().copied())
    }

    /// Largest stored weight (the weight of the whole simplex, once complete).
    pub fn max_weight(&self) -> f64 {
        self.weights.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Sum of the weights of the faces of `s`, added in ascending order so
    /// the result only depends on the multiset of weights.
    pub fn total_weight(&self, s: &SimplicialComplex) -> Result<f64> {
        let mut ws = Vec::with_capacity(s.len());
        for f in s.iter() {
            match self.weight(f) {
                Some(w) => ws.push(w),
                None => return invalid(format!("face {f} is not in the weighted complex")),
            }
        }
        Ok(sum_sorted(ws))
    }

    /// Whether every face of the full simplex up to `max_dim` is stored.
    pub fn is_complete(&self, max_dim: usize) -> bool {
        let n = self.vertex_count();
        let top = max_dim.min(n.saturating_sub(1));
        (0..=top).all(|k| self.complex.count(k as isize) == binomial(n, k + 1))
    }

    pub fn to_file(&self) -> WeightedComplexFile {
        WeightedComplexFile {
            vertices: self.vertex_count(),
            faces: (0..=self.max_dim())
                .flat_map(|k| {
                    self.faces_with_weights(k).map(|(f, w)| WeightedFaceEntry {
                        v: f.vertices().to_vec(),
                        w,
                    })
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("weighted complex serializes")
    }

    pub fn from_json(text: &str, epsilon: f64) -> Result<Self> {
        let file: WeightedComplexFile = serde_json::from_str(text)?;
        let faces = file
            .faces
            .into_iter()
            .map(|e| Ok((Face::new(e.v)?, e.w)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_face_weights(file.vertices, faces, epsilon)
    }
}

pub(crate) fn sum_sorted(mut ws: Vec<f64>) -> f64 {
    ws.sort_by(f64::total_cmp);
    ws.into_iter().sum()
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `{"vertices": n, "faces": [{"v": [0,1], "w": 0.5}, ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedComplexFile {
    pub vertices: usize,
    pub faces: Vec<WeightedFaceEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedFaceEntry {
    pub v: Vec<usize>,
    pub w: f64,
}

fn check_cloud(cloud: &PointCloud, max_dim: usize) -> Result<()> {
    if cloud.is_empty() {
        return invalid("point cloud is empty");
    }
    if max_dim < 1 {
        return invalid("max_dim must be at least 1");
    }
    Ok(())
}

/// Vietoris-Rips weighting: half the largest pairwise distance in a face.
pub fn vr_weights(cloud: &PointCloud, max_dim: usize, epsilon: f64) -> Result<WeightedComplex> {
    check_cloud(cloud, max_dim)?;
    let complex = simplex_skeleton(cloud.len(), max_dim);
    let mut weights: Vec<Vec<f64>> = vec![vec![0.0; cloud.len()]];
    for k in 1..=complex.dim() {
        let ws = complex
            .faces(k)
            .iter()
            .map(|f| {
                if k == 1 {
                    let v = f.vertices();
                    0.5 * cloud.distance(v[0], v[1])
                } else {
                    f.facets()
                        .map(|(_, g)| weights[(k - 1) as usize][complex.index_of(&g).unwrap()])
                        .fold(0.0, f64::max)
                }
            })
            .collect();
        weights.push(ws);
    }
    WeightedComplex::new(complex, weights, epsilon)
}

/// Čech weighting: radius of the minimal enclosing ball of a face.
/// Needs coordinates.
pub fn cech_weights(cloud: &PointCloud, max_dim: usize, epsilon: f64) -> Result<WeightedComplex> {
    check_cloud(cloud, max_dim)?;
    let PointCloud::Coordinates(points) = cloud else {
        return Err(Error::UnsupportedInput(
            "Čech weights need point coordinates, not a distance matrix".into(),
        ));
    };
    let complex = simplex_skeleton(cloud.len(), max_dim);
    let weights = (0..=complex.dim())
        .map(|k| {
            complex
                .faces(k)
                .iter()
                .map(|f| {
                    let pts: Vec<&[f64]> = f.vertices().iter().map(|&v| points[v].as_slice()).collect();
                    min_enclosing_ball(&pts).1
                })
                .collect()
        })
        .collect();
    WeightedComplex::new(complex, weights, epsilon)
}

/// Faces of weight at most `alpha`.
pub fn reduced_complex(w: &WeightedComplex, alpha: f64) -> SimplicialComplex {
    w.complex.retain(|f| w.weight(f).unwrap() <= alpha)
}

/// The distinct (snapped) weights in increasing order.
pub fn critical_values(w: &WeightedComplex) -> Vec<f64> {
    let mut v: Vec<f64> = w.weights.iter().flatten().copied().collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Adds every missing face of the full simplex up to `max_dim`, weighted
/// `max_weight * (1 + margin)` (or `margin` when all weights are zero).
pub fn complete_to_simplex(w: &WeightedComplex, max_dim: usize, margin: f64) -> Result<WeightedComplex> {
    if !(margin > 0.0) {
        return invalid("margin must be positive");
    }
    let n = w.vertex_count();
    if n == 0 {
        return invalid("cannot complete a complex without vertices");
    }
    if w.is_complete(max_dim) && w.max_dim() as usize >= max_dim.min(n - 1) {
        return Ok(w.clone());
    }
    let max = w.max_weight();
    let late = if max > 0.0 { max * (1.0 + margin) } else { margin };
    let full = simplex_skeleton(n, max_dim.max(w.max_dim().max(0) as usize));
    let weights = (0..=full.dim())
        .map(|k| {
            full.faces(k)
                .iter()
                .map(|f| w.weight(f).unwrap_or(late))
                .collect()
        })
        .collect();
    WeightedComplex::new(full, weights, w.epsilon)
}

/// Minimal enclosing ball of a small point set: `(center, radius)`.
///
/// Welzl's recursion with the support set capped at `dim + 1` points.
pub fn min_enclosing_ball(points: &[&[f64]]) -> (Vec<f64>, f64) {
    assert!(!points.is_empty(), "enclosing ball of an empty set");
    let dim = points[0].len();
    let mut support = Vec::with_capacity(dim + 1);
    let (c, r2) = welzl(points, points.len(), &mut support, dim);
    (c, r2.max(0.0).sqrt())
}

fn welzl<'a>(points: &[&'a [f64]], n: usize, support: &mut Vec<&'a [f64]>, dim: usize) -> (Vec<f64>, f64) {
    if n == 0 || support.len() == dim + 1 {
        return ball_from_support(support, dim);
    }
    let p = points[n - 1];
    let (c, r2) = welzl(points, n - 1, support, dim);
    if inside(p, &c, r2) {
        return (c, r2);
    }
    support.push(p);
    let out = welzl(points, n - 1, support, dim);
    support.pop();
    out
}

fn inside(p: &[f64], c: &[f64], r2: f64) -> bool {
    if r2 < 0.0 {
        return false;
    }
    let d2: f64 = p.iter().zip(c).map(|(x, y)| (x - y) * (x - y)).sum();
    d2 <= r2 * (1.0 + 1e-12) + 1e-18
}

/// Smallest ball with every support point on its boundary (center in the
/// affine hull). Affinely dependent supports fall back to the best subset.
/// An empty support yields radius² -1 so that nothing is inside.
fn ball_from_support(support: &[&[f64]], dim: usize) -> (Vec<f64>, f64) {
    match support.len() {
        0 => (vec![0.0; dim], -1.0),
        1 => (support[0].to_vec(), 0.0),
        _ => circumball(support).unwrap_or_else(|| {
            let mut best: Option<(Vec<f64>, f64)> = None;
            let m = support.len();
            for mask in 1u32..(1 << m) - 1 {
                let sub: Vec<&[f64]> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| support[i]).collect();
                if let Some((c, r2)) = if sub.len() == 1 { Some((sub[0].to_vec(), 0.0)) } else { circumball(&sub) } {
                    if support.iter().all(|p| inside(p, &c, r2)) && best.as_ref().is_none_or(|b| r2 < b.1) {
                        best = Some((c, r2));
                    }
                }
            }
            best.expect("some subset of the support encloses it")
        }),
    }
}

fn circumball(support: &[&[f64]]) -> Option<(Vec<f64>, f64)> {
    let p0 = support[0];
    let m = support.len() - 1;
    let diffs: Vec<Vec<f64>> = support[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row: Vec<f64> = (0..m).map(|j| 2.0 * dot(&diffs[i], &diffs[j])).collect();
            row.push(dot(&diffs[i], &diffs[i]));
            row
        })
        .collect();
    let scale = a.iter().map(|r| r[..m].iter().fold(0.0f64, |s, x| s.max(x.abs()))).fold(0.0, f64::max);
    // Gaussian elimination with partial pivoting
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return None;
        }
        a.swap(col, piv);
        for i in 0..m {
            if i != col {
                let factor = a[i][col] / a[col][col];
                for j in col..=m {
                    a[i][j] -= factor * a[col][j];
                }
            }
        }
    }
    let lambda: Vec<f64> = (0..m).map(|i| a[i][m] / a[i][i]).collect();
    let mut c = p0.to_vec();
    for (l, d) in lambda.iter().zip(&diffs) {
        for (ci, di) in c.iter_mut().zip(d) {
            *ci += l * di;
        }
    }
    let r2 = support
        .iter()
        .map(|p| p.iter().zip(&c).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
        .fold(0.0, f64::max);
    Some((c, r2))
}

/// A complete weighted simplex with small integer weights, so that equal
/// weights are frequent and all sums are exact.
///
/// Every face draws a value in `0..=levels` and takes the maximum of that
/// and its facets' weights; vertices draw from `0..=levels / 3`.
pub fn random_weighted_simplex(n: usize, max_dim: usize, levels: u32, seed: u64) -> Result<WeightedComplex> {
    use rand::{Rng, SeedableRng};
    if n == 0 {
        return invalid("a weighted simplex needs at least one vertex");
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let complex = simplex_skeleton(n, max_dim);
    let mut weights: Vec<Vec<f64>> = vec![(0..n).map(|_| rng.gen_range(0..=levels / 3) as f64).collect()];
    for k in 1..=complex.dim() {
        let ws = complex
            .faces(k)
            .iter()
            .map(|f| {
                let own = rng.gen_range(0..=levels) as f64;
                f.facets()
                    .map(|(_, g)| weights[(k - 1) as usize][complex.index_of(&g).unwrap()])
                    .fold(own, f64::max)
            })
            .collect();
        weights.push(ws);
    }
    WeightedComplex::new(complex, weights, DEFAULT_EPSILON)
}
