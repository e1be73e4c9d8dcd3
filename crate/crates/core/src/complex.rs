//! Finite abstract simplicial complexes.
//!
//! A face is the sorted list of its vertex ids; a complex is a downward
//! closed set of faces over the dense vertex range `0..vertex_count`.
//! Faces are kept per dimension in lexicographic order, which is the
//! canonical chain-basis order used by the boundary matrices.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A simplex, stored as its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Face(Vec<usize>);

impl Face {
    /// Builds a face from vertex ids in any order. Rejects empty and repeated ids.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return invalid("a face needs at least one vertex");
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("repeated vertex in face {vertices:?}"));
        }
        Ok(Face(vertices))
    }

    /// Caller guarantees the list is non-empty and strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn vertex(v: usize) -> Self {
        Face(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn max_vertex(&self) -> usize {
        *self.0.last().expect("faces are non-empty")
    }

    /// Codimension-one faces, paired with the position of the omitted vertex.
    /// Empty for a vertex.
    pub fn facets(&self) -> impl Iterator<Item = (usize, Face)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            (i, Face(v))
        })
    }

    /// All non-empty subsets, including the face itself.
    pub fn subfaces(&self) -> Vec<Face> {
        let k = self.0.len();
        (1u64..(1u64 << k))
            .map(|mask| {
                Face(
                    (0..k)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }
}

/// Faces order by dimension first, then lexicographically.
impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// An immutable, downward closed set of faces.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    by_dim: Vec<Vec<Face>>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("vertex_count", &self.vertex_count)
            .field("f_vector", &self.f_vector())
            .finish()
    }
}

impl SimplicialComplex {
    pub fn empty(vertex_count: usize) -> Self {
        SimplicialComplex {
            vertex_count,
            by_dim: Vec::new(),
        }
    }

    /// Builds a complex from arbitrary faces, inserting every missing subface.
    pub fn from_faces<I>(vertex_count: usize, faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = Face>,
    {
        let mut b = ComplexBuilder::new(vertex_count);
        for f in faces {
            b.insert(f)?;
        }
        Ok(b.build())
    }

    /// Like [`from_faces`](Self::from_faces) but rejects input that is not
    /// already downward closed.
    pub fn from_faces_strict<I>(vertex_count: usize, faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = Face>,
    {
        let mut b = ComplexBuilder::new(vertex_count).strict();
        for f in faces {
            b.insert(f)?;
        }
        b.try_build()
    }

    /// Assembles a complex from faces already known to be closed. Duplicates are removed.
    pub(crate) fn from_closed(vertex_count: usize, faces: impl IntoIterator<Item = Face>) -> Self {
        let set: BTreeSet<Face> = faces.into_iter().collect();
        let c = Self::from_sorted_set(vertex_count, set);
        debug_assert!(c.is_closed());
        c
    }

    fn from_sorted_set(vertex_count: usize, set: BTreeSet<Face>) -> Self {
        let mut by_dim: Vec<Vec<Face>> = Vec::new();
        for f in set {
            let k = f.dim();
            if by_dim.len() <= k {
                by_dim.resize_with(k + 1, Vec::new);
            }
            by_dim[k].push(f);
        }
        SimplicialComplex {
            vertex_count,
            by_dim,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Dimension of the complex; `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// The `k`-faces in canonical order (empty slice when out of range).
    pub fn faces(&self, k: isize) -> &[Face] {
        if k < 0 {
            return &[];
        }
        self.by_dim.get(k as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, k: isize) -> usize {
        self.faces(k).len()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Face> + '_ {
        self.by_dim.iter().flatten()
    }

    /// Position of `face` within [`faces`](Self::faces) of its dimension.
    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.faces(face.dim() as isize).binary_search(face).ok()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.index_of(face).is_some()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.iter().all(|f| other.contains(f))
    }

    /// Checks downward closure.
    pub fn is_closed(&self) -> bool {
        self.iter()
            .all(|f| f.facets().all(|(_, g)| self.contains(&g)))
    }

    /// All faces of dimension at most `k`; empty when `k < 0`.
    pub fn skeleton(&self, k: isize) -> SimplicialComplex {
        let keep = if k < 0 {
            0
        } else {
            (k as usize + 1).min(self.by_dim.len())
        };
        SimplicialComplex {
            vertex_count: self.vertex_count,
            by_dim: self.by_dim[..keep].to_vec(),
        }
    }

    /// Alternating face count.
    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(k, fs)| if k % 2 == 0 { fs.len() as i64 } else { -(fs.len() as i64) })
            .sum()
    }

    /// Faces for which `keep` holds. The predicate must select a closed subset.
    pub(crate) fn retain(&self, mut keep: impl FnMut(&Face) -> bool) -> SimplicialComplex {
        let mut by_dim: Vec<Vec<Face>> = self
            .by_dim
            .iter()
            .map(|fs| fs.iter().filter(|f| keep(f)).cloned().collect())
            .collect();
        while by_dim.last().is_some_and(|v| v.is_empty()) {
            by_dim.pop();
        }
        let c = SimplicialComplex {
            vertex_count: self.vertex_count,
            by_dim,
        };
        debug_assert!(c.is_closed());
        c
    }

    /// Union with a second complex on the same vertex set.
    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let set: BTreeSet<Face> = self.iter().chain(other.iter()).cloned().collect();
        Self::from_sorted_set(self.vertex_count.max(other.vertex_count), set)
    }

    /// Adds faces whose facets are all present (or that are vertices).
    pub fn with_faces(&self, extra: impl IntoIterator<Item = Face>) -> Result<SimplicialComplex> {
        let mut b = ComplexBuilder::new(self.vertex_count).strict();
        for f in self.iter().cloned().chain(extra) {
            b.insert(f)?;
        }
        b.try_build()
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            vertices: self.vertex_count,
            faces: self.iter().map(|f| f.vertices().to_vec()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("complex serializes")
    }

    /// Parses the complex JSON format. In `strict` mode missing subfaces are an error.
    pub fn from_json(text: &str, strict: bool) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text)?;
        file.into_complex(strict)
    }
}

/// On-disk shape of a complex: `{"vertices": n, "faces": [[0,1,2], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: usize,
    pub faces: Vec<Vec<usize>>,
}

impl ComplexFile {
    pub fn into_complex(self, strict: bool) -> Result<SimplicialComplex> {
        let faces = self
            .faces
            .into_iter()
            .map(Face::new)
            .collect::<Result<Vec<_>>>()?;
        if strict {
            SimplicialComplex::from_faces_strict(self.vertices, faces)
        } else {
            SimplicialComplex::from_faces(self.vertices, faces)
        }
    }
}

/// Collects faces and produces a closed complex.
///
/// In the default mode every inserted face drags in its subfaces. In strict
/// mode [`try_build`](Self::try_build) fails if a subface was never inserted.
#[derive(Debug, Clone)]
pub struct ComplexBuilder {
    vertex_count: usize,
    faces: BTreeSet<Face>,
    strict: bool,
}

impl ComplexBuilder {
    pub fn new(vertex_count: usize) -> Self {
        ComplexBuilder {
            vertex_count,
            faces: BTreeSet::new(),
            strict: false,
        }
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    pub fn insert(&mut self, face: Face) -> Result<&mut Self> {
        if face.max_vertex() >= self.vertex_count {
            return invalid(format!(
                "face {face} uses a vertex outside 0..{}",
                self.vertex_count
            ));
        }
        if self.strict {
            self.faces.insert(face);
        } else if !self.faces.contains(&face) {
            for g in face.subfaces() {
                self.faces.insert(g);
            }
        }
        Ok(self)
    }

    pub fn try_build(self) -> Result<SimplicialComplex> {
        if self.strict {
            for f in &self.faces {
                for (_, g) in f.facets() {
                    if !self.faces.contains(&g) {
                        return invalid(format!("face {f} is missing its subface {g}"));
                    }
                }
            }
        }
        Ok(SimplicialComplex::from_sorted_set(self.vertex_count, self.faces))
    }

    /// Builds a non-strict complex. Panics in strict mode if closure fails.
    pub fn build(self) -> SimplicialComplex {
        self.try_build().expect("builder input is not downward closed")
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Face> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Face::from_sorted(idx.clone()));
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + (i - 1) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// The full simplex on `n_vertices` vertices: every non-empty subset.
pub fn full_simplex(n_vertices: usize) -> Result<SimplicialComplex> {
    if n_vertices == 0 {
        return invalid("the full simplex needs at least one vertex");
    }
    if n_vertices > 24 {
        return invalid(format!(
            "full simplex on {n_vertices} vertices is too large; use simplex_skeleton"
        ));
    }
    Ok(simplex_skeleton(n_vertices, n_vertices - 1))
}

/// Faces of the full simplex on `n_vertices` vertices up to dimension `max_dim`.
pub fn simplex_skeleton(n_vertices: usize, max_dim: usize) -> SimplicialComplex {
    let top = max_dim.min(n_vertices.saturating_sub(1));
    let by_dim = if n_vertices == 0 {
        Vec::new()
    } else {
        (0..=top).map(|k| k_subsets(n_vertices, k + 1)).collect()
    };
    SimplicialComplex {
        vertex_count: n_vertices,
        by_dim,
    }
}

/// Whether `s` contains the whole `(k-1)`-skeleton of `x`.
pub fn is_spanning(s: &SimplicialComplex, x: &SimplicialComplex, k: usize) -> Result<bool> {
    if !s.is_subcomplex_of(x) {
        return invalid("spanning test needs S to be a subcomplex of X");
    }
    let k = k as isize;
    Ok((0..k).all(|j| s.count(j) == x.count(j)))
}

/// The star tree of the `n`-simplex: its `(k-1)`-skeleton plus every
/// `k`-face through `apex`. Empty for `k = 0`.
pub fn star_tree(n: usize, k: usize, apex: usize) -> Result<SimplicialComplex> {
    let vertices = n + 1;
    if apex >= vertices {
        return invalid(format!("apex {apex} is not a vertex of the {n}-simplex"));
    }
    if k > n {
        return invalid(format!("k = {k} exceeds the simplex dimension {n}"));
    }
    if k == 0 {
        return Ok(SimplicialComplex::empty(vertices));
    }
    let base = simplex_skeleton(vertices, k - 1);
    let tops = k_subsets(vertices, k + 1)
        .into_iter()
        .filter(|f| f.vertices().contains(&apex));
    Ok(SimplicialComplex::from_closed(
        vertices,
        base.iter().cloned().chain(tops),
    ))
}
