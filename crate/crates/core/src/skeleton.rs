//! Critical faces, their death times, and the homologically persistent
//! skeleton built from a minimal spanning tree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{is_leading_set, leading_sets, FieldMatrix, FieldSpec};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::filtration::{critical_values, reduced_complex, sum_sorted, WeightedComplex};
use crate::homology::{fmt_real, relative_kernel, Dot, PersistenceDiagram};
use crate::spanning::{minimal_spanning_tree, reduced_mst, SpanningTree, TieOrder};

/// A pair `(l, r)` with `0 ≤ l < r ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Label {
    pub l: f64,
    pub r: f64,
}

impl Label {
    pub fn new(l: f64, r: f64) -> Result<Self> {
        if !(l >= 0.0 && l.is_finite() && l < r) {
            return invalid(format!("({l}, {r}) is not a label"));
        }
        Ok(Label { l, r })
    }

    pub fn alive_at(&self, alpha: f64) -> bool {
        self.l <= alpha && alpha < self.r
    }

    /// Information order: `self ⊑ other` iff `l ≤ l'` and `r ≥ r'`.
    pub fn precedes(&self, other: &Label) -> bool {
        self.l <= other.l && self.r >= other.r
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_real(self.l), fmt_real(self.r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceKind {
    Mst,
    Critical,
}

/// A critical face with its birth (its weight) and death time.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalFace {
    pub face: Face,
    pub birth: f64,
    pub death: f64,
}

impl CriticalFace {
    pub fn lifespan(&self) -> f64 {
        self.death - self.birth
    }
}

/// The `d`-faces of `w` outside the tree, sorted by `(birth, face)`.
pub fn critical_faces(w: &WeightedComplex, t: &SpanningTree) -> Vec<(Face, f64)> {
    let mut out: Vec<(Face, f64)> = w
        .faces_with_weights(t.d() as isize)
        .filter(|(f, _)| !t.contains(f))
        .map(|(f, wt)| (f.clone(), wt))
        .collect();
    out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    out
}

/// One step of the death sweep, offered to a leading-set chooser.
pub struct DeathStep<'a> {
    pub alpha: f64,
    /// Living critical faces born by `alpha`, in critical order.
    pub candidates: &'a [Face],
    pub weights: &'a [f64],
    /// `r × s` matrix whose row space is the kernel, one column per candidate.
    pub kernel: &'a FieldMatrix,
}

fn check_complete(w: &WeightedComplex, d: usize) -> Result<()> {
    if !w.is_complete(d + 1) {
        return invalid(format!("weighted complex is not complete up to dimension {}", d + 1));
    }
    Ok(())
}

/// Death times with the elder rule: at each scale the faces that die form
/// a leading set of maximal total weight.
pub fn assign_deaths(w: &WeightedComplex, t: &SpanningTree, field: FieldSpec) -> Result<Vec<CriticalFace>> {
    if t.d() == 0 {
        check_complete(w, 0)?;
        return Ok(deaths_by_merging(w, &critical_faces(w, t)));
    }
    assign_deaths_with(w, t, field, |step| leading_sets(step.kernel, step.weights))
}

/// The general sweep with a custom leading-set chooser. The chooser returns
/// column indices into `step.candidates`, which must form a leading set.
pub fn assign_deaths_with<C>(w: &WeightedComplex, t: &SpanningTree, field: FieldSpec, mut choose: C) -> Result<Vec<CriticalFace>>
where
    C: FnMut(&DeathStep<'_>) -> Result<Vec<usize>>,
{
    let d = t.d();
    check_complete(w, d)?;
    let crit = critical_faces(w, t);
    let mut death: Vec<Option<f64>> = vec![None; crit.len()];
    let mut tops: Vec<f64> = w.weights(d as isize + 1).to_vec();
    tops.sort_by(f64::total_cmp);
    tops.dedup();
    for alpha in critical_values(w) {
        if tops.binary_search_by(|x| x.total_cmp(&alpha)).is_err() {
            continue;
        }
        let living: Vec<usize> = (0..crit.len()).filter(|&i| death[i].is_none() && crit[i].1 <= alpha).collect();
        if living.is_empty() {
            continue;
        }
        let faces: Vec<Face> = living.iter().map(|&i| crit[i].0.clone()).collect();
        let weights: Vec<f64> = living.iter().map(|&i| crit[i].1).collect();
        let q = reduced_complex(w, alpha);
        let tree = reduced_mst(t, alpha);
        let kernel = relative_kernel(&faces, &tree, &q, d, field)?.transpose();
        if kernel.rows() == 0 {
            continue;
        }
        let step = DeathStep {
            alpha,
            candidates: &faces,
            weights: &weights,
            kernel: &kernel,
        };
        let chosen = choose(&step)?;
        if chosen.iter().any(|&j| j >= faces.len()) || !is_leading_set(&kernel, &chosen) {
            return invalid(format!("chosen faces at scale {alpha} are not a leading set"));
        }
        log::debug!("scale {alpha}: {} of {} living faces die", chosen.len(), faces.len());
        for j in chosen {
            death[living[j]] = Some(alpha);
        }
    }
    let last = if d == 0 { f64::INFINITY } else { w.max_weight() };
    Ok(crit
        .into_iter()
        .zip(death)
        .map(|((face, birth), death)| CriticalFace {
            face,
            birth,
            death: death.unwrap_or(last),
        })
        .collect())
}

/// Zero-dimensional deaths by merging components, matching the greedy
/// choice of the general sweep: in each merged component every living
/// vertex dies except the last one in (weight descending, critical order).
fn deaths_by_merging(w: &WeightedComplex, crit: &[(Face, f64)]) -> Vec<CriticalFace> {
    let n = w.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut edges: Vec<(f64, usize, usize)> = w
        .faces_with_weights(1)
        .map(|(f, wt)| (wt, f.vertices()[0], f.vertices()[1]))
        .collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut death: Vec<Option<f64>> = vec![None; crit.len()];
    let mut next_edge = 0;
    for alpha in critical_values(w) {
        while next_edge < edges.len() && edges[next_edge].0 <= alpha {
            let (_, a, b) = edges[next_edge];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
            next_edge += 1;
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, (f, birth)) in crit.iter().enumerate() {
            if death[i].is_none() && *birth <= alpha {
                groups.entry(find(&mut parent, f.vertices()[0])).or_default().push(i);
            }
        }
        for mut members in groups.into_values() {
            members.sort_by(|&a, &b| crit[b].1.total_cmp(&crit[a].1).then(a.cmp(&b)));
            members.pop();
            for i in members {
                death[i] = Some(alpha);
            }
        }
    }
    crit.iter()
        .zip(death)
        .map(|((face, birth), death)| CriticalFace {
            face: face.clone(),
            birth: *birth,
            death: death.unwrap_or(f64::INFINITY),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkeletonFace {
    pub face: Face,
    pub label: Label,
    pub kind: FaceKind,
}

/// Faces of a minimal spanning tree and the critical faces of positive
/// lifespan, each labeled by its lifetime.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledSkeleton {
    d: usize,
    vertex_count: usize,
    faces: BTreeMap<Face, (Label, FaceKind)>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Bound {
    Finite(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct FaceEntry {
    v: Vec<usize>,
    l: f64,
    r: Bound,
    kind: FaceKind,
}

#[derive(Serialize, Deserialize)]
struct SkeletonFile {
    d: usize,
    vertices: usize,
    faces: Vec<FaceEntry>,
}

impl LabeledSkeleton {
    /// Tree faces get `(w, ∞)`; criticals with `birth < death` get
    /// `(birth, death)`; the rest are left out.
    pub fn assemble(t: &SpanningTree, criticals: &[CriticalFace]) -> Result<Self> {
        let mut faces = BTreeMap::new();
        for k in 0..=t.complex().dim() {
            for (f, wt) in t.faces_with_weights(k) {
                faces.insert(f.clone(), (Label::new(wt, f64::INFINITY)?, FaceKind::Mst));
            }
        }
        for c in criticals {
            if c.death > c.birth {
                if faces.insert(c.face.clone(), (Label::new(c.birth, c.death)?, FaceKind::Critical)).is_some() {
                    return invalid(format!("critical face {} is in the tree", c.face));
                }
            }
        }
        let s = LabeledSkeleton {
            d: t.d(),
            vertex_count: t.complex().vertex_count(),
            faces,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> impl Iterator<Item = SkeletonFace> + '_ {
        self.faces.iter().map(|(f, (label, kind))| SkeletonFace {
            face: f.clone(),
            label: *label,
            kind: *kind,
        })
    }

    pub fn label(&self, face: &Face) -> Option<Label> {
        self.faces.get(face).map(|e| e.0)
    }

    pub fn kind(&self, face: &Face) -> Option<FaceKind> {
        self.faces.get(face).map(|e| e.1)
    }

    /// Critical faces with their labels, in face order.
    pub fn critical(&self) -> impl Iterator<Item = (&Face, Label)> + '_ {
        self.faces
            .iter()
            .filter(|(_, (_, k))| *k == FaceKind::Critical)
            .map(|(f, (l, _))| (f, *l))
    }

    /// The underlying complex of all faces, ignoring labels.
    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_faces_strict(self.vertex_count, self.faces.keys().cloned()).expect("skeleton is closed")
    }

    /// Sum of the left labels of the faces alive at `alpha`.
    pub fn reduced_weight(&self, alpha: f64) -> f64 {
        sum_sorted(self.faces.values().filter(|(l, _)| l.alive_at(alpha)).map(|(l, _)| l.l).collect())
    }

    /// Closure under facets, the label invariants and label monotonicity.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::VerificationFailure(msg));
        for (f, (label, kind)) in &self.faces {
            if f.dim() > self.d || f.max_vertex() >= self.vertex_count {
                return fail(format!("face {f} does not fit a {}-skeleton on {} vertices", self.d, self.vertex_count));
            }
            if !(label.l >= 0.0 && label.l < label.r) {
                return fail(format!("face {f} has invalid label {label}"));
            }
            if *kind == FaceKind::Mst && label.r != f64::INFINITY {
                return fail(format!("tree face {f} has finite right label"));
            }
            if *kind == FaceKind::Critical && f.dim() != self.d {
                return fail(format!("critical face {f} is not {}-dimensional", self.d));
            }
            for (_, g) in f.facets() {
                match self.faces.get(&g) {
                    None => return fail(format!("facet {g} of {f} is missing")),
                    Some((lg, _)) if !lg.precedes(label) => {
                        return fail(format!("labels of {g} {lg} and {f} {label} are not monotone"));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = SkeletonFile {
            d: self.d,
            vertices: self.vertex_count,
            faces: self
                .faces
                .iter()
                .map(|(f, (label, kind))| FaceEntry {
                    v: f.vertices().to_vec(),
                    l: label.l,
                    r: if label.r.is_infinite() { Bound::Text("inf".into()) } else { Bound::Finite(label.r) },
                    kind: *kind,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("skeleton serializes")
    }

    /// Parses a skeleton; structural problems are invalid input, broken
    /// label invariants are verification failures.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SkeletonFile = serde_json::from_str(text)?;
        let mut faces = BTreeMap::new();
        for e in file.faces {
            let face = Face::new(e.v)?;
            let r = match e.r {
                Bound::Finite(x) => x,
                Bound::Text(s) if s.eq_ignore_ascii_case("inf") => f64::INFINITY,
                Bound::Text(s) => return invalid(format!("right label {s:?} is not a number")),
            };
            if faces.insert(face.clone(), (Label { l: e.l, r }, e.kind)).is_some() {
                return invalid(format!("face {face} listed twice"));
            }
        }
        let s = LabeledSkeleton {
            d: file.d,
            vertex_count: file.vertices,
            faces,
        };
        s.validate()?;
        Ok(s)
    }
}

/// Minimal spanning tree, elder-rule deaths and the labeled skeleton.
pub fn build_hopes(w: &WeightedComplex, d: usize, field: FieldSpec, tie: &TieOrder) -> Result<LabeledSkeleton> {
    let t = minimal_spanning_tree(w, d, field, tie)?;
    let deaths = assign_deaths(w, &t, field)?;
    LabeledSkeleton::assemble(&t, &deaths)
}

/// Faces with `l ≤ alpha < r`.
pub fn reduced_hopes(h: &LabeledSkeleton, alpha: f64) -> SimplicialComplex {
    let alive = h.faces.iter().filter(|(_, (l, _))| l.alive_at(alpha)).map(|(f, _)| f.clone());
    SimplicialComplex::from_faces_strict(h.vertex_count, alive).expect("labels are monotone")
}

/// Matches critical labels with the dots of `diagram`, one to one, checking
/// that each left label is the weight of its face.
pub fn diagram_correspondence(h: &LabeledSkeleton, diagram: &PersistenceDiagram, w: &WeightedComplex) -> Result<Vec<(Face, Dot)>> {
    if diagram.dim != h.d {
        return invalid(format!("diagram of dimension {} for a {}-skeleton", diagram.dim, h.d));
    }
    let mut crit: Vec<(&Face, Label)> = h.critical().collect();
    for (f, label) in &crit {
        if w.weight(f) != Some(label.l) {
            return Err(Error::VerificationFailure(format!(
                "face {f} has left label {} but weight {}",
                fmt_real(label.l),
                w.weight(f).map_or("none".into(), fmt_real)
            )));
        }
    }
    crit.sort_by(|a, b| a.1.l.total_cmp(&b.1.l).then(a.1.r.total_cmp(&b.1.r)).then(a.0.cmp(b.0)));
    let dots: Vec<Dot> = diagram.dots.iter().copied().filter(|d| d.death > d.birth).collect();
    let mut out = Vec::with_capacity(crit.len());
    for i in 0..crit.len().max(dots.len()) {
        match (crit.get(i), dots.get(i)) {
            (Some((f, label)), Some(dot)) if label.l == dot.birth && label.r == dot.death => out.push(((*f).clone(), *dot)),
            (Some((f, label)), dot) => {
                return Err(Error::VerificationFailure(format!(
                    "face {f} with label {label} has no matching dot{}",
                    dot.map_or(String::new(), |d| format!(" (next dot ({}, {}))", fmt_real(d.birth), fmt_real(d.death)))
                )));
            }
            (None, Some(dot)) => {
                return Err(Error::VerificationFailure(format!(
                    "dot ({}, {}) has no critical face",
                    fmt_real(dot.birth),
                    fmt_real(dot.death)
                )));
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(out)
}

/// Death time of every critical face, keyed by face.
pub fn death_map(criticals: &[CriticalFace]) -> HashMap<Face, f64> {
    criticals.iter().map(|c| (c.face.clone(), c.death)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{cech_weights, vr_weights, PointCloud, DEFAULT_EPSILON};
    use crate::homology::{betti, is_fitting, persistence_diagram};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(v: &[usize]) -> Face {
        Face::new(v.to_vec()).unwrap()
    }

    fn cloud(points: Vec<Vec<f64>>) -> PointCloud {
        PointCloud::from_points(points).unwrap()
    }

    fn square() -> WeightedComplex {
        vr_weights(&cloud(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]), 2, DEFAULT_EPSILON).unwrap()
    }

    fn lex_tree(w: &WeightedComplex, d: usize, field: FieldSpec) -> SpanningTree {
        minimal_spanning_tree(w, d, field, &TieOrder::Lexicographic).unwrap()
    }

    #[test]
    fn critical_counts() {
        let c = cloud(vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.1, 0.0], vec![0.2, 1.3, 0.0], vec![0.1, 0.4, 1.1]]);
        let w = vr_weights(&c, 3, DEFAULT_EPSILON).unwrap();
        for (d, n) in [(0, 4), (1, 3), (2, 1)] {
            let t = lex_tree(&w, d, FieldSpec::gf2());
            assert_eq!(critical_faces(&w, &t).len(), n);
        }
    }

    #[test]
    fn square_deaths() {
        let w = square();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for field in [FieldSpec::gf2(), FieldSpec::rational()] {
            let t = lex_tree(&w, 1, field);
            let deaths = death_map(&assign_deaths(&w, &t, field).unwrap());
            assert_eq!(deaths.len(), 3);
            let side = critical_faces(&w, &t).into_iter().find(|(_, b)| *b == 0.5).unwrap().0;
            assert!((deaths[&side] - h).abs() < 1e-12);
            for diag in [f(&[0, 2]), f(&[1, 3])] {
                assert_eq!(deaths[&diag], w.weight(&diag).unwrap());
            }
            let s = build_hopes(&w, 1, field, &TieOrder::Lexicographic).unwrap();
            assert_eq!(s.complex().f_vector(), vec![4, 4]);
            let crit: Vec<_> = s.critical().collect();
            assert_eq!(crit.len(), 1);
            assert_eq!(crit[0].1.l, 0.5);
            assert!((crit[0].1.r - h).abs() < 1e-12);
            assert!(reduced_hopes(&s, -0.1).is_empty());
            assert_eq!(reduced_hopes(&s, 0.6).f_vector(), vec![4, 4]);
            assert_eq!(reduced_hopes(&s, 1.0), reduced_mst(&t, 1.0));
            let pd = persistence_diagram(&w, 1, field);
            let m = diagram_correspondence(&s, &pd, &w).unwrap();
            assert_eq!(m.len(), 1);
        }
    }

    #[test]
    fn zero_lifespan_triangle_edges() {
        let s3 = 3f64.sqrt() / 2.0;
        let eq = vr_weights(&cloud(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, s3]]), 2, DEFAULT_EPSILON).unwrap();
        let obtuse = cech_weights(&cloud(vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![1.0, 0.5]]), 2, DEFAULT_EPSILON).unwrap();
        for w in [eq, obtuse] {
            let t = lex_tree(&w, 1, FieldSpec::gf2());
            let deaths = assign_deaths(&w, &t, FieldSpec::gf2()).unwrap();
            assert_eq!(deaths.len(), 1);
            assert_eq!(deaths[0].lifespan(), 0.0);
            let s = LabeledSkeleton::assemble(&t, &deaths).unwrap();
            assert_eq!(s.critical().count(), 0);
        }
    }

    #[test]
    fn tetrahedron_boundary() {
        let c = cloud(vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, -1.0, -1.0],
            vec![-1.0, 1.0, -1.0],
            vec![-1.0, -1.0, 1.0],
        ]);
        let w = cech_weights(&c, 3, DEFAULT_EPSILON).unwrap();
        let s = build_hopes(&w, 2, FieldSpec::gf3(), &TieOrder::Lexicographic).unwrap();
        assert_eq!(s.complex().f_vector(), vec![4, 6, 4]);
        assert_eq!(s.critical().count(), 1);
        let vr = vr_weights(&c, 3, DEFAULT_EPSILON).unwrap();
        let s = build_hopes(&vr, 2, FieldSpec::gf3(), &TieOrder::Lexicographic).unwrap();
        assert_eq!(s.critical().count(), 0);
    }

    #[test]
    fn zero_dimensional_skeleton() {
        let c = cloud(vec![vec![0.0], vec![1.0], vec![3.0], vec![7.0]]);
        let w = vr_weights(&c, 1, DEFAULT_EPSILON).unwrap();
        let s = build_hopes(&w, 0, FieldSpec::gf2(), &TieOrder::Lexicographic).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.critical().filter(|(_, l)| l.r.is_infinite()).count(), 1);
        let pd = persistence_diagram(&w, 0, FieldSpec::gf2());
        assert_eq!(diagram_correspondence(&s, &pd, &w).unwrap().len(), 4);
    }

    #[test]
    fn bad_chooser_is_rejected() {
        let w = square();
        let t = lex_tree(&w, 1, FieldSpec::gf2());
        let r = assign_deaths_with(&w, &t, FieldSpec::gf2(), |step| Ok(vec![0; step.kernel.rows() + 1]));
        assert!(r.is_err());
    }

    #[test]
    fn json_roundtrip_and_corruption() {
        let w = square();
        let s = build_hopes(&w, 1, FieldSpec::gf2(), &TieOrder::Lexicographic).unwrap();
        let text = s.to_json();
        assert!(text.contains("\"inf\""));
        assert!(text.contains("\"critical\""));
        assert_eq!(LabeledSkeleton::from_json(&text).unwrap(), s);
        // a critical face dying before its birth
        let bad = text.replacen("\"r\": 0.7", "\"r\": 0.1", 1);
        assert_ne!(bad, text);
        assert!(matches!(LabeledSkeleton::from_json(&bad), Err(Error::VerificationFailure(_))));
        assert!(matches!(LabeledSkeleton::from_json("{"), Err(Error::Json(_))));
    }

    fn random_weighted(n: usize, d: usize, seed: u64) -> WeightedComplex {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..2).map(|_| rng.gen_range(0..5) as f64).collect()).collect();
        vr_weights(&cloud(pts), d + 1, DEFAULT_EPSILON).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn merging_matches_general_sweep(n in 1usize..8, seed in any::<u64>()) {
            let w = random_weighted(n, 0, seed);
            for field in [FieldSpec::gf2(), FieldSpec::rational()] {
                let t = lex_tree(&w, 0, field);
                let fast = assign_deaths(&w, &t, field).unwrap();
                let general = assign_deaths_with(&w, &t, field, |s| leading_sets(s.kernel, s.weights)).unwrap();
                prop_assert_eq!(&fast, &general);
                prop_assert_eq!(fast.iter().filter(|c| c.death.is_infinite()).count(), 1);
            }
        }

        #[test]
        fn skeleton_invariants(n in 2usize..7, d in 1usize..3, seed in any::<u64>()) {
            let w = random_weighted(n, d, seed);
            let field = FieldSpec::gf2();
            let t = lex_tree(&w, d, field);
            let deaths = assign_deaths(&w, &t, field).unwrap();
            let top = w.max_weight();
            prop_assert!(deaths.iter().all(|c| c.death <= top && c.death >= c.birth));
            let s = LabeledSkeleton::assemble(&t, &deaths).unwrap();
            prop_assert!(s.validate().is_ok());
            let values = critical_values(&w);
            for alpha in &values {
                let q = reduced_complex(&w, *alpha);
                let r = reduced_hopes(&s, *alpha);
                prop_assert!(is_fitting(&r, &q, d, field).unwrap());
                let alive = s.critical().filter(|(_, l)| l.alive_at(*alpha)).count();
                prop_assert_eq!(alive, betti(&q, d as isize, field));
                prop_assert_eq!(s.reduced_weight(*alpha), w.total_weight(&r).unwrap());
            }
            prop_assert_eq!(reduced_hopes(&s, top), reduced_mst(&t, top));
            let pd = persistence_diagram(&w, d, field);
            prop_assert!(diagram_correspondence(&s, &pd, &w).is_ok());
            prop_assert_eq!(LabeledSkeleton::from_json(&s.to_json()).unwrap(), s);
        }
    }
}
