//! Simplicial homology over a field: boundary matrices, Betti numbers,
//! subcomplex classification, relative kernels and persistence diagrams.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::algebra::{Field, FieldKind, FieldMatrix, FieldSpec, Fp, Qf};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::filtration::WeightedComplex;

/// Signed boundary of `face` as `(row, ±1)` pairs over `x.faces(dim - 1)`.
/// The sign of a facet is `(-1)^i` for the omitted position `i`.
pub(crate) fn boundary_column(x: &SimplicialComplex, face: &Face) -> Vec<(usize, i64)> {
    let mut col: Vec<(usize, i64)> = face
        .facets()
        .map(|(i, g)| {
            let row = x.index_of(&g).expect("complex is closed");
            (row, if i % 2 == 0 { 1 } else { -1 })
        })
        .collect();
    col.sort_unstable();
    col
}

/// Matrix of `∂_k : C_k(X) → C_{k-1}(X)` in the canonical bases.
pub fn boundary_matrix(x: &SimplicialComplex, k: isize, field: FieldSpec) -> FieldMatrix {
    let cols = x.faces(k);
    let rows = x.count(k - 1);
    let mut ints = vec![0i64; rows * cols.len()];
    if k >= 1 {
        for (j, f) in cols.iter().enumerate() {
            for (i, s) in boundary_column(x, f) {
                ints[i * cols.len() + j] = s;
            }
        }
    }
    FieldMatrix::from_ints(field, rows, cols.len(), &ints).expect("sizes match")
}

fn boundary_rank(x: &SimplicialComplex, k: isize, field: FieldSpec) -> usize {
    if k < 1 || x.count(k) == 0 {
        return 0;
    }
    boundary_matrix(x, k, field).rank()
}

/// `dim C_k − rank ∂_k − rank ∂_{k+1}`; zero for negative `k`.
pub fn betti(x: &SimplicialComplex, k: isize, field: FieldSpec) -> usize {
    if k < 0 {
        return 0;
    }
    x.count(k) - boundary_rank(x, k, field) - boundary_rank(x, k + 1, field)
}

/// All Betti numbers `β_0 ..= β_dim`.
pub fn betti_numbers(x: &SimplicialComplex, field: FieldSpec) -> Vec<usize> {
    (0..=x.dim()).map(|k| betti(x, k, field)).collect()
}

fn check_dim(s: &SimplicialComplex, d: usize) -> Result<()> {
    if s.dim() > d as isize {
        return invalid(format!("complex of dimension {} is not a {d}-complex", s.dim()));
    }
    Ok(())
}

/// `H_d(S) = 0`.
pub fn is_forest(s: &SimplicialComplex, d: usize, field: FieldSpec) -> Result<bool> {
    check_dim(s, d)?;
    Ok(betti(s, d as isize, field) == 0)
}

/// A forest whose `(d-1)`-homology is that of a point.
pub fn is_tree(s: &SimplicialComplex, d: usize, field: FieldSpec) -> Result<bool> {
    if !is_forest(s, d, field)? {
        return Ok(false);
    }
    Ok(match d {
        0 => s.is_empty(),
        1 => betti(s, 0, field) == 1,
        _ => betti(s, d as isize - 1, field) == 0,
    })
}

/// Basis of `Z_k(S)`, as columns over `S.faces(k)`.
pub fn cycle_basis(s: &SimplicialComplex, k: isize, field: FieldSpec) -> FieldMatrix {
    if k <= 0 {
        return FieldMatrix::identity(field, s.count(k));
    }
    boundary_matrix(s, k, field).kernel_basis()
}

/// Rank of `H_i(S) → H_i(X)` induced by inclusion.
///
/// Cycles of `S` are written in the chain basis of `X` and reduced modulo
/// the boundaries of `X`.
pub fn induced_rank(s: &SimplicialComplex, x: &SimplicialComplex, i: isize, field: FieldSpec) -> Result<usize> {
    if !s.is_subcomplex_of(x) {
        return invalid("induced map needs S to be a subcomplex of X");
    }
    if i < 0 || s.count(i) == 0 {
        return Ok(0);
    }
    let z = cycle_basis(s, i, field);
    let map: Vec<usize> = s.faces(i).iter().map(|f| x.index_of(f).unwrap()).collect();
    let z_in_x = z.embed_rows(x.count(i), &map);
    let b = boundary_matrix(x, i + 1, field);
    let rank_b = if b.cols() == 0 { 0 } else { b.rank() };
    Ok(b.hstack(&z_in_x)?.rank() - rank_b)
}

/// `H_i(S) → H_i(X)` is an isomorphism for every `i ≤ k`.
pub fn is_fitting(s: &SimplicialComplex, x: &SimplicialComplex, k: usize, field: FieldSpec) -> Result<bool> {
    if !s.is_subcomplex_of(x) {
        return invalid("fitting test needs S to be a subcomplex of X");
    }
    for i in 0..=k as isize {
        let bx = betti(x, i, field);
        if betti(s, i, field) != bx || induced_rank(s, x, i, field)? != bx {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Drops `β_d(S)` leading `d`-faces of a cycle basis, leaving a `d`-spanning
/// `d`-forest with the same `(d-1)`-homology as `S`.
pub fn extract_fitting_forest(s: &SimplicialComplex, d: usize, field: FieldSpec) -> Result<SimplicialComplex> {
    check_dim(s, d)?;
    let k = d as isize;
    if d == 0 {
        // every vertex is a 0-cycle; the only 0-forest is empty
        return Ok(SimplicialComplex::empty(s.vertex_count()));
    }
    let z = cycle_basis(s, k, field);
    if z.cols() == 0 {
        return Ok(s.clone());
    }
    let leading = z.transpose().pivot_columns();
    let drop: Vec<&Face> = leading.iter().map(|&j| &s.faces(k)[j]).collect();
    Ok(s.retain(|f| f.dim() != d || !drop.contains(&f)))
}

/// Kernel of `H_d(T ∪ crit, T) → H_d(Q, T)` in the coordinates of `crit`.
///
/// The columns of the result (an `s × r` matrix) are a basis of the
/// coefficient vectors `c` with `Σ c_i K_i` a boundary of `Q` modulo
/// `C_d(T)`. Chains of `T` are quotiented out by dropping their rows.
pub fn relative_kernel(
    crit: &[Face],
    t: &SimplicialComplex,
    q: &SimplicialComplex,
    d: usize,
    field: FieldSpec,
) -> Result<FieldMatrix> {
    let k = d as isize;
    if !t.is_subcomplex_of(q) {
        return invalid("relative kernel needs T ⊆ Q");
    }
    for c in crit {
        if c.dim() != d || !q.contains(c) || t.contains(c) {
            return invalid(format!("{c} is not a {d}-face of Q outside T"));
        }
        if c.facets().any(|(_, g)| !t.contains(&g)) {
            return invalid(format!("boundary of {c} is not contained in T"));
        }
    }
    let s = crit.len();
    if s == 0 {
        return Ok(FieldMatrix::zeros(field, 0, 0));
    }
    let rows: Vec<usize> = (0..q.count(k)).filter(|&i| !t.contains(&q.faces(k)[i])).collect();
    let row_of: HashMap<&Face, usize> = rows.iter().enumerate().map(|(r, &i)| (&q.faces(k)[i], r)).collect();
    let bd = boundary_matrix(q, k + 1, field).select_rows(&rows);
    let ind = FieldMatrix::from_fn(field, rows.len(), s, |r, j| (row_of[&crit[j]] == r) as i64);
    let nb = bd.cols();
    let ker = bd.hstack(&ind)?.kernel_basis();
    let coeff_rows: Vec<usize> = (nb..nb + s).collect();
    let projected = ker.select_rows(&coeff_rows);
    Ok(projected.transpose().row_basis().transpose())
}

/// A point `(birth, death)` of a persistence diagram; `death` may be `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dot {
    pub birth: f64,
    pub death: f64,
}

impl Dot {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    pub(crate) fn cmp_total(&self, other: &Dot) -> Ordering {
        self.birth
            .total_cmp(&other.birth)
            .then(self.death.total_cmp(&other.death))
    }
}

/// Multiset of dots in one homology dimension, sorted by `(birth, death)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceDiagram {
    pub dim: usize,
    pub dots: Vec<Dot>,
}

pub(crate) fn fmt_real(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

pub(crate) fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    t.parse::<f64>()
        .map_err(|_| Error::InvalidArgument(format!("{s:?} is not a number")))
}

impl PersistenceDiagram {
    pub fn new(dim: usize, mut dots: Vec<Dot>) -> Self {
        dots.sort_by(Dot::cmp_total);
        PersistenceDiagram { dim, dots }
    }

    /// Number of dots alive at `alpha`, i.e. with `birth ≤ alpha < death`.
    pub fn rank_at(&self, alpha: f64) -> usize {
        self.dots.iter().filter(|d| d.birth <= alpha && alpha < d.death).count()
    }

    /// `dim,birth,death` rows with a header; `inf` marks essential classes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for d in &self.dots {
            let _ = writeln!(out, "{},{},{}", self.dim, fmt_real(d.birth), fmt_real(d.death));
        }
        out
    }

    /// Whitespace separated `birth death` lines for plotting tools.
    pub fn to_dat(&self) -> String {
        let mut out = format!("# dim {} : birth death\n", self.dim);
        for d in &self.dots {
            let _ = writeln!(out, "{} {}", fmt_real(d.birth), fmt_real(d.death));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut dim = None;
        let mut dots = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != 3 {
                return invalid("diagram rows need three fields");
            }
            let k: usize = rec[0]
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad dimension {:?}", &rec[0])))?;
            if *dim.get_or_insert(k) != k {
                return invalid("diagram CSV mixes dimensions");
            }
            dots.push(Dot {
                birth: parse_real(&rec[1])?,
                death: parse_real(&rec[2])?,
            });
        }
        Ok(Self::new(dim.unwrap_or(0), dots))
    }
}

type SparseCol<E> = Vec<(usize, E)>;

fn sub_scaled<F: Field>(f: &F, a: &SparseCol<F::E>, factor: &F::E, b: &SparseCol<F::E>) -> SparseCol<F::E> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map(|e| e.0);
        let kb = b.get(j).map(|e| e.0);
        match (ka, kb) {
            (Some(x), Some(y)) if x == y => {
                let v = f.sub(&a[i].1, &f.mul(factor, &b[j].1));
                if !f.is_zero(&v) {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i].clone());
                i += 1;
            }
            _ => {
                let kb = kb.unwrap();
                out.push((kb, f.neg(&f.mul(factor, &b[j].1))));
                j += 1;
            }
        }
    }
    out
}

/// Standard column reduction; returns `low row -> column` for paired columns
/// and the set of columns that reduced to zero.
fn reduce_columns<F: Field>(f: &F, cols: &mut [SparseCol<F::E>], order: &[usize]) -> (HashMap<usize, usize>, Vec<bool>) {
    let mut pivot_of: HashMap<usize, usize> = HashMap::new();
    let mut zero = vec![false; cols.len()];
    for &j in order {
        while let Some(&(low, _)) = cols[j].last() {
            let Some(&k) = pivot_of.get(&low) else { break };
            let factor = f.mul(&cols[j].last().unwrap().1, &f.inv(&cols[k].last().unwrap().1));
            let reduced = sub_scaled(f, &cols[j], &factor, &cols[k]);
            cols[j] = reduced;
        }
        match cols[j].last() {
            Some(&(low, _)) => {
                pivot_of.insert(low, j);
            }
            None => zero[j] = true,
        }
    }
    (pivot_of, zero)
}

/// Persistence diagram of the sublevel filtration in dimension `d`.
///
/// Faces are totally ordered by `(weight, dimension, lexicographic)`;
/// zero-persistence dots are dropped.
pub fn persistence_diagram(w: &WeightedComplex, d: usize, field: FieldSpec) -> PersistenceDiagram {
    match field.kind() {
        FieldKind::Prime(p) => persistence_generic(&Fp(p), w, d),
        FieldKind::Rational => persistence_generic(&Qf, w, d),
    }
}

fn persistence_generic<F: Field>(f: &F, w: &WeightedComplex, d: usize) -> PersistenceDiagram {
    let x = w.complex();
    let top = (d as isize + 1).min(x.dim());
    let lo = (d as isize - 1).max(0);
    // filtration order over dimensions lo..=top
    let mut entries: Vec<(f64, isize, usize)> = Vec::new();
    for k in lo..=top {
        for (i, wt) in w.weights(k).iter().enumerate() {
            entries.push((*wt, k, i));
        }
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut pos: HashMap<(isize, usize), usize> = HashMap::with_capacity(entries.len());
    for (p, &(_, k, i)) in entries.iter().enumerate() {
        pos.insert((k, i), p);
    }
    let mut cols: Vec<SparseCol<F::E>> = entries
        .iter()
        .map(|&(_, k, i)| {
            if k == lo || k < 1 {
                return Vec::new();
            }
            let face = &x.faces(k)[i];
            let mut col: Vec<(usize, F::E)> = boundary_column(x, face)
                .into_iter()
                .map(|(r, s)| (pos[&(k - 1, r)], f.from_i64(s)))
                .collect();
            col.sort_by_key(|e| e.0);
            col
        })
        .collect();
    let order: Vec<usize> = (0..entries.len()).filter(|&p| entries[p].1 >= d as isize).collect();
    let (pivot_of, zero) = reduce_columns(f, &mut cols, &order);
    let mut by_col: HashMap<usize, usize> = HashMap::new();
    for (&low, &j) in &pivot_of {
        by_col.insert(low, j);
    }
    let mut dots = Vec::new();
    for p in 0..entries.len() {
        let (birth, k, _) = entries[p];
        if k != d as isize || !(zero[p] || d == 0) {
            continue;
        }
        let death = match by_col.get(&p) {
            Some(&j) => entries[j].0,
            None => f64::INFINITY,
        };
        if death > birth {
            dots.push(Dot { birth, death });
        }
    }
    PersistenceDiagram::new(d, dots)
}
