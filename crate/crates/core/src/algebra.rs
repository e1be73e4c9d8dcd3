//! Exact linear algebra over prime fields and the rationals.
//!
//! Matrices are dense and row-major. Every routine dispatches once on the
//! coefficient field and then runs a generic Gauss-Jordan elimination.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};

/// The coefficient field: `GF(p)` for a prime `p`, or `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec(FieldKind);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime(u64),
    Rational,
}

const MAX_PRIME: u64 = 1 << 31;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if p >= MAX_PRIME {
            return invalid(format!("prime {p} is too large (limit 2^31)"));
        }
        Ok(FieldSpec(FieldKind::Prime(p)))
    }

    pub fn rational() -> Self {
        FieldSpec(FieldKind::Rational)
    }

    pub fn gf2() -> Self {
        FieldSpec(FieldKind::Prime(2))
    }

    pub fn gf3() -> Self {
        FieldSpec(FieldKind::Prime(3))
    }

    pub fn kind(&self) -> FieldKind {
        self.0
    }

    /// Characteristic of the field (0 for `Q`).
    pub fn characteristic(&self) -> u64 {
        match self.0 {
            FieldKind::Prime(p) => p,
            FieldKind::Rational => 0,
        }
    }

    /// Accepts `"q"`, `"Q"`, `"rational"` or a prime such as `"2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(Self::rational());
        }
        match t.parse::<u64>() {
            Ok(p) => Self::prime(p),
            Err(_) => invalid(format!("unknown field {text:?}; use a prime or \"q\"")),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            FieldKind::Prime(p) => write!(f, "GF({p})"),
            FieldKind::Rational => write!(f, "Q"),
        }
    }
}

/// A single field element, as exposed to callers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Mod(u64),
    Rat(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Rat(r) => write!(f, "{r}"),
        }
    }
}

pub(crate) trait Field {
    type E: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn from_i64(&self, v: i64) -> Self::E;
    fn to_scalar(&self, a: &Self::E) -> Scalar;

    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp(pub u64);

impl Field for Fp {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        debug_assert!(*a != 0);
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (*a, self.0 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        acc
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Mod(*a)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Qf;

impl Field for Qf {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rat(a.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Data {
    Fp(Vec<u64>),
    Q(Vec<BigRational>),
}

/// Runs `$body` with `$f` bound to the field implementation and `$d` to the
/// typed entry vector of `$m`.
macro_rules! with_field {
    ($m:expr, |$f:ident, $d:ident| $body:expr) => {
        match &$m.data {
            Data::Fp($d) => {
                let $f = Fp($m.field.characteristic());
                $body
            }
            Data::Q($d) => {
                let $f = Qf;
                $body
            }
        }
    };
}

/// Dense matrix over a [`FieldSpec`]. Entries in `GF(p)` are kept in
/// `0..p`; rationals are always in lowest terms.
#[derive(Clone, PartialEq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Data,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self::from_fn(field, rows, cols, |_, _| 0)
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| (i == j) as i64)
    }

    /// Builds a matrix from integer entries, reduced into the field.
    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut entry: impl FnMut(usize, usize) -> i64) -> Self {
        let ints: Vec<i64> = (0..rows * cols).map(|k| entry(k / cols.max(1), k % cols.max(1))).collect();
        Self::from_ints(field, rows, cols, &ints).expect("length matches by construction")
    }

    /// Row-major integer entries.
    pub fn from_ints(field: FieldSpec, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return invalid(format!("expected {} entries, got {}", rows * cols, entries.len()));
        }
        let data = match field.kind() {
            FieldKind::Prime(p) => Data::Fp(entries.iter().map(|&v| Fp(p).from_i64(v)).collect()),
            FieldKind::Rational => Data::Q(entries.iter().map(|&v| Qf.from_i64(v)).collect()),
        };
        Ok(FieldMatrix { rows, cols, field, data })
    }

    /// Row-major rational entries (the field is `Q`).
    pub fn from_rationals(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return invalid(format!("expected {} entries, got {}", rows * cols, entries.len()));
        }
        Ok(FieldMatrix {
            rows,
            cols,
            field: FieldSpec::rational(),
            data: Data::Q(entries),
        })
    }

    fn from_data(field: FieldSpec, rows: usize, cols: usize, data: Data) -> Self {
        FieldMatrix { rows, cols, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        with_field!(self, |f, d| f.to_scalar(&d[i * self.cols + j]))
    }

    pub fn is_zero(&self) -> bool {
        with_field!(self, |f, d| d.iter().all(|x| f.is_zero(x)))
    }

    pub fn transpose(&self) -> FieldMatrix {
        let (r, c) = (self.rows, self.cols);
        let data = with_field!(self, |_f, d| {
            let mut out = Vec::with_capacity(d.len());
            for j in 0..c {
                for i in 0..r {
                    out.push(d[i * c + j].clone());
                }
            }
            wrap_like(d, out)
        });
        Self::from_data(self.field, c, r, data)
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows || self.field != other.field {
            return invalid("matrix product shape or field mismatch");
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let data = match (&self.data, &other.data) {
            (Data::Fp(a), Data::Fp(b)) => Data::Fp(matmul(&Fp(self.field.characteristic()), a, b, n, m, p)),
            (Data::Q(a), Data::Q(b)) => Data::Q(matmul(&Qf, a, b, n, m, p)),
            _ => unreachable!("fields agree"),
        };
        Ok(Self::from_data(self.field, n, p, data))
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> FieldMatrix {
        let c = self.cols;
        let data = with_field!(self, |_f, d| {
            let mut out = Vec::with_capacity(self.rows * cols.len());
            for i in 0..self.rows {
                for &j in cols {
                    out.push(d[i * c + j].clone());
                }
            }
            wrap_like(d, out)
        });
        Self::from_data(self.field, self.rows, cols.len(), data)
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FieldMatrix {
        let c = self.cols;
        let data = with_field!(self, |_f, d| {
            let mut out = Vec::with_capacity(rows.len() * c);
            for &i in rows {
                out.extend_from_slice(&d[i * c..(i + 1) * c]);
            }
            wrap_like(d, out)
        });
        Self::from_data(self.field, rows.len(), c, data)
    }

    /// Side-by-side concatenation `[self | other]`.
    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows != other.rows || self.field != other.field {
            return invalid("hstack needs equal row counts and fields");
        }
        let (a, b) = (self.cols, other.cols);
        let data = match (&self.data, &other.data) {
            (Data::Fp(x), Data::Fp(y)) => Data::Fp(hcat(x, y, self.rows, a, b)),
            (Data::Q(x), Data::Q(y)) => Data::Q(hcat(x, y, self.rows, a, b)),
            _ => unreachable!("fields agree"),
        };
        Ok(Self::from_data(self.field, self.rows, a + b, data))
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        with_field!(self, |f, d| {
            let mut m = d.clone();
            rref(&f, &mut m, self.rows, self.cols).len()
        })
    }

    /// A basis of the null space, one basis vector per column of the result.
    pub fn kernel_basis(&self) -> FieldMatrix {
        let (data, k) = with_field!(self, |f, d| {
            let (vecs, k) = kernel_generic(&f, d, self.rows, self.cols);
            (wrap_like(d, vecs), k)
        });
        // kernel_generic returns row-major vectors; transpose into columns
        Self::from_data(self.field, k, self.cols, data).transpose()
    }

    /// The non-zero rows of the reduced row echelon form: a basis of the row space.
    pub fn row_basis(&self) -> FieldMatrix {
        let c = self.cols;
        let (data, r) = with_field!(self, |f, d| {
            let mut m = d.clone();
            let r = rref(&f, &mut m, self.rows, c).len();
            m.truncate(r * c);
            (wrap_like(d, m), r)
        });
        Self::from_data(self.field, r, c, data)
    }

    /// Places row `i` of `self` at row `map[i]` of a taller zero matrix.
    pub(crate) fn embed_rows(&self, new_rows: usize, map: &[usize]) -> FieldMatrix {
        assert_eq!(map.len(), self.rows);
        let c = self.cols;
        let data = with_field!(self, |f, d| {
            let mut out = vec![f.zero(); new_rows * c];
            for (i, &t) in map.iter().enumerate() {
                out[t * c..(t + 1) * c].clone_from_slice(&d[i * c..(i + 1) * c]);
            }
            wrap_like(d, out)
        });
        Self::from_data(self.field, new_rows, c, data)
    }

    /// The columns that a left-to-right elimination picks as pivots.
    pub fn pivot_columns(&self) -> Vec<usize> {
        with_field!(self, |f, d| {
            let mut m = d.clone();
            rref(&f, &mut m, self.rows, self.cols)
        })
    }
}

fn wrap_like<T: Clone>(_like: &[T], v: Vec<T>) -> Data
where
    Vec<T>: IntoData,
{
    v.into_data()
}

pub(crate) trait IntoData {
    fn into_data(self) -> Data;
}

impl IntoData for Vec<u64> {
    fn into_data(self) -> Data {
        Data::Fp(self)
    }
}

impl IntoData for Vec<BigRational> {
    fn into_data(self) -> Data {
        Data::Q(self)
    }
}

fn hcat<T: Clone>(x: &[T], y: &[T], rows: usize, a: usize, b: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(rows * (a + b));
    for i in 0..rows {
        out.extend_from_slice(&x[i * a..(i + 1) * a]);
        out.extend_from_slice(&y[i * b..(i + 1) * b]);
    }
    out
}

fn matmul<F: Field>(f: &F, a: &[F::E], b: &[F::E], n: usize, m: usize, p: usize) -> Vec<F::E> {
    let mut out = vec![f.zero(); n * p];
    for i in 0..n {
        for k in 0..m {
            let aik = &a[i * m + k];
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..p {
                let t = f.mul(aik, &b[k * p + j]);
                out[i * p + j] = f.add(&out[i * p + j], &t);
            }
        }
    }
    out
}

/// In-place reduced row echelon form. Returns pivot columns in order.
pub(crate) fn rref<F: Field>(f: &F, m: &mut [F::E], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&m[r * cols + c]);
        for j in c..cols {
            m[r * cols + j] = f.mul(&m[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&m[i * cols + c]) {
                continue;
            }
            let factor = m[i * cols + c].clone();
            for j in c..cols {
                let t = f.mul(&factor, &m[r * cols + j]);
                m[i * cols + j] = f.sub(&m[i * cols + j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel vectors stored row-major (`k` vectors of length `cols`).
fn kernel_generic<F: Field>(f: &F, d: &[F::E], rows: usize, cols: usize) -> (Vec<F::E>, usize) {
    let mut m = d.to_vec();
    let pivots = rref(f, &mut m, rows, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&j| !is_pivot[j]).collect();
    let mut out = Vec::with_capacity(free.len() * cols);
    for &j in &free {
        let mut v = vec![f.zero(); cols];
        v[j] = f.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(&m[r * cols + j]);
        }
        out.extend(v);
    }
    (out, free.len())
}

#[derive(Clone)]
struct Echelon<F: Field> {
    field: F,
    len: usize,
    by_pivot: Vec<Option<Vec<F::E>>>,
    rank: usize,
}

impl<F: Field> Echelon<F> {
    fn new(field: F, len: usize) -> Self {
        Echelon {
            field,
            len,
            by_pivot: vec![None; len],
            rank: 0,
        }
    }

    fn reduce(&self, v: &mut [F::E]) -> Option<usize> {
        let f = &self.field;
        for i in 0..self.len {
            if f.is_zero(&v[i]) {
                continue;
            }
            match &self.by_pivot[i] {
                Some(b) => {
                    let factor = v[i].clone();
                    for j in i..self.len {
                        if !f.is_zero(&b[j]) {
                            let t = f.mul(&factor, &b[j]);
                            v[j] = f.sub(&v[j], &t);
                        }
                    }
                }
                None => return Some(i),
            }
        }
        None
    }

    fn insert(&mut self, mut v: Vec<F::E>) -> bool {
        let Some(p) = self.reduce(&mut v) else {
            return false;
        };
        let inv = self.field.inv(&v[p]);
        for x in v.iter_mut().skip(p) {
            *x = self.field.mul(x, &inv);
        }
        self.by_pivot[p] = Some(v);
        self.rank += 1;
        true
    }

    fn contains(&self, mut v: Vec<F::E>) -> bool {
        self.reduce(&mut v).is_none()
    }
}

#[derive(Clone)]
enum EchelonAny {
    Fp(Echelon<Fp>),
    Q(Echelon<Qf>),
}

/// A growing set of linearly independent vectors in `F^len`.
///
/// Vectors are inserted one at a time; an insertion succeeds exactly when
/// the vector is not in the span of those already accepted.
#[derive(Clone)]
pub struct IncrementalBasis {
    inner: EchelonAny,
}

impl IncrementalBasis {
    pub fn new(field: FieldSpec, len: usize) -> Self {
        let inner = match field.kind() {
            FieldKind::Prime(p) => EchelonAny::Fp(Echelon::new(Fp(p), len)),
            FieldKind::Rational => EchelonAny::Q(Echelon::new(Qf, len)),
        };
        IncrementalBasis { inner }
    }

    pub fn len(&self) -> usize {
        match &self.inner {
            EchelonAny::Fp(e) => e.len,
            EchelonAny::Q(e) => e.len,
        }
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            EchelonAny::Fp(e) => e.rank,
            EchelonAny::Q(e) => e.rank,
        }
    }

    /// Inserts a sparse integer vector given as `(index, value)` pairs.
    pub fn insert_sparse(&mut self, entries: &[(usize, i64)]) -> bool {
        match &mut self.inner {
            EchelonAny::Fp(e) => {
                let v = sparse_to_dense(&e.field, e.len, entries);
                e.insert(v)
            }
            EchelonAny::Q(e) => {
                let v = sparse_to_dense(&e.field, e.len, entries);
                e.insert(v)
            }
        }
    }

    /// Whether the sparse integer vector lies in the current span.
    pub fn spans_sparse(&self, entries: &[(usize, i64)]) -> bool {
        match &self.inner {
            EchelonAny::Fp(e) => e.contains(sparse_to_dense(&e.field, e.len, entries)),
            EchelonAny::Q(e) => e.contains(sparse_to_dense(&e.field, e.len, entries)),
        }
    }
}

fn sparse_to_dense<F: Field>(f: &F, len: usize, entries: &[(usize, i64)]) -> Vec<F::E> {
    let mut v = vec![f.zero(); len];
    for &(i, x) in entries {
        let t = f.from_i64(x);
        v[i] = f.add(&v[i], &t);
    }
    v
}

/// Greedy selection of a maximum-weight column basis.
///
/// `c` must have independent rows. Columns are scanned by descending weight
/// (lower index first among equal weights) and kept when they raise the
/// rank of the selection. The result has `c.rows()` indices, sorted
/// ascending, and `c` restricted to them is invertible.
pub fn leading_sets(c: &FieldMatrix, candidate_weights: &[f64]) -> Result<Vec<usize>> {
    if candidate_weights.len() != c.cols() {
        return invalid(format!(
            "{} weights for {} columns",
            candidate_weights.len(),
            c.cols()
        ));
    }
    if c.rank() != c.rows() {
        return Err(Error::InvalidArgument("rows of the coefficient matrix are dependent".into()));
    }
    let mut order: Vec<usize> = (0..c.cols()).collect();
    order.sort_by(|&a, &b| {
        candidate_weights[b]
            .total_cmp(&candidate_weights[a])
            .then(a.cmp(&b))
    });
    let chosen = with_field!(c, |f, d| greedy_columns(f, d, c.rows(), c.cols(), &order));
    let mut chosen = chosen;
    chosen.sort_unstable();
    Ok(chosen)
}

fn greedy_columns<F: Field + Copy>(f: F, d: &[F::E], rows: usize, cols: usize, order: &[usize]) -> Vec<usize> {
    let mut basis = Echelon::new(f, rows);
    let mut chosen = Vec::with_capacity(rows);
    for &j in order {
        if chosen.len() == rows {
            break;
        }
        let col: Vec<F::E> = (0..rows).map(|i| d[i * cols + j].clone()).collect();
        if basis.insert(col) {
            chosen.push(j);
        }
    }
    chosen
}

/// Whether `c` restricted to `cols` is square and invertible.
pub fn is_leading_set(c: &FieldMatrix, cols: &[usize]) -> bool {
    cols.len() == c.rows() && c.select_columns(cols).rank() == c.rows()
}
