//! Exhaustive ground truth for small instances: minimal fitting forests and
//! subcomplexes by branch and bound over `d`-face subsets, and every
//! possible assignment of death times.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::algebra::{is_leading_set, FieldSpec, IncrementalBasis};
use crate::complex::{is_spanning, Face, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::filtration::{critical_values, reduced_complex, sum_sorted, WeightedComplex};
use crate::homology::{betti, boundary_column, boundary_matrix, fmt_real, is_fitting, is_forest, relative_kernel};
use crate::skeleton::{critical_faces, reduced_hopes, CriticalFace, LabeledSkeleton};
use crate::spanning::{reduced_mst, SpanningTree};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    pub max_d_faces: usize,
    pub timeout: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_d_faces: 22,
            timeout: None,
        }
    }
}

impl SearchBudget {
    fn check(&self, q: &SimplicialComplex, d: usize) -> Result<()> {
        let k = q.count(d as isize);
        if k > self.max_d_faces {
            return Err(Error::ResourceLimit(format!(
                "{k} candidate {d}-faces exceed the budget of {}",
                self.max_d_faces
            )));
        }
        Ok(())
    }
}

/// `skeleton(Q, d-1) ∪ T` for every subset `T` of the `d`-faces of `Q`.
pub fn enumerate_spanning_subcomplexes(
    q: &SimplicialComplex,
    d: usize,
    budget: &SearchBudget,
) -> Result<impl Iterator<Item = SimplicialComplex>> {
    budget.check(q, d)?;
    let base = q.skeleton(d as isize - 1);
    let top: Vec<Face> = q.faces(d as isize).to_vec();
    Ok((0u64..1 << top.len()).map(move |mask| {
        let chosen = top.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, f)| f.clone());
        base.with_faces(chosen).expect("faces of a closed complex")
    }))
}

/// Optimum of an exhaustive search with one witness.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub weight: f64,
    pub witness: SimplicialComplex,
}

#[derive(Clone, Copy, PartialEq)]
enum Target {
    Forest,
    Subcomplex,
}

struct Search<'a> {
    w: &'a WeightedComplex,
    q: &'a SimplicialComplex,
    base: SimplicialComplex,
    d: usize,
    field: FieldSpec,
    target: Target,
    /// Candidate faces sorted by weight, with their boundary columns.
    faces: Vec<(Face, f64, Vec<(usize, i64)>)>,
    base_weight: f64,
    size: usize,
    rank: usize,
    best: Option<OracleResult>,
    deadline: Option<Instant>,
}

impl Search<'_> {
    fn accept(&self, chosen: &[usize]) -> Result<bool> {
        let s = self.base.with_faces(chosen.iter().map(|&i| self.faces[i].0.clone()))?;
        let ok = match self.target {
            Target::Forest => {
                is_forest(&s, self.d, self.field)?
                    && is_spanning(&s, self.q, self.d)?
                    && (self.d == 0 || is_fitting(&s, self.q, self.d - 1, self.field)?)
            }
            Target::Subcomplex => is_spanning(&s, self.q, self.d)? && is_fitting(&s, self.q, self.d, self.field)?,
        };
        Ok(ok)
    }

    fn dfs(&mut self, next: usize, chosen: &mut Vec<usize>, weight: f64, basis: &IncrementalBasis) -> Result<()> {
        if let Some(t) = self.deadline {
            if Instant::now() > t {
                return Err(Error::ResourceLimit("oracle search timed out".into()));
            }
        }
        let missing = self.size - chosen.len();
        let bound = self.base_weight + weight + self.faces[next..].iter().take(missing).map(|f| f.1).sum::<f64>();
        if next + missing > self.faces.len() || basis.rank() + (self.faces.len() - next) < self.rank {
            return Ok(());
        }
        if self.best.as_ref().is_some_and(|b| bound >= b.weight) {
            return Ok(());
        }
        if missing == 0 {
            if basis.rank() == self.rank && self.accept(chosen)? {
                let s = self.base.with_faces(chosen.iter().map(|&i| self.faces[i].0.clone()))?;
                let total = self.w.total_weight(&s)?;
                if self.best.as_ref().is_none_or(|b| total < b.weight) {
                    self.best = Some(OracleResult { weight: total, witness: s });
                }
            }
            return Ok(());
        }
        let mut with = basis.clone();
        let independent = with.insert_sparse(&self.faces[next].2);
        if independent || self.target == Target::Subcomplex {
            chosen.push(next);
            self.dfs(next + 1, chosen, weight + self.faces[next].1, &with)?;
            chosen.pop();
        }
        self.dfs(next + 1, chosen, weight, basis)
    }
}

fn search(
    w: &WeightedComplex,
    q: &SimplicialComplex,
    d: usize,
    field: FieldSpec,
    budget: &SearchBudget,
    target: Target,
) -> Result<OracleResult> {
    if !q.is_subcomplex_of(w.complex()) {
        return invalid("Q is not a subcomplex of the weighted complex");
    }
    budget.check(q, d)?;
    let k = d as isize;
    let mut faces: Vec<(Face, f64, Vec<(usize, i64)>)> = q
        .faces(k)
        .iter()
        .map(|f| (f.clone(), w.weight(f).unwrap(), if d == 0 { Vec::new() } else { boundary_column(q, f) }))
        .collect();
    faces.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let rank = if d == 0 || faces.is_empty() { 0 } else { boundary_matrix(q, k, field).rank() };
    let size = match target {
        Target::Forest => rank,
        Target::Subcomplex => rank + betti(q, k, field),
    };
    let base = q.skeleton(k - 1);
    let mut s = Search {
        w,
        q,
        base_weight: w.total_weight(&base)?,
        base,
        d,
        field,
        target,
        faces,
        size,
        rank,
        best: None,
        deadline: budget.timeout.map(|t| Instant::now() + t),
    };
    let basis = IncrementalBasis::new(field, q.count(k - 1));
    s.dfs(0, &mut Vec::new(), 0.0, &basis)?;
    s.best.ok_or_else(|| Error::Infeasible("no subcomplex satisfies the constraints".into()))
}

/// Lightest `d`-spanning `d`-forest of `q` that is `(d-1)`-fitting in `q`.
pub fn min_fitting_forest(
    w: &WeightedComplex,
    q: &SimplicialComplex,
    d: usize,
    field: FieldSpec,
    budget: &SearchBudget,
) -> Result<OracleResult> {
    search(w, q, d, field, budget, Target::Forest)
}

/// Lightest `d`-spanning `d`-subcomplex of `q` that is `d`-fitting in `q`.
pub fn min_fitting_subcomplex(
    w: &WeightedComplex,
    q: &SimplicialComplex,
    d: usize,
    field: FieldSpec,
    budget: &SearchBudget,
) -> Result<OracleResult> {
    search(w, q, d, field, budget, Target::Subcomplex)
}

/// Comparison of the constructed complexes with the oracle at one scale.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyRow {
    pub alpha: f64,
    pub mst_weight: f64,
    pub oracle_forest_weight: f64,
    pub hopes_weight: f64,
    pub oracle_subcomplex_weight: f64,
    pub fitting: bool,
}

impl VerifyRow {
    pub fn ok(&self) -> bool {
        self.fitting && self.mst_weight == self.oracle_forest_weight && self.hopes_weight == self.oracle_subcomplex_weight
    }
}

pub fn format_table(rows: &[VerifyRow]) -> String {
    let mut out = String::from("alpha,mst_weight,oracle_forest_weight,hopes_weight,oracle_subcomplex_weight,status\n");
    for r in rows {
        let status = if r.ok() {
            "ok"
        } else if !r.fitting {
            "not-fitting"
        } else {
            "mismatch"
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{status}",
            fmt_real(r.alpha),
            fmt_real(r.mst_weight),
            fmt_real(r.oracle_forest_weight),
            fmt_real(r.hopes_weight),
            fmt_real(r.oracle_subcomplex_weight)
        );
    }
    out
}

/// Both optimality checks at every given scale.
pub fn verify_scales(
    w: &WeightedComplex,
    t: &SpanningTree,
    h: &LabeledSkeleton,
    field: FieldSpec,
    alphas: &[f64],
    budget: &SearchBudget,
) -> Result<Vec<VerifyRow>> {
    let d = t.d();
    alphas
        .iter()
        .map(|&alpha| {
            let q = reduced_complex(w, alpha);
            let forest = min_fitting_forest(w, &q, d, field, budget)?;
            let sub = min_fitting_subcomplex(w, &q, d, field, budget)?;
            let r = reduced_hopes(h, alpha);
            Ok(VerifyRow {
                alpha,
                mst_weight: w.total_weight(&reduced_mst(t, alpha))?,
                oracle_forest_weight: forest.weight,
                hopes_weight: w.total_weight(&r)?,
                oracle_subcomplex_weight: sub.weight,
                fitting: r.is_subcomplex_of(&q) && is_fitting(&r, &q, d, field)?,
            })
        })
        .collect()
}

/// Critical values and the midpoints between consecutive ones.
pub fn scales_with_midpoints(w: &WeightedComplex) -> Vec<f64> {
    let values = critical_values(w);
    let mut out = Vec::with_capacity(2 * values.len());
    for (i, &a) in values.iter().enumerate() {
        out.push(a);
        if let Some(&b) = values.get(i + 1) {
            out.push(0.5 * (a + b));
        }
    }
    out
}

/// One complete run of the death sweep with a particular choice of dying
/// faces at every scale.
#[derive(Clone, Debug, PartialEq)]
pub struct DeathAssignment {
    pub criticals: Vec<CriticalFace>,
    /// Every choice had maximal total weight.
    pub elder: bool,
}

/// Every assignment of death times reachable by choosing any leading set at
/// every scale, visiting every critical value.
pub fn all_death_assignments(
    w: &WeightedComplex,
    t: &SpanningTree,
    field: FieldSpec,
    limit: usize,
) -> Result<Vec<DeathAssignment>> {
    let crit = critical_faces(w, t);
    let alphas = critical_values(w);
    let mut out = Vec::new();
    let mut deaths = vec![None; crit.len()];
    branch(w, t, field, &crit, &alphas, 0, &mut deaths, true, limit, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn branch(
    w: &WeightedComplex,
    t: &SpanningTree,
    field: FieldSpec,
    crit: &[(Face, f64)],
    alphas: &[f64],
    step: usize,
    deaths: &mut Vec<Option<f64>>,
    elder: bool,
    limit: usize,
    out: &mut Vec<DeathAssignment>,
) -> Result<()> {
    if out.len() >= limit {
        return Err(Error::ResourceLimit(format!("more than {limit} death assignments")));
    }
    let d = t.d();
    let Some(&alpha) = alphas.get(step) else {
        let last = if d == 0 { f64::INFINITY } else { w.max_weight() };
        out.push(DeathAssignment {
            criticals: crit
                .iter()
                .zip(deaths.iter())
                .map(|((f, b), dd)| CriticalFace {
                    face: f.clone(),
                    birth: *b,
                    death: dd.unwrap_or(last),
                })
                .collect(),
            elder,
        });
        return Ok(());
    };
    let living: Vec<usize> = (0..crit.len()).filter(|&i| deaths[i].is_none() && crit[i].1 <= alpha).collect();
    let faces: Vec<Face> = living.iter().map(|&i| crit[i].0.clone()).collect();
    let kernel = if faces.is_empty() {
        None
    } else {
        Some(relative_kernel(&faces, &reduced_mst(t, alpha), &reduced_complex(w, alpha), d, field)?.transpose())
    };
    let Some(c) = kernel.filter(|c| c.rows() > 0) else {
        return branch(w, t, field, crit, alphas, step + 1, deaths, elder, limit, out);
    };
    let r = c.rows();
    let weight_of = |set: &[usize]| sum_sorted(set.iter().map(|&j| crit[living[j]].1).collect());
    let sets: Vec<Vec<usize>> = crate::complex::k_subsets(faces.len(), r)
        .into_iter()
        .map(|f| f.vertices().to_vec())
        .filter(|set| is_leading_set(&c, set))
        .collect();
    let best = sets.iter().map(|s| weight_of(s)).fold(f64::NEG_INFINITY, f64::max);
    for set in sets {
        let max = weight_of(&set) == best;
        for &j in &set {
            deaths[living[j]] = Some(alpha);
        }
        branch(w, t, field, crit, alphas, step + 1, deaths, elder && max, limit, out)?;
        for &j in &set {
            deaths[living[j]] = None;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::full_simplex;
    use crate::filtration::{vr_weights, PointCloud, DEFAULT_EPSILON};
    use crate::homology::is_tree;
    use crate::skeleton::{assign_deaths, build_hopes};
    use crate::spanning::{minimal_spanning_tree, TieOrder};

    fn square() -> WeightedComplex {
        let c = PointCloud::from_points(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        vr_weights(&c, 2, DEFAULT_EPSILON).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let b = SearchBudget::default();
        let t = full_simplex(4).unwrap();
        assert_eq!(enumerate_spanning_subcomplexes(&t.skeleton(2), 2, &b).unwrap().count(), 16);
        let path = SimplicialComplex::from_faces(4, [0, 1, 2].map(|i| Face::new(vec![i, i + 1]).unwrap())).unwrap();
        assert_eq!(enumerate_spanning_subcomplexes(&path, 1, &b).unwrap().count(), 8);
        let subs: Vec<_> = enumerate_spanning_subcomplexes(&path, 2, &b).unwrap().collect();
        assert_eq!(subs, vec![path.clone()]);
        let tight = SearchBudget {
            max_d_faces: 2,
            ..b
        };
        assert!(matches!(enumerate_spanning_subcomplexes(&path, 1, &tight), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn square_optima() {
        let w = square();
        let b = SearchBudget::default();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for field in [FieldSpec::gf2(), FieldSpec::rational()] {
            let q = reduced_complex(&w, h);
            let forest = min_fitting_forest(&w, &q, 1, field, &b).unwrap();
            assert_eq!(forest.weight, 1.5);
            assert_eq!(forest.witness.count(1), 3);
            assert!(is_tree(&forest.witness, 1, field).unwrap());
            let q = reduced_complex(&w, 0.6);
            let sub = min_fitting_subcomplex(&w, &q, 1, field, &b).unwrap();
            assert_eq!(sub.weight, 2.0);
            let s = build_hopes(&w, 1, field, &TieOrder::Lexicographic).unwrap();
            let q = reduced_complex(&w, 1.0);
            let sub = min_fitting_subcomplex(&w, &q, 1, field, &b).unwrap();
            assert_eq!(sub.weight, s.reduced_weight(1.0));
        }
    }

    #[test]
    fn equilateral_and_forced_cases() {
        let s3 = 3f64.sqrt() / 2.0;
        let c = PointCloud::from_points(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, s3]]).unwrap();
        let w = vr_weights(&c, 2, DEFAULT_EPSILON).unwrap();
        let b = SearchBudget::default();
        let q = reduced_complex(&w, w.max_weight()).skeleton(1);
        let forest = min_fitting_forest(&w, &q, 1, FieldSpec::gf2(), &b).unwrap();
        assert!((forest.weight - 1.0).abs() < 1e-12);
        assert_eq!(forest.witness.count(1), 2);
        // a tree: everything is forced
        let path = SimplicialComplex::from_faces(3, [Face::new(vec![0, 1]).unwrap(), Face::new(vec![1, 2]).unwrap()]).unwrap();
        let r = min_fitting_forest(&w, &path, 1, FieldSpec::gf2(), &b).unwrap();
        assert_eq!(r.witness, path);
        assert!((r.weight - 1.0).abs() < 1e-12);
        let r = min_fitting_subcomplex(&w, &path, 1, FieldSpec::gf2(), &b).unwrap();
        assert_eq!(r.witness, path);
    }

    #[test]
    fn search_matches_plain_enumeration() {
        let w = square();
        let b = SearchBudget::default();
        let field = FieldSpec::gf3();
        for alpha in scales_with_midpoints(&w) {
            let q = reduced_complex(&w, alpha);
            let mut best_forest = f64::INFINITY;
            let mut best_sub = f64::INFINITY;
            for s in enumerate_spanning_subcomplexes(&q, 1, &b).unwrap() {
                let wt = w.total_weight(&s).unwrap();
                if is_forest(&s, 1, field).unwrap() && is_fitting(&s, &q, 0, field).unwrap() {
                    best_forest = best_forest.min(wt);
                }
                if is_fitting(&s, &q, 1, field).unwrap() {
                    best_sub = best_sub.min(wt);
                }
            }
            assert_eq!(min_fitting_forest(&w, &q, 1, field, &b).unwrap().weight, best_forest);
            assert_eq!(min_fitting_subcomplex(&w, &q, 1, field, &b).unwrap().weight, best_sub);
        }
    }

    #[test]
    fn verify_square() {
        let w = square();
        let field = FieldSpec::gf2();
        let t = minimal_spanning_tree(&w, 1, field, &TieOrder::Lexicographic).unwrap();
        let h = build_hopes(&w, 1, field, &TieOrder::Lexicographic).unwrap();
        let rows = verify_scales(&w, &t, &h, field, &scales_with_midpoints(&w), &SearchBudget::default()).unwrap();
        assert!(rows.iter().all(VerifyRow::ok));
        let table = format_table(&rows);
        assert!(table.starts_with("alpha,mst_weight,oracle_forest_weight,hopes_weight,oracle_subcomplex_weight,status\n"));
        assert_eq!(table.lines().count(), rows.len() + 1);
    }

    #[test]
    fn elder_assignment_is_enumerated() {
        let w = square();
        let field = FieldSpec::gf2();
        let t = minimal_spanning_tree(&w, 1, field, &TieOrder::Lexicographic).unwrap();
        let all = all_death_assignments(&w, &t, field, 1000).unwrap();
        let ours = assign_deaths(&w, &t, field).unwrap();
        assert!(all.iter().any(|a| a.elder && a.criticals == ours));
        assert!(all_death_assignments(&w, &t, field, 0).is_err());
    }
}
