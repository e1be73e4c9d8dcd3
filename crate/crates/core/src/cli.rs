//! The `hopes` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::FieldSpec;
use crate::error::{invalid, Error, Result};
use crate::filtration::{
    cech_weights, complete_to_simplex, critical_values, random_weighted_simplex, vr_weights, PointCloud,
    WeightedComplex, DEFAULT_EPSILON, DEFAULT_MARGIN,
};
use crate::homology::persistence_diagram;
use crate::oracle::{format_table, scales_with_midpoints, verify_scales, SearchBudget, VerifyRow};
use crate::skeleton::{assign_deaths, diagram_correspondence, FaceKind, LabeledSkeleton};
use crate::spanning::{minimal_spanning_tree, SpanningTree, TieOrder};

#[derive(Parser, Debug)]
#[command(name = "hopes", version, about = "Minimal spanning trees and persistent skeletons of point clouds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the persistent skeleton and the persistence diagram.
    Hopes {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out_skeleton: Option<PathBuf>,
        #[arg(long)]
        out_diagram: Option<PathBuf>,
    },
    /// Build a minimal spanning tree.
    Mst {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out_skeleton: Option<PathBuf>,
    },
    /// Compute the persistence diagram, plus a `.dat` dots file.
    Diagram {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out_diagram: Option<PathBuf>,
    },
    /// Compare tree and skeleton weights with exhaustive search at every critical value.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Recheck a previously exported skeleton instead of building one.
        #[arg(long)]
        skeleton: Option<PathBuf>,
    },
    /// Verify seeded random weighted simplices.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value = "2")]
        field: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Point CSV, distance-matrix CSV (with `--distances`) or weighted complex JSON.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Filtration::Rips)]
    pub filtration: Filtration,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// A prime, or `q` for the rationals.
    #[arg(long, default_value = "2")]
    pub field: String,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Seed for shuffling equal-weight faces; lexicographic when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Read the CSV as a distance matrix.
    #[arg(long)]
    pub distances: bool,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Largest number of candidate faces the exhaustive search accepts.
    #[arg(long, default_value_t = 22)]
    pub budget: usize,
    /// Wall-clock limit per search, in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filtration {
    Rips,
    Cech,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SearchBudget> {
        let timeout = match self.timeout {
            Some(t) if !(t > 0.0 && t.is_finite()) => return invalid("timeout must be positive"),
            Some(t) => Some(Duration::from_secs_f64(t)),
            None => None,
        };
        Ok(SearchBudget {
            max_d_faces: self.budget,
            timeout,
        })
    }
}

impl InputArgs {
    fn field(&self) -> Result<FieldSpec> {
        FieldSpec::parse(&self.field)
    }

    fn tie(&self) -> TieOrder {
        self.seed.map_or(TieOrder::Lexicographic, TieOrder::Seeded)
    }

    /// The input as a weighted simplex complete up to dimension `dim + 1`.
    fn load(&self) -> Result<WeightedComplex> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return invalid("epsilon must be positive");
        }
        let top = self.dim + 1;
        let is_json = self.input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let text = fs::read_to_string(&self.input)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", self.input.display())))?;
        if is_json {
            let w = WeightedComplex::from_json(&text, self.epsilon)?;
            return complete_to_simplex(&w, top, DEFAULT_MARGIN);
        }
        let cloud = if self.distances {
            PointCloud::distances_from_csv(text.as_bytes())?
        } else {
            PointCloud::points_from_csv(text.as_bytes())?
        };
        log::info!("read {} points from {}", cloud.len(), self.input.display());
        match self.filtration {
            Filtration::Rips => vr_weights(&cloud, top, self.epsilon),
            Filtration::Cech => cech_weights(&cloud, top, self.epsilon),
        }
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::VerificationFailure(_) | Error::Infeasible(_) => 1,
        Error::ResourceLimit(_) => 3,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn build(input: &InputArgs) -> Result<(WeightedComplex, FieldSpec, SpanningTree, LabeledSkeleton)> {
    let field = input.field()?;
    let w = input.load()?;
    let t = minimal_spanning_tree(&w, input.dim, field, &input.tie())?;
    let deaths = assign_deaths(&w, &t, field)?;
    let h = LabeledSkeleton::assemble(&t, &deaths)?;
    Ok((w, field, t, h))
}

pub fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Hopes {
            input,
            out_skeleton,
            out_diagram,
        } => {
            let (w, field, _, h) = build(input)?;
            let pd = persistence_diagram(&w, input.dim, field);
            write_or_print(out_skeleton.as_deref(), &h.to_json())?;
            if let Some(p) = out_diagram {
                fs::write(p, pd.to_csv())?;
            }
            eprintln!(
                "{} faces, {} critical; {} dots in dimension {}",
                h.len(),
                h.critical().count(),
                pd.dots.len(),
                input.dim
            );
            Ok(0)
        }
        Command::Mst { input, out_skeleton } => {
            let field = input.field()?;
            let w = input.load()?;
            let t = minimal_spanning_tree(&w, input.dim, field, &input.tie())?;
            write_or_print(out_skeleton.as_deref(), &t.to_json())?;
            Ok(0)
        }
        Command::Diagram { input, out_diagram } => {
            let field = input.field()?;
            let w = input.load()?;
            let pd = persistence_diagram(&w, input.dim, field);
            write_or_print(out_diagram.as_deref(), &pd.to_csv())?;
            if let Some(p) = out_diagram {
                fs::write(p.with_extension("dat"), pd.to_dat())?;
            }
            Ok(0)
        }
        Command::Verify { input, budget, skeleton } => verify(input, &budget.budget()?, skeleton.as_deref()),
        Command::Selftest {
            seed,
            count,
            dim,
            field,
            budget,
        } => selftest(*seed, *count, *dim, FieldSpec::parse(field)?, &budget.budget()?),
    }
}

/// Labels of a loaded skeleton must agree with the weights of `w`.
fn check_against(h: &LabeledSkeleton, w: &WeightedComplex, d: usize) -> Result<()> {
    if h.d() != d || h.vertex_count() != w.vertex_count() {
        return Err(Error::VerificationFailure(format!(
            "skeleton is a {}-skeleton on {} vertices, expected {d} and {}",
            h.d(),
            h.vertex_count(),
            w.vertex_count()
        )));
    }
    for f in h.faces() {
        if w.weight(&f.face) != Some(f.label.l) {
            return Err(Error::VerificationFailure(format!("face {} has left label {} but weight {:?}", f.face, f.label.l, w.weight(&f.face))));
        }
        if f.kind == FaceKind::Critical && f.label.r.is_infinite() && d > 0 {
            return Err(Error::VerificationFailure(format!("critical face {} never dies", f.face)));
        }
    }
    Ok(())
}

fn report(rows: &[VerifyRow]) -> i32 {
    print!("{}", format_table(rows));
    let bad: Vec<&VerifyRow> = rows.iter().filter(|r| !r.ok()).collect();
    for r in &bad {
        eprintln!(
            "mismatch at alpha = {}: tree {} vs {}, skeleton {} vs {}, fitting {}",
            r.alpha, r.mst_weight, r.oracle_forest_weight, r.hopes_weight, r.oracle_subcomplex_weight, r.fitting
        );
    }
    if bad.is_empty() {
        0
    } else {
        1
    }
}

fn verify(input: &InputArgs, budget: &SearchBudget, skeleton: Option<&Path>) -> Result<i32> {
    let (w, field, t, built) = build(input)?;
    let h = match skeleton {
        Some(p) => {
            let h = LabeledSkeleton::from_json(&fs::read_to_string(p)?)?;
            check_against(&h, &w, input.dim)?;
            h
        }
        None => built,
    };
    diagram_correspondence(&h, &persistence_diagram(&w, input.dim, field), &w)?;
    let rows = verify_scales(&w, &t, &h, field, &critical_values(&w), budget)?;
    Ok(report(&rows))
}

fn selftest(seed: u64, count: usize, d: usize, field: FieldSpec, budget: &SearchBudget) -> Result<i32> {
    let mut failures = 0;
    for i in 0..count {
        let instance = seed.wrapping_add(i as u64);
        let n = if d >= 2 { 5 } else { 6 };
        let w = random_weighted_simplex(n, d + 1, 6, instance)?;
        let t = minimal_spanning_tree(&w, d, field, &TieOrder::Seeded(instance))?;
        let h = LabeledSkeleton::assemble(&t, &assign_deaths(&w, &t, field)?)?;
        let matched = diagram_correspondence(&h, &persistence_diagram(&w, d, field), &w).is_ok();
        let rows = verify_scales(&w, &t, &h, field, &scales_with_midpoints(&w), budget)?;
        let ok = matched && rows.iter().all(VerifyRow::ok);
        println!("instance {instance}: n={n} d={d} {field}: {}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    }
    println!("{} of {count} instances passed", count - failures);
    Ok(if failures == 0 { 0 } else { 1 })
}
