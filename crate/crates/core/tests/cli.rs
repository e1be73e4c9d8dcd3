use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hopes::{LabeledSkeleton, PersistenceDiagram};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn hopes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopes")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hopes_on_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let sk = dir.path().join("s.json");
    let pd = dir.path().join("d.csv");
    let sq = data("square.csv");
    let o = hopes(&[
        "hopes", "--input", sq.to_str().unwrap(), "--filtration", "rips", "--dim", "1", "--field", "2",
        "--out-skeleton", sk.to_str().unwrap(), "--out-diagram", pd.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let h = LabeledSkeleton::from_json(&fs::read_to_string(&sk).unwrap()).unwrap();
    assert_eq!(h.complex().f_vector(), vec![4, 4]);
    let d = PersistenceDiagram::from_csv(&fs::read_to_string(&pd).unwrap()).unwrap();
    assert_eq!(d.dots.len(), 1);
    assert_eq!(d.dots[0].birth, 0.5);
}

#[test]
fn single_point_cloud() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("one.csv");
    fs::write(&p, "0.5,0.5\n").unwrap();
    let pd = dir.path().join("d.csv");
    let o = hopes(&["hopes", "--input", p.to_str().unwrap(), "--out-diagram", pd.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let h = LabeledSkeleton::from_json(&stdout(&o)).unwrap();
    assert_eq!(h.complex().count(1), 0);
    assert!(PersistenceDiagram::from_csv(&fs::read_to_string(&pd).unwrap()).unwrap().dots.is_empty());
}

#[test]
fn cech_tetrahedron() {
    let t = data("tetra4.csv");
    let o = hopes(&["hopes", "--input", t.to_str().unwrap(), "--filtration", "cech", "--dim", "2", "--field", "q"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let h = LabeledSkeleton::from_json(&stdout(&o)).unwrap();
    assert_eq!(h.complex().f_vector(), vec![4, 6, 4]);
    assert_eq!(h.critical().count(), 1);
}

#[test]
fn diagrams_and_dots_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("circle.csv");
    let c = data("circle10.csv");
    let o = hopes(&["diagram", "--input", c.to_str().unwrap(), "--dim", "1", "--out-diagram", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let d = PersistenceDiagram::from_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(d.dots.len(), 1);
    assert!(d.dots[0].persistence() > 0.6);
    let dat = fs::read_to_string(out.with_extension("dat")).unwrap();
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).count(), 1);

    let o = hopes(&["diagram", "--input", c.to_str().unwrap(), "--dim", "0"]);
    let d = PersistenceDiagram::from_csv(&stdout(&o)).unwrap();
    assert_eq!(d.dots.len(), 10);
    assert_eq!(d.dots.iter().filter(|x| x.death.is_infinite()).count(), 1);
}

#[test]
fn mst_export_records_seed() {
    let sq = data("square.csv");
    let o = hopes(&["mst", "--input", sq.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(code(&o), 0);
    let t = hopes::SpanningTree::from_json(&stdout(&o)).unwrap();
    assert_eq!(t.tie_seed(), Some(9));
    assert_eq!(t.d_faces().len(), 3);
}

#[test]
fn outputs_are_deterministic() {
    let c = data("circle10.csv");
    let args = ["hopes", "--input", c.to_str().unwrap(), "--dim", "1", "--seed", "5"];
    assert_eq!(hopes(&args).stdout, hopes(&args).stdout);
}

#[test]
fn verify_and_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let sq = data("square.csv");
    let o = hopes(&["verify", "--input", sq.to_str().unwrap(), "--field", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    assert!(table.starts_with("alpha,mst_weight,oracle_forest_weight,hopes_weight,oracle_subcomplex_weight,status"));
    assert!(table.lines().skip(1).all(|l| l.ends_with(",ok")));

    let sk = dir.path().join("s.json");
    let o = hopes(&["hopes", "--input", sq.to_str().unwrap(), "--out-skeleton", sk.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = hopes(&["verify", "--input", sq.to_str().unwrap(), "--skeleton", sk.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    // drop the critical side: still a valid labeling, but no longer optimal
    let text = fs::read_to_string(&sk).unwrap();
    let h = LabeledSkeleton::from_json(&text).unwrap();
    let crit = h.critical().next().unwrap().1;
    let corrupted = text.replace(&format!("\"r\": {}", crit.r), "\"r\": 0.6");
    assert_ne!(corrupted, text);
    fs::write(&sk, corrupted).unwrap();
    let o = hopes(&["verify", "--input", sq.to_str().unwrap(), "--skeleton", sk.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn tied_births_from_json() {
    let j = data("tied_births.json");
    let o = hopes(&["verify", "--input", j.to_str().unwrap(), "--field", "q"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn budget_exceeded() {
    let c = data("circle10.csv");
    let o = hopes(&["verify", "--input", c.to_str().unwrap(), "--budget", "5"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let sq = data("square.csv");
    let o = hopes(&["hopes", "--input", "/nonexistent/cloud.csv"]);
    assert_eq!(code(&o), 2);
    let o = hopes(&["hopes", "--input", sq.to_str().unwrap(), "--field", "4"]);
    assert_eq!(code(&o), 2);
    let o = hopes(&["hopes", "--input", sq.to_str().unwrap(), "--epsilon", "0"]);
    assert_eq!(code(&o), 2);
    let p = dir.path().join("bad.csv");
    fs::write(&p, "1,2\n3,x\n").unwrap();
    assert_eq!(code(&hopes(&["hopes", "--input", p.to_str().unwrap()])), 2);
    fs::write(&p, "1,2\n3\n").unwrap();
    assert_eq!(code(&hopes(&["hopes", "--input", p.to_str().unwrap()])), 2);
    let o = hopes(&["hopes", "--input", sq.to_str().unwrap(), "--distances"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&hopes(&["frobnicate"])), 2);
}

#[test]
fn distance_matrix_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dist.csv");
    fs::write(&p, "0,1,1.4142135623730951,1\n1,0,1,1.4142135623730951\n1.4142135623730951,1,0,1\n1,1.4142135623730951,1,0\n").unwrap();
    let o = hopes(&["hopes", "--input", p.to_str().unwrap(), "--distances"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let h = LabeledSkeleton::from_json(&stdout(&o)).unwrap();
    assert_eq!(h.critical().count(), 1);
    let o = hopes(&["hopes", "--input", p.to_str().unwrap(), "--distances", "--filtration", "cech"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn selftest_passes() {
    let o = Command::new(env!("CARGO_BIN_EXE_hopes"))
        .args(["selftest", "--seed", "4", "--count", "3", "--dim", "2", "--field", "q"])
        .env("HOPES_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("3 of 3 instances passed"));
}
