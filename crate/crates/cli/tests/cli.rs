use std::path::Path;
use std::process::{Command, Output};

fn cuspcohom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspcohom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const LINE: &str = include_str!("../../core/scenarios/line-ends.toml");

#[test]
fn list_shows_registry_with_provenance() {
    let o = cuspcohom(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("punctured-torus"));
    assert!(text.matches("provenance:").count() >= 6);
}

#[test]
fn run_writes_csv_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspcohom(&["run", "line-ends", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("line-ends-h1.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "stage_radius,rank,torsion,image_rank_next");
    assert_eq!(csv.lines().nth(1).unwrap(), "1,1,,1");
    assert!(!dir.path().join(".line-ends-h1.csv.partial").exists());
}

#[test]
fn wrong_expectation_exits_nonzero_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("wrong.toml");
    std::fs::write(&file, LINE.replace("\"1\" = \"stable(1)\"", "\"1\" = \"stable(2)\"")).unwrap();
    let o = cuspcohom(&["run", file.to_str().unwrap(), "--out", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("- expected stable(2)"), "{text}");
    assert!(text.contains("+ actual   stable(1)"), "{text}");
}

#[test]
fn parse_errors_report_lines() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.toml");
    std::fs::write(&file, LINE.replace("kind = \"cayley-only\"", "kind = \"torus\"")).unwrap();
    let o = cuspcohom(&["run", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 9"), "{err}");
}

#[test]
fn guard_violation_aborts() {
    let o = cuspcohom(&["run", "line-ends", "--stages", "12", "--out", "/nonexistent/never-written"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("maximal safe radius is 8"));
    assert!(!Path::new("/nonexistent/never-written").exists());
}

#[test]
fn runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(cuspcohom(&["run", "f2-tree", "--seed", "5", "--out", d.path().to_str().unwrap()]).status.success());
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 3);
    for n in names {
        assert_eq!(std::fs::read(a.path().join(&n)).unwrap(), std::fs::read(b.path().join(&n)).unwrap());
    }
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("torus.simplices");
    let o = cuspcohom(&["export", "punctured-torus", "--format", "simplex-list", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&out).unwrap().lines().any(|l| l.split_whitespace().count() == 3));
    let o = cuspcohom(&["export", "line-ends", "--format", "sparse-matrix"]);
    assert!(stdout(&o).starts_with("# boundary 1\n"));
    let o = cuspcohom(&["export", "line-ends", "--format", "edge-list"]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("e ")).count(), 16);
    let o = cuspcohom(&["export", "line-ends", "--format", "graphml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn delta_and_probe() {
    let o = cuspcohom(&["delta", "horoball-path"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("delta_four_point="));
    let o = cuspcohom(&["probe", "line-local"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("vanishes=true"));
    let o = cuspcohom(&["probe", "line-ends"]);
    assert_eq!(o.status.code(), Some(2));
}
