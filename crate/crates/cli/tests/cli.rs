use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn fpcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpcube")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn example(dir: &TempDir, m: &str) -> String {
    let path = dir.path().join(format!("ex{m}.txt"));
    let o = fpcube(&["gen-pride", "--mode", "example", "--m", m, "--format", "text", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    path.to_str().unwrap().to_owned()
}

#[test]
fn check_star_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ex = example(&dir, "21");
    let pass = fpcube(&["check-star", &ex, "--n", "20"]);
    assert_eq!(code(&pass), 0);
    let v = json(&pass);
    assert_eq!(v["format"], "fpcube-report 1");
    assert_eq!(v["result"]["worst_piece_syllables"], 2);
    assert_eq!(code(&fpcube(&["check-star", &ex, "--n", "25"])), 1);
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&fpcube(&["check-star", missing.to_str().unwrap(), "--n", "20"])), 2);
}

#[test]
fn parse_errors_report_location() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "fpcube-presentation 1\nfactor A abelian 1 a\nrelator q^1\n");
    let o = fpcube(&["check-star", &bad, "--n", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn classical_needs_free_group() {
    let dir = TempDir::new().unwrap();
    let ex = example(&dir, "2");
    assert_eq!(code(&fpcube(&["check-classical", &ex, "--n", "2"])), 2);
    let rem = dir.path().join("rem.txt");
    let o = fpcube(&["gen-pride", "--mode", "remark", "--n", "2", "--format", "text", "--output", rem.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&fpcube(&["check-classical", rem.to_str().unwrap(), "--n", "2", "--format", "text"])), 0);
}

#[test]
fn gen_pride_modes() {
    let o = fpcube(&["gen-pride", "--mode", "remark", "--n", "2", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("fpcube-presentation 1\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("relator")).count(), 6);

    let o = fpcube(&["gen-pride", "--mode", "corollary", "--n", "20", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().filter(|l| l.starts_with("relator")).count(), 24);

    assert_eq!(code(&fpcube(&["gen-pride", "--mode", "remark", "--n", "1"])), 2);
    assert_eq!(code(&fpcube(&["gen-pride", "--mode", "example"])), 2);
}

#[test]
fn build_chooses_q_and_override_fails() {
    let dir = TempDir::new().unwrap();
    let ex = example(&dir, "21");
    let o = fpcube(&["build", &ex, "--n", "20", "--no-timestamp"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let q = v["result"]["q"].as_u64().unwrap();
    assert_eq!(v["result"]["subdivision"]["previous"]["q"].as_u64(), Some(q - 1));
    for cone in v["result"]["cones"].as_array().unwrap() {
        assert_eq!(cone["q"].as_u64(), Some(q));
        assert_eq!(cone["wall_piece_bound"], 21);
        assert!(cone["systole"].as_u64().unwrap() > 20 * cone["worst_cone_piece_bound"].as_u64().unwrap());
    }

    let o = fpcube(&["build", &ex, "--n", "20", "--q", "1", "--no-timestamp"]);
    assert_eq!(code(&o), 1);
    assert!(!json(&o)["result"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn build_writes_complexes() {
    let dir = TempDir::new().unwrap();
    let ex = example(&dir, "4");
    let out = dir.path().join("out");
    let o = fpcube(&["build", &ex, "--n", "3", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for f in ["wedge.complex", "cone-0.complex", "cone-1.complex", "report.json"] {
        assert!(Path::new(&out.join(f)).exists(), "{f}");
    }
    let cone = fs::read_to_string(out.join("cone-0.complex")).unwrap();
    fpcube::cube::parse_complex(&cone).unwrap();
}

#[test]
fn build_requires_cstar() {
    let dir = TempDir::new().unwrap();
    let ex = example(&dir, "2");
    let o = fpcube(&["build", &ex, "--n", "6"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("C'_*(1/6)"));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let ex = example(&dir, "4");
    let a = fpcube(&["report", &ex, "--n", "3", "--no-timestamp"]);
    let b = fpcube(&["report", &ex, "--n", "3", "--no-timestamp"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["timestamp_unix"].is_null());
    assert!(json(&fpcube(&["report", &ex, "--n", "3"]))["timestamp_unix"].is_u64());
}

#[test]
fn dual_of_single_relator() {
    let dir = TempDir::new().unwrap();
    let ac = write(&dir, "ac.txt", "fpcube-presentation 1\nfactor A abelian 2 a b\nfactor C abelian 2 c d\nrelator a^1 c^1\n");
    let o = fpcube(&["dual", &ac, "--q", "1", "--no-timestamp"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let cone = &v["result"]["cones"][0];
    assert_eq!(cone["letter"]["walls"], 1);
    assert_eq!(cone["subdivided"]["walls"], 3);
    assert_eq!(cone["subdivided"]["dual"]["dimension"], 3);
    assert_eq!(cone["subdivided"]["dual"]["vertices"], 8);

    let dot = fpcube(&["dual", &ac, "--q", "1", "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().contains("graph cone0_walls {"));
    assert_eq!(code(&fpcube(&["dual", &ac])), 2);
}

#[test]
fn dual_of_wallspace_file() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "w.txt", "fpcube-wallspace 1\npoints 4\nwall ++--\nwall +-+-\n");
    let o = fpcube(&["dual", &ws, "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "walls=2 vertices=4 edges=4 dimension=2 median=true\n");
    let bad = write(&dir, "b.txt", "fpcube-wallspace 1\npoints 4\nwall ++\n");
    assert_eq!(code(&fpcube(&["dual", &bad])), 2);
}

#[test]
fn letter_walls_of_two_tori() {
    let dir = TempDir::new().unwrap();
    let ex = example(&dir, "2");
    let o = fpcube(&["dual", &ex, "--q", "1", "--no-timestamp"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for cone in v["result"]["cones"].as_array().unwrap() {
        assert_eq!(cone["letter"]["walls"], 3);
        assert_eq!(cone["letter"]["pairwise_crossing"], true);
    }
}
