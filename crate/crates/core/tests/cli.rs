use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fastrg::cli::run_with_io;
use fastrg::io::{read_edge_list, EdgeFormat};

fn fastrg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fastrg")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn sample_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.csv", "1,0\n0,1\n");
    let sm = write(dir.path(), "s.csv", "3,1\n1,3\n");
    let (a, b) = (dir.path().join("a.tsv"), dir.path().join("b.tsv"));
    for out in [&a, &b] {
        let o = fastrg(&["sample", "--x", s(&x), "--s", s(&sm), "--seed", "7", "--out", s(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(bytes)
        .unwrap()
        .starts_with("# fastrg n=2 d=2 directed=1\n"));
}

#[test]
fn simple_bernoulli_sbm_has_no_loops_or_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.tsv");
    let o = fastrg(&[
        "model",
        "sbm",
        "--block-sizes",
        "2,2",
        "--b",
        "0.5,0.1,0.1,0.5",
        "--bernoulli",
        "--simple",
        "--seed",
        "1",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let graph = read_edge_list(&out, EdgeFormat::Tsv).unwrap();
    assert!(!graph.is_directed());
    assert_eq!(graph.self_loops(), 0);
    assert!(graph.multiplicities().iter().all(|&(i, j, m)| i < j && m == 1));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = fastrg(&["sample", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    assert!(o.stdout.is_empty());
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(fastrg(&["--help"]).status.code(), Some(0));
    assert_eq!(fastrg(&["--version"]).status.code(), Some(0));
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.tsv");
    let x = write(dir.path(), "x.csv", "1,0\n0,-1\n");
    let sm = write(dir.path(), "s.csv", "1,1\n1,1\n");
    let o = fastrg(&["sample", "--x", s(&x), "--s", s(&sm), "--seed", "1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("negative"));

    let ragged = write(dir.path(), "r.csv", "1,0\n0\n");
    let o = fastrg(&[
        "sample",
        "--x",
        s(&ragged),
        "--s",
        s(&sm),
        "--seed",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2"));

    let missing = dir.path().join("nope.csv");
    let o = fastrg(&[
        "sample",
        "--x",
        s(&missing),
        "--s",
        s(&sm),
        "--seed",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = fastrg(&[
        "model",
        "sbm",
        "--block-sizes",
        "2,2",
        "--b",
        "1.5,0,0,1",
        "--bernoulli",
        "--seed",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bernoulli_needs_block_structure() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.csv", "0.5,0.5\n1,0\n");
    let sm = write(dir.path(), "s.csv", "0.2,0.1\n0.1,0.2\n");
    let out = dir.path().join("e.tsv");
    let o = fastrg(&[
        "sample",
        "--x",
        s(&x),
        "--s",
        s(&sm),
        "--bernoulli",
        "--seed",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = fastrg(&[
        "model",
        "chunglu",
        "--weights",
        "1,2",
        "--bernoulli",
        "--seed",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn matrix_market_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.mtx");
    let o = fastrg(&[
        "model",
        "chunglu",
        "--weights",
        "2,1,1,3",
        "--undirected",
        "--seed",
        "5",
        "--format",
        "mtx",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("%%MatrixMarket matrix coordinate integer symmetric"));
    let graph = read_edge_list(&out, EdgeFormat::MatrixMarket).unwrap();
    assert_eq!(graph.n(), 4);
    assert!(graph.edges().iter().all(|&(i, j)| i <= j));
}

#[test]
fn rectangular_sample_with_matrix_market_factors() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(
        dir.path(),
        "x.mtx",
        "%%MatrixMarket matrix coordinate real general\n3 1 3\n1 1 1\n2 1 2\n3 1 1\n",
    );
    let y = write(dir.path(), "y.csv", "1\n1\n");
    let sm = write(dir.path(), "s.csv", "2\n");
    let out = dir.path().join("e.tsv");
    let o = fastrg(&[
        "sample",
        "--x",
        s(&x),
        "--s",
        s(&sm),
        "--y",
        s(&y),
        "--seed",
        "3",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let graph = read_edge_list(&out, EdgeFormat::Tsv).unwrap();
    assert_eq!((graph.n(), graph.d()), (3, 2));

    // undirected output needs a square model
    let o = fastrg(&[
        "sample",
        "--x",
        s(&x),
        "--s",
        s(&sm),
        "--y",
        s(&y),
        "--undirected",
        "--seed",
        "3",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn every_model_family_runs() {
    let dir = tempfile::tempdir().unwrap();
    let pi = write(dir.path(), "pi.csv", "0.5,0.5\n1,0\n0.25,0.75\n");
    let z = write(dir.path(), "z.csv", "1,0\n1,1\n0,1\n");
    let w = write(dir.path(), "w.txt", "1\n2\n3\n");
    let out = dir.path().join("e.tsv");
    let runs: Vec<Vec<&str>> = vec![
        vec!["model", "sbm", "--memberships", "0,1,1", "--b", "1,0.5,0.5,1"],
        vec![
            "model",
            "dcsbm",
            "--block-sizes",
            "1,2",
            "--theta",
            "1,2,3",
            "--b",
            "1,0.5,0.5,1",
        ],
        vec!["model", "mmsbm", "--pi", s(&pi), "--b", "1,0.5,0.5,1"],
        vec!["model", "overlapping", "--z", s(&z), "--b", "1,0.5,0.5,1"],
        vec!["model", "chunglu", "--weights-file", s(&w), "--avg-deg", "4"],
    ];
    for mut args in runs {
        args.extend(["--seed", "2", "--out", s(&out)]);
        let o = fastrg(&args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(read_edge_list(&out, EdgeFormat::Tsv).unwrap().n(), 3);
    }
}

#[test]
fn bench_writes_csv_in_process() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with_io(
        [
            "fastrg", "bench", "--n-grid", "100,200", "--m-grid", "500,1000", "--reps", "1", "--seed", "4",
        ],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,expected_m,actual_m,elapsed_seconds,seed,model_kind");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("100,500,"));
    assert!(lines[1].ends_with(",poisson-x-uniform-s"));
}

#[test]
fn bench_with_zero_reps_prints_header_only() {
    let mut out = Vec::new();
    let code = run_with_io(
        ["fastrg", "bench", "--reps", "0", "--seed", "1"],
        &mut out,
        &mut Vec::new(),
    );
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 1);
}

#[test]
fn bench_memory_cap_is_a_data_error() {
    let code = run_with_io(
        [
            "fastrg",
            "bench",
            "--n-grid",
            "1000",
            "--m-grid",
            "10",
            "--max-factor-entries",
            "10",
            "--seed",
            "1",
        ],
        &mut Vec::new(),
        &mut Vec::new(),
    );
    assert_eq!(code, 2);
}
