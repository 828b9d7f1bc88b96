//! End-to-end behavior of the binary: output determinism, exit codes,
//! trace recording, and the selftest failure path.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_interlace")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join("interlace-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

const TREE_FILE: &str = "\
vertex r\n\
vertex a alpha=\"2\" beta=\"y\"\n\
vertex b\n\
vertex c alpha=\"x-1\"\n\
edge r a\n\
edge r b\n\
edge a c\n\
root r\n\
order r b a\n";

#[test]
fn compute_is_byte_identical_across_methods_and_runs() {
    let path = write_file("tree.graph", TREE_FILE);
    let mut outputs = Vec::new();
    for args in [
        vec!["compute", &path, "--method", "expand"],
        vec!["compute", &path, "--method", "recurse"],
        vec!["compute", &path, "--method", "recurse", "--strategy", "tree"],
        vec!["compute", &path, "--method", "recurse", "--ternary"],
        vec!["compute", &path, "--method", "reduce"],
        vec!["compute", &path, "--method", "tree"],
        vec!["compute", &path, "--method", "auto"],
        vec!["compute", &path],
    ] {
        let out = run(&args);
        assert!(out.status.success(), "{args:?}: {out:?}");
        outputs.push(out.stdout);
    }
    for o in &outputs[1..] {
        assert_eq!(o, &outputs[0]);
    }
    // And across repeated runs.
    let again = run(&["compute", &path, "--method", "expand"]);
    assert_eq!(again.stdout, outputs[0]);
}

#[test]
fn k2_prints_the_canonical_form() {
    let path = write_file("k2c.graph", "vertex a\nvertex b\nedge a b\n");
    let out = run(&["compute", &path, "--poly", "q", "--method", "expand"]);
    assert!(out.status.success());
    // (x-1)^2 + 2y - 1 in canonical order.
    assert_eq!(String::from_utf8_lossy(&out.stdout), "-2*x + 2*y + x^2\n");
}

#[test]
fn selftest_max_n_zero_passes_vacuously() {
    let out = run(&["selftest", "--max-n", "0", "--samples", "3", "--seed", "2"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("recursion-oracle: ok (1 checks)"), "{stdout}");
}

#[test]
fn qn_of_edgeless_is_a_power_of_y() {
    let path = write_file(
        "e3.graph",
        "vertex a\nvertex b\nvertex c\n",
    );
    let out = run(&["compute", &path, "--poly", "qn"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "y^3\n");
    let out = run(&["compute", &path, "--poly", "qr"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "8\n");
}

#[test]
fn exit_codes() {
    // 1: usage.
    let out = run(&["compute", "/nonexistent/x.graph"]);
    assert_eq!(out.status.code(), Some(1));
    let path = write_file("pair.graph", "vertex a\nvertex b\nedge a b\n");
    let out = run(&["compute", &path, "--method", "expand", "--record-tree", "/tmp/x"]);
    assert_eq!(out.status.code(), Some(1));

    // 2: parse error with file:line:col.
    let bad = write_file("bad.graph", "vertex a loop alpha=\"x +\"\n");
    let out = run(&["compute", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.graph:1:"), "stderr: {err}");

    // 3: semantic errors.
    let sem = write_file("sem.graph", "vertex a\nedge a b\n");
    assert_eq!(run(&["compute", &sem]).status.code(), Some(3));
    let noroot = write_file("noroot.graph", "vertex a\nvertex b\nedge a b\n");
    assert_eq!(
        run(&["compute", &noroot, "--method", "tree"]).status.code(),
        Some(3)
    );
    let selfedge = write_file("selfedge.graph", "vertex a\nedge a a\n");
    assert_eq!(run(&["compute", &selfedge]).status.code(), Some(3));

    // 3: expansion cap.
    let mut big = String::new();
    for i in 0..21 {
        big.push_str(&format!("vertex v{i}\n"));
    }
    let bigf = write_file("big.graph", &big);
    assert_eq!(
        run(&["compute", &bigf, "--method", "expand"]).status.code(),
        Some(3)
    );
}

#[test]
fn record_tree_writes_the_trace() {
    let path = write_file("k2.graph", "vertex a\nvertex b\nedge a b\n");
    let trace = std::env::temp_dir().join("interlace-cli-tests/k2-trace.txt");
    let out = run(&[
        "compute",
        &path,
        "--method",
        "recurse",
        "--record-tree",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("binary-pivot a,b | 1 | 1\n"), "{text}");
    assert!(text.lines().all(|l| !l.trim().is_empty()));
}

#[test]
fn compose_reports_weights() {
    let h = write_file("h.graph", "vertex v loop\nvertex a\nedge v a\n");
    let k = write_file("k.graph", "vertex a\nvertex w loop\nedge a w\n");
    let out = run(&["compose", &h, &k, "--shared", "a"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "alpha(a) = 0");
    assert_eq!(lines[2], "beta(a) = 1");
    assert_eq!(lines[3], "beta(a_c) = -1 + x");

    let hl = write_file("hl.graph", "vertex a loop\n");
    assert_eq!(
        run(&["compose", &hl, &k, "--shared", "a"]).status.code(),
        Some(3)
    );
    let hw = write_file("hw.graph", "vertex a alpha=\"2\"\n");
    assert_eq!(
        run(&["compose", &hw, &k, "--shared", "a"]).status.code(),
        Some(3)
    );
}

#[test]
fn stats_reports_bounds() {
    let path = write_file(
        "loops.graph",
        "vertex a loop\nvertex b loop\nedge a b\n",
    );
    let out = run(&["stats", &path]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("epsilon = 2"), "{stdout}");
    assert!(stdout.contains("strategy=first"));
    assert!(stdout.contains("strategy=reduce-first"));
    assert!(stdout.contains("bound=ok"));
    assert!(!stdout.contains("violated"));
}

#[test]
fn selftest_is_reproducible_and_faultable() {
    let a = run(&["selftest", "--max-n", "4", "--samples", "15", "--seed", "9"]);
    let b = run(&["selftest", "--max-n", "4", "--samples", "15", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let out = run(&[
        "selftest",
        "--max-n",
        "4",
        "--samples",
        "5",
        "--inject-fault",
        "pivot",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("reproducer"), "stderr: {err}");
    assert!(err.contains("vertex"), "stderr: {err}");
}

#[test]
fn serialized_files_parse_back() {
    // Round-trip through the CLI: a file with every directive kind computes
    // to the same polynomial after being rewritten by hand in serialized
    // order (vertex/edge/root/order).
    let path = write_file("rt.graph", TREE_FILE);
    let out1 = run(&["compute", &path, "--method", "expand"]);
    let resorted = write_file(
        "rt2.graph",
        "vertex r\nvertex a alpha=\"2\" beta=\"y\"\nvertex b\nvertex c alpha=\"-1 + x\"\nedge r a\nedge r b\nedge a c\nroot r\norder r b a\n",
    );
    let out2 = run(&["compute", &resorted, "--method", "tree"]);
    assert_eq!(out1.stdout, out2.stdout);
    assert!(Path::new(&path).exists());
}
