//! End-to-end checks of the command line interface: exit codes, output
//! shape, and environment plumbing. Every test spawns the real binary.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_resgraph")
}

fn sample(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("samples")
        .join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(bin());
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("stdout is utf-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr is utf-8"),
    }
}

fn write_graph(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).expect("create graph file");
    f.write_all(text.as_bytes()).expect("write graph file");
    path
}

#[test]
fn validate_accepts_good_graph() {
    let r = run(&["validate", sample("d4_star.graph").to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert_eq!(r.stdout, "valid: 4 vertices, 3 edges\n");
}

#[test]
fn validate_rejects_nonminimal_graph_unless_allowed() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(
        dir.path(),
        "blowup.graph",
        "vertex a e=-1\nvertex b e=-3\nedge a b\n",
    );
    let strict = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(strict.code, 1);
    assert!(
        strict.stderr.contains("invalid:"),
        "stderr: {}",
        strict.stderr
    );

    let lax = run(&["validate", path.to_str().unwrap(), "--allow-nonminimal"]);
    assert_eq!(lax.code, 0, "stderr: {}", lax.stderr);
    assert!(lax.stdout.contains("warning:"));
    assert!(lax
        .stdout
        .contains("valid apart from minimality: 2 vertices, 1 edges"));
}

#[test]
fn allow_nonminimal_does_not_excuse_other_violations() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(dir.path(), "bad.graph", "vertex a e=1\n");
    let r = run(&["validate", path.to_str().unwrap(), "--allow-nonminimal"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("invalid:"));
}

#[test]
fn parse_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(dir.path(), "junk.graph", "vertex a e=-2\nedge a nosuch\n");
    let r = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("error:"), "stderr: {}", r.stderr);
}

#[test]
fn missing_file_exits_three() {
    let r = run(&["classify", "/nonexistent/nowhere.graph"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.starts_with("error:"));
}

#[test]
fn unknown_flag_exits_three() {
    let r = run(&["classify", "--frobnicate"]);
    assert_eq!(r.code, 3);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn classify_reports_the_class_in_text_and_json() {
    let path = sample("genus1_chain.graph");
    let text = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(text.code, 0, "stderr: {}", text.stderr);
    assert!(
        text.stdout.contains("class: elliptic"),
        "stdout: {}",
        text.stdout
    );
    assert!(text.stdout.contains("numerically Gorenstein: yes"));

    let json = run(&["classify", path.to_str().unwrap(), "--json"]);
    assert_eq!(json.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&json.stdout).expect("valid json");
    assert_eq!(doc["tool"]["name"], "resgraph");
    assert_eq!(doc["classification"]["class"], "elliptic");
    assert_eq!(doc["classification"]["numerically_gorenstein"], true);
    assert!(doc["classification"]["z_k"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v.is_string()));
    assert!(doc["invariants"].is_null(), "classify omits invariants");
    assert!(doc["oracle"].is_null());
    assert!(
        !doc["sequence"].is_null(),
        "elliptic NG graph carries a sequence"
    );
}

#[test]
fn invariants_json_reflects_assumptions() {
    let path = sample("cusp_chain.graph");
    let plain = run(&["invariants", path.to_str().unwrap(), "--json"]);
    assert_eq!(plain.code, 0, "stderr: {}", plain.stderr);
    let doc: serde_json::Value = serde_json::from_str(&plain.stdout).unwrap();
    assert_eq!(doc["assumptions"]["gorenstein"], false);
    assert_eq!(doc["invariants"]["p_g"]["kind"], "range");

    let assumed = run(&[
        "invariants",
        path.to_str().unwrap(),
        "--assume-gorenstein",
        "--json",
    ]);
    assert_eq!(assumed.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&assumed.stdout).unwrap();
    assert_eq!(doc["assumptions"]["gorenstein"], true);
    assert_eq!(doc["invariants"]["p_g"]["kind"], "exact");
    assert_eq!(doc["invariants"]["p_g"]["value"], 2);
    assert_eq!(doc["invariants"]["multiplicity"], 2);
    assert_eq!(doc["invariants"]["embedding_dimension"], 3);
}

#[test]
fn sequence_refuses_rational_graphs() {
    let r = run(&["sequence", sample("d4_star.graph").to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("elliptic"), "stderr: {}", r.stderr);
}

#[test]
fn sequence_lists_the_tower() {
    let r = run(&["sequence", sample("genus1_chain.graph").to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(
        r.stdout.contains("elliptic sequence (m = 2)"),
        "stdout: {}",
        r.stdout
    );
    assert!(r.stdout.contains("Z_B0"));
    assert!(r.stdout.contains("Z_B2"));
}

#[test]
fn hilbert_refuses_without_pinned_genus() {
    // Rational graph: the genus verdict is exact(0), never exact(m + 1).
    let r = run(&[
        "hilbert",
        sample("d4_star.graph").to_str().unwrap(),
        "-k",
        "2",
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("rational"), "stderr: {}", r.stderr);
}

#[test]
fn hilbert_redirects_small_degree_to_generator_degrees() {
    let r = run(&[
        "hilbert",
        sample("cusp_chain.graph").to_str().unwrap(),
        "-k",
        "2",
        "--assume-gorenstein",
    ]);
    assert_eq!(r.code, 2);
    assert!(
        r.stderr.contains("generator degrees"),
        "stderr: {}",
        r.stderr
    );
}

#[test]
fn hilbert_prints_dimensions_when_hypotheses_hold() {
    let r = run(&[
        "hilbert",
        sample("cuspidal_cubic.graph").to_str().unwrap(),
        "-k",
        "2",
        "--assume-gorenstein",
    ]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    // d = 3, k = 2: dim O/I^2 = 3*2*1/2 + 1 = 4, graded piece 3*2 = 6.
    assert!(r.stdout.contains("4"), "stdout: {}", r.stdout);
    assert!(r.stdout.contains("6"), "stdout: {}", r.stdout);
}

#[test]
fn verify_passes_on_small_graphs() {
    let r = run(&["verify", sample("d4_star.graph").to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("[PASS]"));
    assert!(!r.stdout.contains("[FAIL]"), "stdout: {}", r.stdout);
}

#[test]
fn verify_accepts_cap_spec_forms() {
    let path = sample("d4_star.graph");
    assert_eq!(
        run(&["verify", path.to_str().unwrap(), "--oracle-cap", "2x"]).code,
        0
    );
    assert_eq!(
        run(&["verify", path.to_str().unwrap(), "--oracle-cap", "2,1,1,1"]).code,
        0
    );
}

#[test]
fn verify_rejects_bad_cap_specs() {
    let path = sample("d4_star.graph");
    assert_eq!(
        run(&["verify", path.to_str().unwrap(), "--oracle-cap", "bogus"]).code,
        3
    );
    // Wrong number of entries for a four-vertex graph.
    assert_eq!(
        run(&["verify", path.to_str().unwrap(), "--oracle-cap", "1,2"]).code,
        3
    );
}

#[test]
fn oracle_limit_env_is_enforced_and_validated() {
    let path = sample("d4_star.graph");
    let squeezed = run_env(
        &["verify", path.to_str().unwrap()],
        &[("RESGRAPH_ORACLE_LIMIT", "10")],
    );
    assert_eq!(squeezed.code, 1);
    assert!(
        squeezed.stdout.contains("[FAIL]"),
        "stdout: {}",
        squeezed.stdout
    );
    assert!(squeezed.stderr.contains("oracle cross-checks failed"));

    let bad = run_env(
        &["verify", path.to_str().unwrap()],
        &[("RESGRAPH_ORACLE_LIMIT", "plenty")],
    );
    assert_eq!(bad.code, 3);
    assert!(bad.stderr.contains("RESGRAPH_ORACLE_LIMIT"));
}

#[test]
fn batch_walks_the_directory_in_name_order() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "a_first.graph", "vertex a e=-2\n");
    write_graph(dir.path(), "b_broken.graph", "vertex a e=-2\nedge a a\n");
    write_graph(
        dir.path(),
        "c_last.graph",
        "vertex v0 e=-1 cusps=1\nvertex v1 e=-2\nedge v0 v1\n",
    );
    write_graph(dir.path(), "ignored.txt", "not a graph");

    let r = run(&["batch", dir.path().to_str().unwrap()]);
    assert_eq!(r.code, 1, "a broken member fails the batch");
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 3, "stdout: {}", r.stdout);
    assert!(lines[0].starts_with("a_first.graph:"));
    assert!(lines[1].starts_with("b_broken.graph:"));
    assert!(lines[1].contains("error:"));
    assert!(lines[2].starts_with("c_last.graph:"));
    assert!(lines[0].contains("class=rational"));
    assert!(lines[2].contains("class=elliptic"));
}

#[test]
fn batch_json_emits_one_object_per_file() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "good.graph", "vertex a e=-2\n");
    write_graph(dir.path(), "bad.graph", "vertex a e=0\n");

    let r = run(&["batch", dir.path().to_str().unwrap(), "--json"]);
    assert_eq!(r.code, 1);
    let docs: Vec<serde_json::Value> = r
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is json"))
        .collect();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0]["file"], "bad.graph");
    assert!(docs[0]["error"].is_string());
    assert!(docs[0]["report"].is_null());
    assert_eq!(docs[1]["file"], "good.graph");
    assert!(docs[1]["error"].is_null());
    assert_eq!(docs[1]["report"]["classification"]["class"], "rational");
}

#[test]
fn classify_output_is_deterministic() {
    let path = sample("nongorenstein_star.graph");
    let a = run(&["classify", path.to_str().unwrap(), "--json"]);
    let b = run(&["classify", path.to_str().unwrap(), "--json"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}
