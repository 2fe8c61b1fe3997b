use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../core/tests/fixtures");
    p.push(format!("{name}.json"));
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mms-lab"))
        .args(args)
        .env_remove("MMS_LAB_BUDGET")
        .output()
        .unwrap()
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mms-lab"))
        .args(args)
        .env_remove("MMS_LAB_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn c5_fails_with_a_witness() {
    let o = run(&["check", "mms", &fixture("c5"), "--method", "graph"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["weighting"].as_array().unwrap().len(), 5);

    let w = run(&["witness", &fixture("c5")]);
    assert_eq!(w.status.code(), Some(0));
    assert!(stdout(&w).contains("-11/8"));
}

#[test]
fn holding_graphs_exit_zero_and_have_no_witness() {
    let o = run(&["check", "mms", &fixture("k4")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["holds"], true);
    let w = run(&["witness", &fixture("k4")]);
    assert_eq!(w.status.code(), Some(1));
    assert!(w.stdout.is_empty());
}

#[test]
fn generated_counterexample_through_stdin() {
    let gen = run(&["gen", "counterexample", "--k", "2"]);
    assert_eq!(gen.status.code(), Some(0));
    let o = run_with_stdin(&["check", "mms", "-", "--method", "lp"], &gen.stdout);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["holds"], false);
}

#[test]
fn graph_and_lp_methods_agree() {
    for name in ["c3", "c4", "c5", "c6", "c7", "k4", "k5", "k33", "path4", "star5", "edgeless5", "cube", "prism", "wheel6", "two_triangles"] {
        let a = run(&["check", "mms", &fixture(name), "--method", "graph"]);
        let b = run(&["check", "mms", &fixture(name), "--method", "lp"]);
        assert_eq!(a.status.code(), b.status.code(), "{name}");
        assert!(matches!(a.status.code(), Some(0 | 1)), "{name}");
    }
}

#[test]
fn exact_maxm_prints_an_integer() {
    let o = run(&["partitions", "maxm", "--n", "2", "--m", "2", "--k", "2", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["partitions", "maxm", "--n", "3", "--m", "2", "--k", "2", "--exact"]);
    assert_eq!(stdout(&o).trim(), "5");
}

#[test]
fn generated_outputs_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let out_s = out.to_str().unwrap();
    let o = run(&["gen", "regular-mms", "--n", "11", "--d", "6", "--out", out_s]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let h = mms_core::Hypergraph::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(h.regularity(), Some(6));
    assert_eq!(run(&["check", "mms", out_s, "--method", "graph"]).status.code(), Some(0));

    let c = run(&["gen", "circulant", "--n", "7", "--gens", "1,2"]);
    let h = mms_core::Hypergraph::from_json(&stdout(&c)).unwrap();
    assert_eq!((h.n(), h.edge_count()), (7, 14));
    assert!(String::from_utf8_lossy(&c.stderr).contains("\"criterion\":false"));

    let fam = dir.path().join("f.json");
    let o = run(&["partitions", "prime", "--p", "5", "--out", fam.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = run(&["partitions", "verify", fam.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["members"], 10);
}

#[test]
fn experiment_is_reproducible_and_csv_by_extension() {
    let args = ["random", "experiment", "--n", "9", "--p", "1/2", "--trials", "5", "--seed", "4"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["trials"], 5);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    assert_eq!(run(&with_out).status.code(), Some(0));
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("trial,delta,alpha,alpha_exact,mms\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn usage_and_validation_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check", "circulant", "--n", "10", "--gens", "1,3"]).status.code(), Some(2));
    assert_eq!(run(&["check", "mms", "/nonexistent.json"]).status.code(), Some(2));
    let o = run_with_stdin(&["check", "mms", "-"], b"{\"n\":3}");
    assert_eq!(o.status.code(), Some(2));
    let fano = run(&["check", "mms", &fixture("fano"), "--method", "graph"]);
    assert_eq!(fano.status.code(), Some(2));
}

#[test]
fn budget_overruns_exit_three() {
    let o = run(&["check", "mms", &fixture("k8"), "--method", "lp", "--budget", "lp_instances=10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let o = Command::new(env!("CARGO_BIN_EXE_mms-lab"))
        .args(["check", "mms", &fixture("k8"), "--method", "graph"])
        .env("MMS_LAB_BUDGET", "graph_vertices=5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fuzzing_is_seeded() {
    let args = ["check", "mms", &fixture("c5"), "--method", "fuzz", "--trials", "2000", "--seed", "9"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, run(&args).stdout);
    assert_eq!(json(&a)["falsified"], true);
}
