use std::path::Path;
use std::process::{Command, Output};

fn graphcanon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphcanon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const P5: &str = "p 5 4\n0 1\n1 2\n2 3\n3 4\n";
const C6: &str = "p 6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";
const TWO_C3: &str = "p 6 6\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n";

#[test]
fn refine_reports_the_class_chain() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.txt", P5);
    let o = graphcanon(&["refine", "--input", &p5]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("classes=3 discrete=false rounds=2 chain=[1, 2, 3]"), "{}", stdout(&o));
    let o = graphcanon(&["refine", "--input", &p5, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["colours"], serde_json::json!([0, 1, 2, 1, 0]));
}

#[test]
fn every_analysis_subcommand_runs() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = write(dir.path(), "c6.txt", C6);
    for args in [
        vec!["wl2", "--input", &c6],
        vec!["cores", "--input", &c6],
        vec!["disparity", "--input", &c6, "--mode", "wl2"],
        vec!["views", "--input", &c6, "--depth", "2"],
        vec!["views", "--input", &c6, "--u", "0", "--v", "3"],
        vec!["canon", "--input", &c6, "--scheme", "report"],
        vec!["canon", "--input", &c6, "--scheme", "tree-unicyclic"],
        vec!["aut", "--input", &c6, "--mode", "all"],
        vec!["aut", "--input", &c6, "--mode", "exceptions"],
        vec!["refine", "--gnp", "50,ln(n)/n", "--seed", "3"],
    ] {
        let o = graphcanon(&args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let mut json_args = args.clone();
        json_args.push("--json");
        let o = graphcanon(&json_args);
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn isotest_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = write(dir.path(), "c6.txt", C6);
    let c3s = write(dir.path(), "c3s.txt", TWO_C3);
    let shifted = write(dir.path(), "c6b.txt", "p 6 6\n0 2\n2 4\n4 1\n1 3\n3 5\n5 0\n");
    let o = graphcanon(&["isotest", "--input", &c6, "--other", &c3s]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("non-isomorphic"));
    let o = graphcanon(&["isotest", "--input", &c6, "--other", &shifted]);
    assert!(stdout(&o).starts_with("isomorphic"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = write(dir.path(), "c6.txt", C6);
    // Not applicable.
    assert_eq!(graphcanon(&["canon", "--input", &c6, "--scheme", "discrete-cr"]).status.code(), Some(1));
    // Threshold met and missed.
    let ok = graphcanon(&["experiment", "--kind", "bes", "--n", "30", "--p", "1/2", "--trials", "5"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let miss = graphcanon(&["experiment", "--kind", "bes", "--n", "30", "--p", "0", "--trials", "5"]);
    assert_eq!(miss.status.code(), Some(1));
    let at_most = graphcanon(&[
        "experiment", "--kind", "bes", "--n", "30", "--p", "0", "--trials", "5", "--threshold", "<=0.1",
    ]);
    assert_eq!(at_most.status.code(), Some(0));
    // Usage errors.
    assert_eq!(graphcanon(&["experiment", "--kind", "bes"]).status.code(), Some(2));
    assert_eq!(graphcanon(&["experiment", "--kind", "bes", "--n", "10", "--p", "2"]).status.code(), Some(2));
    assert_eq!(graphcanon(&["refine"]).status.code(), Some(2));
    assert_eq!(graphcanon(&["nonsense"]).status.code(), Some(2));
    // Size cap.
    let big = graphcanon(&["experiment", "--kind", "disparity-components", "--n", "5000", "--p", "0.1"]);
    assert_eq!(big.status.code(), Some(3));
    let big_aut = graphcanon(&["aut", "--gnp", "40,0.1", "--mode", "all"]);
    assert_eq!(big_aut.status.code(), Some(3));
}

#[test]
fn experiment_from_spec_file_with_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"kind": "smoothed-cr", "n": 64, "p": "1.5*ln(n)/n", "g0": "union-k4", "trials": 4, "seed": 9}"#,
    );
    let csv = dir.path().join("out.csv");
    let o = graphcanon(&["experiment", "--spec", &spec, "--out", csv.to_str().unwrap()]);
    assert!(o.status.code().is_some_and(|c| c <= 1), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    let json = dir.path().join("out.json");
    let o = graphcanon(&[
        "experiment", "--spec", &spec, "--trials", "2", "--emit", "json", "--out", json.to_str().unwrap(), "--json",
    ]);
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["trials"], 2);
    let full: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(full["spec"]["g0"], "union-k4");
    assert_eq!(full["records"].as_array().unwrap().len(), 2);
    let plot = dir.path().join("plot.csv");
    let o = graphcanon(&["experiment", "--spec", &spec, "--sweep", "0,1/n,0.5", "--out", plot.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&plot).unwrap().lines().count(), 4);
}
