use std::fs;
use std::process::Command;

use ramsey_exp::{run, ExperimentConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ramsey-exp"))
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let base = ExperimentConfig::new("z5d-ramsey").with_group("Z5^3").with_trials(6).with_seed(9);
    let mut wide = base.clone();
    wide.workers = 3;
    let a = run(&base).unwrap();
    let b = run(&wide).unwrap();
    assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    assert_eq!(a.to_jsonl(), b.to_jsonl());
    assert_eq!(a.rows.len(), 6);
}

#[test]
fn rerun_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["one", "two"] {
        let status = bin()
            .args(["span", "--group", "random", "--trials", "5", "--seed", "3"])
            .args(["--param", "sizes=64,128", "--out"])
            .arg(dir.path().join(sub))
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    }
    for name in ["span.csv", "span.jsonl"] {
        let one = fs::read(dir.path().join("one").join(name)).unwrap();
        let two = fs::read(dir.path().join("two").join(name)).unwrap();
        assert_eq!(one, two, "{name}");
    }
    assert!(dir.path().join("one/span.timings.csv").exists());
}

#[test]
fn count_histogram_contains_140() {
    let out = bin().args(["count", "--group", "F2^4", "-p", "n=4"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .find(|v| v["values"]["m"] == 4)
        .unwrap();
    assert_eq!(row["values"]["at_most"], "140");
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(&path, "experiment = dimension\ngroup = Z101\ntrials = 2\nn = 12\n").unwrap();
    let out = bin().arg("dimension").arg("--config").arg(&path).args(["--trials", "3"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = String::from_utf8(out.stdout).unwrap().lines().filter(|l| l.contains("\"trial\"")).count();
    assert_eq!(rows, 3);
    let wrong = bin().arg("span").arg("--config").arg(&path).output().unwrap();
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().args(["tree", "-p", "host=moon"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["span", "--trials", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["span", "-p", "novalue"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_hard_check_exits_1() {
    // Exhaustive F-minus over F3^2 meets the two-parallel-lines sets, which break the bound.
    let out = bin().args(["check-fminus", "--group", "F3^2", "-p", "exhaustive=true"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let ok = bin().args(["check-fminus", "--group", "F5^2", "--trials", "50"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn clique_reads_adjacency_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let g = ramsey_core::clique::DenseGraph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]);
    fs::write(&path, g.to_adjacency_list()).unwrap();
    let out = bin().arg("clique").arg("--input").arg(&path).output().unwrap();
    assert!(out.status.success());
    let first: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(first["values"]["clique"], 3);
    assert_eq!(first["values"]["independence"], 2);
}

#[test]
fn suite_runs_selected_criteria() {
    let out = bin().args(["suite", "--only", "7,11"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("criterion 7: PASS"));
    assert!(text.contains("criterion 11: PASS"));
}
