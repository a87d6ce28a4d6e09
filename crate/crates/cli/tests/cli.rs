use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn backbone(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_backbone")).args(args).current_dir(dir).output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = backbone(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn err(args: &[&str], dir: &Path) -> String {
    let out = backbone(args, dir);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    String::from_utf8(out.stderr).unwrap()
}

const GRAPH: &str = "# city\nhome work 4\nhome park 1\npark work 1\nwork mall 2\npark mall 5\n";
const LOG: &str = "home work 3\nwork home 1\nhome mall 2\n";

fn fixture() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.tsv"), GRAPH).unwrap();
    fs::write(dir.path().join("l.tsv"), LOG).unwrap();
    dir
}

fn without_wall_time(json: &str) -> String {
    json.lines().filter(|l| !l.contains("wall_time_ms")).collect::<Vec<_>>().join("\n")
}

#[test]
fn run_writes_outputs() {
    let dir = fixture();
    let stdout = ok(&["run", "--graph", "g.tsv", "--log", "l.tsv", "--budget", "4", "--out-dir", "out"], dir.path());
    assert!(stdout.starts_with("greedy-eb: lambda=1 "), "{stdout}");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["lambda"], 1.0);
    assert_eq!(report["resolved_budget"], 4.0);
    assert_eq!(report["edge_count"], 3);
    assert_eq!(report["percent_edges_covered"], 60.0);
    assert_eq!(report["pairs"][0]["volume"], 4.0);
    let tsv = fs::read_to_string(dir.path().join("out/backbone.tsv")).unwrap();
    assert_eq!(tsv, "home park 1\npark work 1\nwork mall 2\n");
    let vertices = fs::read_to_string(dir.path().join("out/vertices.tsv")).unwrap();
    assert!(vertices.contains("0 home\n") && vertices.contains("3 mall\n"));
}

#[test]
fn run_is_deterministic() {
    let dir = fixture();
    for out in ["a", "b"] {
        ok(&["run", "--graph", "g.tsv", "--log", "l.tsv", "--budget", "40%", "--landmarks", "2", "--out-dir", out], dir.path());
    }
    let read = |p: &str| fs::read_to_string(dir.path().join(p)).unwrap();
    assert_eq!(without_wall_time(&read("a/report.json")), without_wall_time(&read("b/report.json")));
    assert_eq!(read("a/backbone.tsv"), read("b/backbone.tsv"));
}

#[test]
fn zero_budget_reports_inf() {
    let dir = fixture();
    ok(&["run", "--graph", "g.tsv", "--log", "l.tsv", "--budget", "0", "--out-dir", "z"], dir.path());
    let report = fs::read_to_string(dir.path().join("z/report.json")).unwrap();
    assert!(report.contains("\"lambda\": \"inf\""));
    assert_eq!(fs::read_to_string(dir.path().join("z/backbone.tsv")).unwrap(), "");
}

#[test]
fn parse_errors_name_the_line() {
    let dir = fixture();
    fs::write(dir.path().join("bad.tsv"), "a b 1\n# fine\nb c oops\n").unwrap();
    let msg = err(&["run", "--graph", "bad.tsv", "--log", "l.tsv", "--budget", "1"], dir.path());
    assert!(msg.contains("line 3"), "{msg}");
    fs::write(dir.path().join("badlog.tsv"), "home nowhere 1\n").unwrap();
    let msg = err(&["run", "--graph", "g.tsv", "--log", "badlog.tsv", "--budget", "1"], dir.path());
    assert!(msg.contains("unknown vertex label `nowhere`"), "{msg}");
    let msg = err(&["run", "--graph", "g.tsv", "--log", "l.tsv", "--budget", "-3"], dir.path());
    assert!(msg.contains("budget"), "{msg}");
}

#[test]
fn sweep_csv_is_ordered_by_budget() {
    let dir = fixture();
    let csv = ok(&["sweep", "--graph", "g.tsv", "--log", "l.tsv", "--budgets", "50,10", "--variants", "greedy,baseline", "--out-dir", "s"], dir.path());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "variant,budget_pct,lambda,edges_pct,time_ms");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("greedy,10,"));
    assert!(lines[2].starts_with("baseline,10,"));
    assert!(lines[3].starts_with("greedy,50,"));
    assert_eq!(fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap(), csv);
    assert!(!backbone(&["sweep", "--graph", "g.tsv", "--log", "l.tsv", "--variants", "nope"], dir.path()).status.success());
}

#[test]
fn eval_scores_external_edges() {
    let dir = fixture();
    fs::write(dir.path().join("mine.tsv"), "home work\nwork mall\n").unwrap();
    let json = ok(&["eval", "--graph", "g.tsv", "--log", "l.tsv", "--backbone", "mine.tsv"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    // d = 4 and 6 against 2 and 4: H(R) = 6/(4/4 + 2/6), H(E) = 6/(4/2 + 2/4)
    let want = (6.0 / (1.0 + 2.0 / 6.0)) / (6.0 / (2.0 + 0.5));
    assert!((v["lambda"].as_f64().unwrap() - want).abs() < 1e-12);
    assert_eq!(v["spent"], 6.0);
    fs::write(dir.path().join("ghost.tsv"), "home mall\n").unwrap();
    assert!(err(&["eval", "--graph", "g.tsv", "--log", "l.tsv", "--backbone", "ghost.tsv"], dir.path()).contains("is not in the graph"));
}

#[test]
fn geojson_export() {
    let dir = fixture();
    fs::write(dir.path().join("c.txt"), "home 51.50 -0.12\nwork 51.52 -0.08\npark 51.51 -0.10\nmall 51.53 -0.05\n").unwrap();
    fs::write(dir.path().join("bb.tsv"), "home park 1\n").unwrap();
    let json = ok(&["export-geojson", "--graph", "g.tsv", "--coords", "c.txt", "--backbone", "bb.tsv"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["features"].as_array().unwrap().len(), 1);
    assert_eq!(v["features"][0]["geometry"]["coordinates"], serde_json::json!([[-0.12, 51.5], [-0.1, 51.51]]));
    let all = ok(&["export-geojson", "--graph", "g.tsv", "--coords", "c.txt", "--backbone", "bb.tsv", "--all-edges"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&all).unwrap();
    assert_eq!(v["features"].as_array().unwrap().len(), 5);
    assert_eq!(v["features"][1]["properties"]["in-backbone"], true);
    assert_eq!(v["features"][0]["properties"]["in-backbone"], false);
}

#[test]
fn centrality_dump() {
    let dir = fixture();
    let text = ok(&["centrality", "--graph", "g.tsv", "--log", "l.tsv"], dir.path());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# edge-id u v score");
    assert_eq!(lines[1], "0 home work 0");
    assert_eq!(lines[2], "1 home park 6");
    assert_eq!(lines[4], "3 work mall 2");
}

#[test]
fn generators_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["gen-graph", "--kind", "grid", "--size", "6", "--extra", "7", "--seed", "3", "--out", "g.tsv"], dir.path());
    let a = ok(&["gen-traffic", "--graph", "g.tsv", "--pairs", "12", "--seed", "5"], dir.path());
    let b = ok(&["gen-traffic", "--graph", "g.tsv", "--pairs", "12", "--seed", "5"], dir.path());
    let c = ok(&["gen-traffic", "--graph", "g.tsv", "--pairs", "12", "--seed", "6"], dir.path());
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 12);
    assert!(!backbone(&["gen-traffic", "--graph", "g.tsv", "--pairs", "100000"], dir.path()).status.success());
}

#[test]
fn gadget_and_two_hub_commands() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sc.txt"), "3 2\n0 1\n1 2\n").unwrap();
    let out = ok(&["gadget-setcover", "--input", "sc.txt", "--solve", "--out-dir", "gd"], dir.path());
    assert!(out.contains("budget 2\n") && out.contains("cover of size <= 2: true") && out.contains("optimal stretch at budget: 1\n"), "{out}");
    assert!(dir.path().join("gd/graph.tsv").exists());

    let out = ok(&["fig2", "--out-dir", "f"], dir.path());
    assert!(out.contains("bridge-selected=true"), "{out}");
    assert!(out.contains("is maximal: true"), "{out}");
}
