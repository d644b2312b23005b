//! End-to-end tests driving the `bdmbt` binary over temp files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bdmbt() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bdmbt"))
}

fn run(args: &[&str]) -> Output {
    bdmbt().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn path_str(path: &Path) -> &str {
    path.to_str().expect("temp paths are UTF-8")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path
}

#[test]
fn gen_a_tree_then_solve() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("a3.graph");
    let out = run(&["gen", "a-tree", "--n", "3", "-o", path_str(&graph)]);
    assert!(out.status.success());

    let out = run(&["solve", "--graph", path_str(&graph), "--source", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");

    // The generated tree is labeled, so the source can be omitted.
    let out = run(&["solve", "--graph", path_str(&graph)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");
}

#[test]
fn gen_a_tree_schedule_verifies() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("a4.graph");
    let schedule = dir.path().join("a4.schedule");
    let out = run(&[
        "gen",
        "a-tree",
        "--n",
        "4",
        "-o",
        path_str(&graph),
        "--schedule",
        path_str(&schedule),
    ]);
    assert!(out.status.success());

    let out = run(&[
        "verify",
        "--graph",
        path_str(&graph),
        "--schedule",
        path_str(&schedule),
        "--deadline",
        "6",
    ]);
    assert!(out.status.success(), "canonical schedule must verify");
    assert!(stdout(&out).contains("completion_time=6"));

    // One round too strict: exit 1.
    let out = run(&[
        "verify",
        "--graph",
        path_str(&graph),
        "--schedule",
        path_str(&schedule),
        "--deadline",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_path_and_cycle_solve_all() {
    let dir = TempDir::new().unwrap();
    let path_file = dir.path().join("p4.graph");
    let out = run(&["gen", "path", "--n", "4", "-o", path_str(&path_file)]);
    assert!(out.status.success());
    let out = run(&["solve", "--graph", path_str(&path_file), "--all"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3");

    let cycle_file = dir.path().join("c5.graph");
    let out = run(&["gen", "cycle", "--n", "5", "-o", path_str(&cycle_file)]);
    assert!(out.status.success());
    let out = run(&["solve", "--graph", path_str(&cycle_file), "--all"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3");

    // Degenerate cycle is a usage error.
    let out = run(&["gen", "cycle", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_without_output_prints_graph() {
    let out = run(&["gen", "path", "--n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("p graph 3"));
    assert!(text.contains("e 0 1"));
    assert!(text.contains("e 1 2"));
}

#[test]
fn decide_exit_codes() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "p4.graph", "p graph 4\ne 0 1\ne 1 2\ne 2 3\n");
    let yes = run(&["decide", "--graph", path_str(&graph), "--source", "0", "--k", "3"]);
    assert_eq!(yes.status.code(), Some(0));
    let no = run(&["decide", "--graph", path_str(&graph), "--source", "0", "--k", "2"]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn reduce_decide_certify_extract_round_trip() {
    let dir = TempDir::new().unwrap();
    // Unsatisfiable: reduce, then decide at the printed target.
    let unsat = write(&dir, "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let graph = dir.path().join("unsat.graph");
    let map = dir.path().join("unsat.map");
    let out = run(&[
        "reduce",
        "--cnf",
        path_str(&unsat),
        "-o",
        path_str(&graph),
        "--map",
        path_str(&map),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");

    // The reduction graph carries the r:1:1 label, so no --source.
    let out = run(&["decide", "--graph", path_str(&graph), "--k", "4"]);
    assert_eq!(out.status.code(), Some(1), "unsatisfiable: b(r) > 4");

    // Satisfiable: certify then verify at the target, then extract.
    let sat = write(&dir, "sat.cnf", "p cnf 2 2\n1 2 0\n-1 -2 0\n");
    let sat_graph = dir.path().join("sat.graph");
    let sat_map = dir.path().join("sat.map");
    let out = run(&[
        "reduce",
        "--cnf",
        path_str(&sat),
        "-o",
        path_str(&sat_graph),
        "--map",
        path_str(&sat_map),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "6");

    let cert = dir.path().join("sat.schedule");
    let out = run(&[
        "certify",
        "--cnf",
        path_str(&sat),
        "--assignment",
        "1,-2",
        "-o",
        path_str(&cert),
    ]);
    assert!(out.status.success());

    let out = run(&[
        "verify",
        "--graph",
        path_str(&sat_graph),
        "--schedule",
        path_str(&cert),
        "--deadline",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["extract", "--schedule", path_str(&cert), "--map", path_str(&sat_map)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1,-2");

    // An unsatisfying assignment is rejected.
    let out = run(&[
        "certify",
        "--cnf",
        path_str(&sat),
        "--assignment",
        "1,2",
        "-o",
        path_str(&cert),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "g.graph", "p graph 2\ne 0 1\n");
    let bad = write(&dir, "bad.schedule", "s 0 1\nc 5 0 1\n");
    let out = run(&[
        "verify",
        "--graph",
        path_str(&graph),
        "--schedule",
        path_str(&bad),
    ]);
    assert_eq!(out.status.code(), Some(2), "round past horizon is malformed");

    let missing = dir.path().join("nope.graph");
    let ok_sched = write(&dir, "ok.schedule", "s 0 1\nc 1 0 1\n");
    let out = run(&[
        "verify",
        "--graph",
        path_str(&missing),
        "--schedule",
        path_str(&ok_sched),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "--graph", path_str(&graph), "--nonsense"]);
    assert_eq!(out.status.code(), Some(2), "unknown flags are usage errors");
}

#[test]
fn verify_invalid_schedule_exits_1() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "g.graph", "p graph 3\ne 0 1\ne 1 2\n");
    // Vertex 2 is never informed.
    let sched = write(&dir, "s.schedule", "s 0 2\nc 1 0 1\n");
    let out = run(&[
        "verify",
        "--graph",
        path_str(&graph),
        "--schedule",
        path_str(&sched),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("invalid"));
}

#[test]
fn heuristic_output_verifies() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("a5.graph");
    run(&["gen", "a-tree", "--n", "5", "-o", path_str(&graph)]);
    let sched = dir.path().join("a5.heuristic");
    let out = run(&[
        "heuristic",
        "--graph",
        path_str(&graph),
        "-o",
        path_str(&sched),
    ]);
    assert!(out.status.success());
    let completion: u32 = stdout(&out).trim().parse().expect("prints completion");
    assert!(completion >= 8, "heuristic cannot beat the optimum of 8");

    let out = run(&[
        "verify",
        "--graph",
        path_str(&graph),
        "--schedule",
        path_str(&sched),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn solve_writes_witness_and_honors_upper() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "p5.graph", "p graph 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\n");
    let witness = dir.path().join("p5.witness");
    let out = run(&[
        "solve",
        "--graph",
        path_str(&graph),
        "--source",
        "0",
        "-o",
        path_str(&witness),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");

    let out = run(&[
        "verify",
        "--graph",
        path_str(&graph),
        "--schedule",
        path_str(&witness),
        "--deadline",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));

    // No schedule within 3 rounds: exit 1.
    let out = run(&[
        "solve",
        "--graph",
        path_str(&graph),
        "--source",
        "0",
        "--upper",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "> 3");
}

#[test]
fn node_budget_exit_code() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("a4.graph");
    run(&["gen", "a-tree", "--n", "4", "-o", path_str(&graph)]);
    let out = run(&[
        "--node-budget",
        "2",
        "solve",
        "--graph",
        path_str(&graph),
        "--source",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // The environment variable sets the default; the flag wins.
    let out = bdmbt()
        .env("BDMBT_NODE_BUDGET", "2")
        .args(["solve", "--graph", path_str(&graph), "--source", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = bdmbt()
        .env("BDMBT_NODE_BUDGET", "2")
        .args([
            "--node-budget",
            "100000",
            "solve",
            "--graph",
            path_str(&graph),
            "--source",
            "0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn emitted_files_reparse() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "f.cnf", "p cnf 2 1\n1 -2 0\n");
    let graph = dir.path().join("f.graph");
    let map = dir.path().join("f.map");
    run(&[
        "reduce",
        "--cnf",
        path_str(&cnf),
        "-o",
        path_str(&graph),
        "--map",
        path_str(&map),
    ]);
    let graph_text = std::fs::read_to_string(&graph).unwrap();
    let reparsed = bdmbt_core::Graph::from_text(&graph_text).unwrap();
    assert_eq!(reparsed.vertex_count(), 9);
    let map_text = std::fs::read_to_string(&map).unwrap();
    let reparsed = bdmbt_core::ReductionMap::from_text(&map_text).unwrap();
    assert_eq!(reparsed.vertex_count(), 9);
}

#[test]
fn clashing_paths_are_rejected() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "f.cnf", "p cnf 1 1\n1 0\n");
    let out = run(&[
        "reduce",
        "--cnf",
        path_str(&cnf),
        "-o",
        path_str(&cnf),
        "--map",
        path_str(&dir.path().join("f.map")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
