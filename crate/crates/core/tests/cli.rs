mod common;

use std::io::Write;
use std::process::{Command, Output, Stdio};

use common::*;
use debruijn::anf::{rule_feedback, to_anf};
use debruijn::graph::induced_tree;
use debruijn::{Family, RuleSpec};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_debruijn"))
        .args(args)
        .output()
        .unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_debruijn"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_examples() {
    let o = run(&["gen", "--family", "pcr-lz-k", "--k", "1", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), GRANDDADDY);
    let o = run(&["gen", "--family", "psr-mixed-k", "--k", "3", "--n", "6"]);
    assert_eq!(stdout(&o).trim(), MIXED_K[3]);
    let o = run(&["gen", "--family", "pcr-lz-k", "--k", "0", "--n", "2"]);
    assert_eq!(stdout(&o).trim(), "0011");
    let o = run(&[
        "gen", "--family", "pcr-lz-k", "--k", "1", "--n", "6", "--format", "hex",
    ]);
    assert_eq!(stdout(&o).trim(), "0218a392cd3d5dbf");
    let o = run(&[
        "gen", "--family", "pcr-lz-k", "--k", "1", "--n", "6", "--bits", "10",
    ]);
    assert_eq!(stdout(&o).trim(), &GRANDDADDY[..10]);
}

#[test]
fn gen_from_spec_file() {
    let dir = std::env::temp_dir().join(format!("debruijn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    let spec = RuleSpec::new(6, Family::PcrWeightBandsEo { ks: vec![1, 3, 7] });
    std::fs::write(&path, spec.to_json().to_string()).unwrap();
    let o = run(&["gen", "--spec", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), BANDS[6].2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn invalid_specs_exit_two() {
    let o = run(&[
        "gen",
        "--family",
        "pcr-weight-bands-lz",
        "--ks",
        "2,7",
        "--n",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = run(&["tree", "--family", "pcr-g-lz", "--g", "0,2", "--n", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["gen", "--family", "no-such-rule", "--n", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["gen"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        run_stdin(&["verify", "--n", "6"], GRANDDADDY).status.code(),
        Some(0)
    );
    let mut flipped = bits_of(GRANDDADDY);
    flipped[17] ^= 1;
    assert_eq!(
        run_stdin(&["verify", "--n", "6"], &bit_string(&flipped))
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run_stdin(&["verify", "--n", "2"], "0011\n").status.code(),
        Some(0)
    );
    assert_eq!(
        run_stdin(&["verify", "--n", "2"], "001x").status.code(),
        Some(2)
    );
    assert_eq!(
        run_stdin(&["verify", "--n", "3"], "0011").status.code(),
        Some(1)
    );
}

#[test]
fn tree_and_graph_dot() {
    let o = run(&["tree", "--family", "new1-rule", "--n", "6", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    for (c, p) in FIG1_EDGES {
        assert!(dot.contains(&format!("\"{c}\" -> \"{p}\"")), "{c} -> {p}");
    }
    assert_eq!(dot.matches("->").count(), 13);
    assert!(dot.contains("\"111111\" [label=\"(111111)\", peripheries=2]"));
    let tree = induced_tree(&RuleSpec::new(6, Family::PcrLzPrev).compile().unwrap()).unwrap();
    assert_eq!(dot, tree.to_dot());

    let o = run(&[
        "tree",
        "--family",
        "psr-run-k",
        "--k",
        "0",
        "--n",
        "6",
        "--dot",
    ]);
    let dot = stdout(&o);
    assert!(dot.contains("\"0101011\" -> \"0000101\" [label=\"101010\"]"));
    assert!(dot.contains("\"0010111\" -> \"0000101\" [label=\"100101\"]"));

    let o = run(&["graph", "--fsr", "psr", "--n", "6", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert_eq!(
        dot.matches("[label=").count(),
        10 + dot.matches(" -- ").count()
    );
    assert_eq!(dot.lines().filter(|l| l.contains("[label=\"(")).count(), 10);
}

#[test]
fn census_reports() {
    let o = run(&["census", "--family", "pcr-lz-k", "--n", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reports"][0]["distinct"], 60);
    assert_eq!(v["reports"][0]["matches"], true);

    let o = run(&["census", "--family", "pcr-table", "--n", "7"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1492992000"));

    let o = Command::new(env!("CARGO_BIN_EXE_debruijn"))
        .args(["census", "--family", "pcr-lz-k", "--n", "6"])
        .env("DEBRUIJN_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn anf_matches_library() {
    let o = run(&[
        "anf", "--family", "pcr-lz-k", "--k", "0", "--n", "4", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["round_trip"], true);
    let rule = RuleSpec::new(4, Family::PcrLzK { k: 0 }).compile().unwrap();
    assert_eq!(v["anf"], to_anf(&rule_feedback(&rule).unwrap()).to_string());
}

#[test]
fn bench_reports_points() {
    let o = run(&[
        "bench", "--family", "psr-eo-k", "--n", "8..10", "--bits", "20000", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
    assert!(v["fit"]["superlinear_share"].is_number());
}
