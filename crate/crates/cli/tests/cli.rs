use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::Command;

use logfc_cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("logfc").chain(args.iter().copied()));
    let v = serde_json::from_str(out.stdout.trim()).expect("stdout is one JSON document");
    (out.code, v)
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("logfc-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn decide_ltab_example() {
    let (code, v) = call(&["decide-ltab", "--axioms", "!( (q<-p) & (p<-q) )"]);
    assert_eq!(code, 0);
    assert_eq!(v["locally_tabular"], true);
    assert_eq!(v["witness"]["verdict"]["certificate"]["comb"], 2);
}

#[test]
fn classify_f3_from_file() {
    let dir = scratch_dir("classify");
    let path = dir.join("f3.json");
    fs::write(
        &path,
        r#"{"points": ["a", "b", "c", "d"], "covers": [["b", "a"], ["c", "a"], ["d", "a"]]}"#,
    )
    .unwrap();
    let (code, v) = call(&["classify", "--frame", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!({ "tag": "OtherCoTree" }));
    let (_, v) = call(&["classify", "--frame", "comb:3"]);
    assert_eq!(v, serde_json::json!({ "tag": "Comb", "n": 3 }));
}

#[test]
fn decide_logfc_example() {
    let (code, v) = call(&["decide-logfc", "--formula", "(p->q)|(q->p)"]);
    assert_eq!(code, 0);
    assert_eq!(v["in_logfc"], true);
    assert_eq!(v["bound"], 4);
    let (_, v) = call(&["decide-logfc", "--formula", "p | !p", "--max-n", "5"]);
    assert_eq!(v["refuted"], true);
    assert_eq!(v["certificate"]["comb"], 1);
}

#[test]
fn every_exit_path_prints_json() {
    let cases: &[(&[&str], i32)] = &[
        (&["parse", "--formula", "p -> q <- r"], 1),
        (&["parse", "--formula", "p &"], 1),
        (&["parse"], 1),
        (&["valid", "--formula", "p", "--frame", "/no/such/file.json"], 1),
        (&["classify", "--frame", "comb:0"], 1),
        (&["--no-such-flag"], 1),
        (&[], 1),
        (&["decide-logfc", "--formula", "!((q<-p)&(p<-q)) | (p -> r)", "--budget", "5"], 2),
        (&["morphism", "--frame", "comb:6", "--target", "chain:2", "--budget", "1"], 2),
        (&["--help"], 0),
        (&["valid", "--formula", "(p->q)|(q->p)", "--frame", "F3"], 0),
        (&["morphism", "--frame", "F3", "--target", "F3"], 0),
        (&["embed", "--frame", "chain:3", "--target", "comb:3"], 0),
        (&["lfc-check", "--frame", "F2"], 0),
        (&["enumerate", "--kind", "posets", "--max-size", "3"], 0),
        (&["render", "--frame", "hcomb:1"], 0),
    ];
    for (args, code) in cases {
        let (c, v) = call(args);
        assert_eq!(c, *code, "{args:?}: {v}");
        if *code != 0 {
            assert!(v.get("error").is_some() || v.get("help").is_some(), "{args:?}");
        }
    }
    let (_, v) = call(&["decide-logfc", "--formula", "!((q<-p)&(p<-q)) | (p -> r)", "--budget", "5"]);
    assert_eq!(v["error"]["kind"], "budget_exceeded");
    assert!(v["error"].get("completed_up_to").is_some());
}

fn builtin(frame: &str) -> logfc_core::FinitePoset {
    use logfc_core::poset::{antichain, make_comb, make_hcomb};
    match frame.split_once(':') {
        Some(("comb", n)) => make_comb(n.parse().unwrap()).unwrap(),
        Some(("hcomb", n)) => make_hcomb(n.parse().unwrap()).unwrap(),
        Some(("antichain", n)) => antichain(n.parse().unwrap()),
        _ => logfc_core::structure::frame_f(frame[1..].parse().unwrap()),
    }
}

#[test]
fn render_matches_hasse_diagram() {
    for frame in ["comb:3", "hcomb:2", "F0", "F2", "antichain:3"] {
        let (_, v) = call(&["render", "--frame", frame]);
        let dot = v["dot"].as_str().unwrap();
        let edges: BTreeSet<(String, String)> = dot
            .lines()
            .filter_map(|l| l.trim().strip_suffix(';')?.split_once(" -> "))
            .map(|(a, b)| (a.trim_matches('"').to_string(), b.trim_matches('"').to_string()))
            .collect();
        let x = builtin(frame);
        let covers: BTreeSet<(String, String)> = x
            .covers()
            .into_iter()
            .map(|(a, b)| (x.label(a).to_string(), x.label(b).to_string()))
            .collect();
        assert_eq!(edges, covers, "{frame}");
        for l in x.labels() {
            assert!(dot.contains(&format!("\"{l}\"")), "{frame}: {l}");
        }
    }
}

#[test]
fn parse_round_trips_through_printed_form() {
    for s in ["p -> q -> r", "!(p & q) | ~r", "(p <- q) <- r", "p <- (q <- r)", "~~p -> !!p", "true & false"] {
        let (_, first) = call(&["parse", "--formula", s]);
        let printed = first["formula"].as_str().unwrap().to_string();
        let (_, second) = call(&["parse", "--formula", &printed]);
        assert_eq!(first["ast"], second["ast"], "{s}");
        assert_eq!(second["formula"], printed);
    }
}

#[test]
fn corpus_mode_emits_one_line_per_case() {
    let dir = scratch_dir("corpus");
    fs::write(
        dir.join("a.jsonl"),
        concat!(
            r#"{"id": "prelin", "command": "decide-logfc", "formula": "(p->q)|(q->p)"}"#, "\n",
            r#"{"id": "f3", "command": "classify", "frame": {"points": ["a","b","c","d"], "covers": [["b","a"],["c","a"],["d","a"]]}}"#, "\n",
            "\n",
            r#"{"id": "ltab", "command": "decide-ltab", "axioms": ["p | !p"]}"#, "\n",
        ),
    )
    .unwrap();
    fs::write(dir.join("b.jsonl"), r#"{"id": "bad", "command": "parse", "formula": "p &"}"#).unwrap();
    fs::write(dir.join("ignored.txt"), "not a case").unwrap();
    let out = run(["logfc", "--corpus", dir.to_str().unwrap()]);
    let lines: Vec<Value> = out.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["result"]["in_logfc"], true);
    assert_eq!(lines[1]["result"]["tag"], "OtherCoTree");
    assert_eq!(lines[2]["result"]["locally_tabular"], true);
    assert_eq!(lines[3]["ok"], false);
    assert_eq!(lines[3]["error"]["kind"], "syntax");
    assert_eq!(out.code, 1);
}

#[test]
fn thread_count_does_not_change_output() {
    for f in ["(p->q)|(q->p)", "p | !p", "~p -> !p", "(p <- q) -> p"] {
        let a = run(["logfc", "valid", "--frame", "F0", "--formula", f, "--threads", "1"]);
        let b = run(["logfc", "valid", "--frame", "F0", "--formula", f, "--threads", "4"]);
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn eval_reports_forcing_set() {
    let dir = scratch_dir("eval");
    let path = dir.join("v.json");
    fs::write(&path, r#"{"p": ["x2p", "x2"]}"#).unwrap();
    let (code, v) = call(&[
        "eval", "--frame", "comb:2", "--formula", "p <- q", "--valuation",
        path.to_str().unwrap(), "--point", "x2",
    ]);
    assert_eq!(code, 1, "q is unassigned: {v}");
    let (code, v) = call(&[
        "eval", "--frame", "comb:2", "--formula", "~p", "--valuation",
        path.to_str().unwrap(), "--point", "x2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["forcing_set"], serde_json::json!(["x1p", "x1", "x2"]));
    assert_eq!(v["forces"], true);
}

#[test]
fn binary_writes_json_and_exit_code() {
    let out = Command::new(env!("CARGO_BIN_EXE_logfc"))
        .args(["decide-logfc", "--formula", "false"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificate"]["comb"], 1);

    let out = Command::new(env!("CARGO_BIN_EXE_logfc"))
        .args(["parse", "--formula", "p ->"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(serde_json::from_slice::<Value>(&out.stdout).is_ok());
    assert!(!out.stderr.is_empty());
}
