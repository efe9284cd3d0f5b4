use std::process::{Command, Output};

use serde_json::Value;

fn clf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clf")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const LAMP0: &str = r#"{"base":"1","lamps":[{"at":"0","val":"1"}]}"#;
const LAMP3: &str = r#"{"base":"1","lamps":[{"at":"3","val":"1"}]}"#;

#[test]
fn normalize_identity() {
    let out = clf(&["normalize", "S:2,2", "x1 X1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({"base": "(0,0)", "lamps": []}));
    assert_eq!(json(&clf(&["normalize", "S:2,1", "x1 x1 X2"])), serde_json::json!([2, -1]));
}

#[test]
fn emitted_literals_reparse() {
    for (group, element) in [
        ("S:2,2", "x1 x2 X1 X2 x1"),
        ("S:2,3", "x1 x2 X1 X2"),
        ("W:Z2~Z", LAMP3),
        ("W:P3~Z^2", r#"{"base":"(1,0)","lamps":[{"at":"(0,1)","val":"(1 2 3)"}]}"#),
    ] {
        let first = clf(&["normalize", group, element]);
        assert_eq!(first.status.code(), Some(0), "{group}");
        let text = String::from_utf8(first.stdout).unwrap();
        let again = clf(&["normalize", group, text.trim()]);
        assert_eq!(String::from_utf8(again.stdout).unwrap(), text, "{group}");
    }
}

#[test]
fn mul_and_wordlen() {
    let out = clf(&["mul", "W:Z2~Z", LAMP0, LAMP0]);
    let expected = serde_json::json!({"base": "2", "lamps": [{"at": "0", "val": "1"}, {"at": "1", "val": "1"}]});
    assert_eq!(json(&out), expected);
    assert_eq!(json(&clf(&["wordlen", "W:Z2~Z", r#"{"base":"0","lamps":[{"at":"1","val":"1"}]}"#]))["length"], 3);
}

#[test]
fn conj_check_verdicts() {
    let yes = json(&clf(&["conj-check", "W:Z2~Z", LAMP0, LAMP3]));
    assert_eq!(yes["conjugate"], true);
    assert_eq!(yes["certificate"]["verified"], true);
    assert!(yes["z_length"].as_u64().unwrap() <= yes["bound"].as_u64().unwrap());
    let out = clf(&["conj-check", "W:Z2~Z", LAMP0, r#"{"base":"1","lamps":[]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["conjugate"], false);
    let solv = json(&clf(&["conj-check", "S:2,2", "x1 x2", "x2 x1"]));
    assert_eq!(solv["conjugate"], true);
    assert_eq!(solv["certificate"]["verified"], true);
}

#[test]
fn conj_search_matches_fixture_value() {
    let out = json(&clf(&["conj-search", "W:Z2~Z", LAMP0, r#"{"base":"1","lamps":[{"at":"1","val":"1"}]}"#, "--cap", "6"]));
    assert_eq!(out["min_conj_len"], 1);
}

#[test]
fn distortion_table() {
    let out = clf(&["distortion", "S:2,2", "x1", "--nmax", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<(u64, u64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (n, d) = l.split_once(',').unwrap();
            (n.parse().unwrap(), d.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|&(n, d)| d <= 2 * n));
}

#[test]
fn scan_is_deterministic() {
    let args = ["clf-scan", "W:Z2~Z", "--count", "8", "--seed", "5", "--cap", "6"];
    let a = clf(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, clf(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("family,instance_id,n,u_len,v_len,min_conj_len,bound_L15,bound_L17,bound_T18,bound_T210,bound_C211,violation\n"));
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",false")));
}

#[test]
fn scan_config_file() {
    let dir = std::env::temp_dir().join(format!("clf-scan-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.toml");
    std::fs::write(&path, "group = \"W:Z2~Z^2\"\ngenerator = \"t112\"\nnmax = 2\ncap = 3\n").unwrap();
    let out = clf(&["clf-scan", "--config", path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.starts_with("T112,")));
    assert_eq!(text.lines().count(), 4);
    std::fs::write(&path, "group = \"W:Z2~Z\"\ncolour = 3\n").unwrap();
    assert_eq!(clf(&["clf-scan", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(clf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(clf(&["normalize", "S:2,2", "x3"]).status.code(), Some(2));
    assert_eq!(clf(&["normalize", "Q:7", "e"]).status.code(), Some(2));
    let long = "x1 x2 x1 x2 x1 x2 x1 x2 x1 x2 x1 x2 x1 x2";
    assert_eq!(clf(&["wordlen", "S:2,2", long, "--bfs-radius", "3"]).status.code(), Some(3));
    assert_eq!(clf(&["bound", "Q9", "--n", "1"]).status.code(), Some(2));
    assert_eq!(json(&clf(&["bound", "C211", "--n", "1"]))["value"], 408);
}

#[test]
fn inconclusive_conjugacy_exits_3() {
    let u = r#"{"base":"1","lamps":[{"at":"0","val":"1"},{"at":"2","val":"1"},{"at":"4","val":"1"}]}"#;
    let out = clf(&["conj-check", "W:Z2~Z", u, u, "--visiting-points", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["conjugate"], "inconclusive");
}

#[test]
fn selftest_passes() {
    let out = clf(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);
}

#[test]
fn help_documents_literals() {
    let text = String::from_utf8(clf(&["--help"]).stdout).unwrap();
    for needle in ["S:r,d", "W:A~B", "x1 X2 x1", "(1 2 3)", "\"lamps\""] {
        assert!(text.contains(needle), "{needle}");
    }
}
