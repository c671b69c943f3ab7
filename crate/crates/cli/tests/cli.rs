use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matroid-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("matroid-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn solve_exit_codes() {
    let out = run(&["solve", "10", "3", "86"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# CONSTRUCTED"));
    assert!(text.lines().nth(1) == Some("3 7"));

    assert_eq!(run(&["solve", "6", "3", "11"]).status.code(), Some(2));
    // 15 singular 4x4 minors need 60 rows, only 40 available
    let b = (135_751 - 15).to_string();
    let out = run(&["solve", "44", "40", &b]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("UNKNOWN"));

    assert_eq!(run(&["solve", "5", "6", "1"]).status.code(), Some(4));
    assert_eq!(run(&["solve", "5", "2", "11"]).status.code(), Some(4));
    assert_eq!(run(&["solve", "five", "2", "1"]).status.code(), Some(4));
}

#[test]
fn solve_json_and_full_matrix() {
    let out = run(&["solve", "6", "3", "20", "--json", "--full-matrix"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outcome"], "CONSTRUCTED");
    assert_eq!(v["verified"], true);
    assert_eq!(v["matrix"]["rows"], 3);
    assert_eq!(v["matrix"]["cols"], 6);
    assert_eq!(v["matrix"]["entries"][0][0], 1);
}

#[test]
fn solve_is_deterministic() {
    let a = run(&["solve", "40", "35", "658005", "--seed", "3"]);
    let b = run(&["solve", "40", "35", "658005", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn count_and_verify() {
    let text = scratch("a.txt", "3 3\n1 1 1\n1 2 3\n1 3 6\n");
    let out = run(&["count", text.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "r=3 k=3 b=20 b_bar=0");

    let json = scratch(
        "ones.json",
        r#"{"rows": 2, "cols": 2, "entries": [[1, 1], [1, 1]]}"#,
    );
    let out = run(&["verify", json.to_str().unwrap(), "--expect", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("b=5"));
    let out = run(&["verify", json.to_str().unwrap(), "--expect", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("PASS\n"));

    let zeros = scratch("zeros.txt", "4 2\n0 0\n0 0\n0 0\n0 0\n");
    let out = run(&["verify", zeros.to_str().unwrap(), "--expect", "1"]);
    assert_eq!(out.status.code(), Some(0));

    let bad = scratch("bad.txt", "2 2\n1 2\n");
    assert_eq!(
        run(&["count", bad.to_str().unwrap()]).status.code(),
        Some(4)
    );
    assert_eq!(run(&["count", "/nonexistent/m.txt"]).status.code(), Some(4));
}

#[test]
fn table_listing() {
    let out = run(&["table", "6", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 20);
    assert_eq!(lines[10], "11 KNOWN_NONEXISTENT");
    assert!(
        lines
            .iter()
            .filter(|l| l.contains("CONSTRUCTED 3x3 verified=true"))
            .count()
            == 19
    );

    assert_eq!(
        stdout(&run(&["table", "4", "4"])).trim(),
        "1 CONSTRUCTED 4x0 verified=true"
    );
    assert_eq!(
        run(&["table", "6", "3", "--cap", "10"]).status.code(),
        Some(4)
    );
}

#[test]
fn replays_and_selftest() {
    let out = run(&["selftest", "appendix-a"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("275 entries, 0 mismatches: PASS"));

    let out = run(&["replay", "appendix-c"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_end().ends_with("0 violations: PASS"));

    let out = run(&["replay", "appendix-b", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["per_r"].as_array().unwrap().len(), 155);
}
