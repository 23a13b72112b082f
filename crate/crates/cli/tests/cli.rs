use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualradix")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dualradix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const SEVEN_CYCLE: &str = r#"{"m":3,"l":2,"f":[1,1,1,1,1,1,1],"e":[4,1,1,2,1,1,1],"a":[-1,-1,-1,-1,-1,-1,-1]}"#;

#[test]
fn cylinder_from_spec_file() {
    let path = scratch("seven.json", SEVEN_CYCLE);
    let out = run(&["cylinder", "--spec", path.to_str().unwrap(), "--stages", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().nth(4), Some("3,-1,-2,-2,-2,0,0"));
}

#[test]
fn analyze_output_refeeds_byte_identically() {
    let first = run(&["analyze", "--m", "3", "--l", "2", "--a", "-1", "--seed", "17", "--format", "json"]);
    assert!(first.status.success());
    let path = scratch("analysis.json", &stdout(&first));
    let second = run(&["analyze", "--spec", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn bs_test_table() {
    let path = scratch("seven-bs.json", SEVEN_CYCLE);
    let out = run(&["bs-test", "--spec", path.to_str().unwrap()]);
    let first_row: Vec<String> = stdout(&out).lines().nth(1).unwrap().split_whitespace().map(String::from).collect();
    assert_eq!(first_row[1..3], ["nonnegative-integer", "17"]);
}

#[test]
fn expand_digits() {
    let out = run(&["expand", "--numerator", "17", "--denominator", "1", "--radix", "3", "--grading", "1", "--digits", "4", "--format", "csv"]);
    assert_eq!(stdout(&out), "2,2,1,0\n");
    let out = run(&["expand", "--numerator", "-1", "--radix", "2", "--digits", "3", "--format", "csv"]);
    assert_eq!(stdout(&out), "1,1,1\n");
}

#[test]
fn search_emits_json_lines() {
    let out = run(&["search", "--a", "-1", "--tau-max", "2", "--esum-max", "3", "--format", "json", "--jobs", "2"]);
    assert!(out.status.success());
    let lines: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.iter().any(|v| v["e"] == serde_json::json!([1, 2]) && v["value"] == "7"));
    for v in &lines {
        for key in ["tau", "e", "v", "value", "classification"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn smooth_certificate() {
    let out = run(&["smooth", "--m", "3", "--l", "2", "--e", "1,1"]);
    assert!(stdout(&out).contains("5 = 4*8 - 9*3"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["analyze", "--m", "3", "--l", "2", "--e", "1", "--a", "3"]).status.code(), Some(2));
    let path = scratch("broken.json", "{\"m\": 3,");
    assert_eq!(run(&["cylinder", "--spec", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["search"]).status.code(), Some(2));
}

#[test]
fn selfcheck_reports_counts() {
    let out = run(&["selfcheck", "--count", "8", "--seed", "11", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("suite,passed,failed,identities\n"));
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(2) == Some("0")));
}
