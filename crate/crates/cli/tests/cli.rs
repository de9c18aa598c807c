use std::fs;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn ginv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ginv")).args(args).env_remove("GINV_MAX_RING_SIZE").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn compute_core_of_a_unit() {
    let out = ginv(&["compute", "--ring", "zmod:8", "--kind", "core", "--element", "3"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["result"], json!(3));
    assert_eq!(v["certificate"]["valid"], json!(true));
}

#[test]
fn compute_reports_the_missing_factor() {
    let out = ginv(&["compute", "--ring", "zmod:8", "--kind", "core", "--element", "4"]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["error"], "NotCoreInvertible");
    assert_eq!(v["because"], "NotGroupInvertible");
}

#[test]
fn compute_is_deterministic() {
    let args = ["compute", "--ring", "mat:zmod:4:2", "--kind", "dual_core", "--element", "[[1,2],[0,1]]"];
    let first = ginv(&args);
    assert_eq!(code(&first), 0);
    for _ in 0..3 {
        assert_eq!(ginv(&args).stdout, first.stdout);
    }
}

#[test]
fn verify_accepts_compute_output() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("zmod:12", "core", "5"),
        ("zmod:12", "group", "4"),
        ("mat:rat:2", "core", "[[1,0],[-1,0]]"),
        ("mat:rat:2", "one_four", "[[1,-1],[0,0]]"),
        ("mat:gf:3:2", "dual_core", "[[1,2],[0,0]]"),
        ("mat:zmod:4:2", "one_three", "[[3,1],[0,0]]"),
    ];
    for (i, (ring, kind, element)) in cases.into_iter().enumerate() {
        let out = ginv(&["compute", "--ring", ring, "--kind", kind, "--element", element]);
        assert_eq!(code(&out), 0, "{ring} {kind} {element}");
        let path = dir.path().join(format!("out{i}.json"));
        fs::write(&path, &out.stdout).unwrap();
        let p = path.to_str().unwrap();
        let v = ginv(&["verify", "--ring", ring, "--kind", kind, "--a-file", p, "--x-file", p]);
        assert_eq!(code(&v), 0, "{}", String::from_utf8_lossy(&v.stdout));
        assert_eq!(stdout_json(&v)["valid"], json!(true));
    }
}

#[test]
fn verify_rejects_a_wrong_candidate() {
    let out = ginv(&["verify", "--ring", "zmod:8", "--kind", "core", "--a", "3", "--x", "5", "--form", "three_eq"]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["valid"], json!(false));
    assert_eq!(v["form"], "three_eq");
}

#[test]
fn unsupported_form_is_a_usage_error() {
    let out = ginv(&["verify", "--ring", "zmod:8", "--kind", "group", "--a", "3", "--x", "3", "--form", "three_eq"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn demo_runs_every_scenario() {
    for id in ["ex4.2", "ex4.4", "rem4.5", "rem4.6"] {
        let out = ginv(&["demo", id]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(!text.contains("[FAIL]"));
        let json = ginv(&["demo", id, "--format", "json"]);
        assert_eq!(stdout_json(&json)["passed"], json!(true));
    }
    assert_eq!(code(&ginv(&["demo", "nope"])), 1);
    let list = ginv(&["demo", "--list"]);
    assert_eq!(String::from_utf8(list.stdout).unwrap(), "ex4.2\nex4.4\nrem4.5\nrem4.6\n");
}

#[test]
fn search_lists_all_inverses() {
    let out = ginv(&["search", "--ring", "zmod:8", "--kind", "inner", "--element", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["count"], json!(8));
    let none = ginv(&["search", "--ring", "zmod:8", "--kind", "core", "--element", "4"]);
    assert_eq!(code(&none), 2);
    assert_eq!(stdout_json(&none)["solutions"], json!([]));
    let q = ginv(&["search", "--ring", "mat:rat:2", "--kind", "core", "--element", "[[1,0],[0,0]]"]);
    assert_eq!(code(&q), 1);
}

#[test]
fn sum_modes() {
    let ok = ginv(&["sum", "--ring", "mat:rat:2", "--mode", "core", "--a", "[[1,0],[0,0]]", "--b", "[[0,0],[0,1]]"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout_json(&ok)["result"], json!([[1, 0], [0, 1]]));
    let dual = ginv(&[
        "sum", "--ring", "mat:rat:2", "--mode", "dual", "--commuting", "--a", "[[1,0],[0,0]]", "--b", "[[0,0],[0,1]]",
    ]);
    assert_eq!(code(&dual), 0);
    let bad = ginv(&["sum", "--ring", "zmod:8", "--mode", "core", "--a", "1", "--b", "3"]);
    assert_eq!(code(&bad), 2);
    let v = stdout_json(&bad);
    assert_eq!(v["error"], "PreconditionViolated");
    assert_eq!(v["failed"], json!(["ab=0", "a*b=0"]));
    let group = ginv(&["sum", "--ring", "zmod:8", "--mode", "group", "--a", "0", "--b", "5"]);
    assert_eq!(stdout_json(&group)["result"], json!(5));
}

#[test]
fn classify_table_and_jobs() {
    let seq = ginv(&["--jobs", "1", "classify", "--ring", "mat:zmod:2:2", "--format", "table"]);
    let par = ginv(&["--jobs", "4", "classify", "--ring", "mat:zmod:2:2", "--format", "table"]);
    assert_eq!(code(&seq), 0);
    assert_eq!(seq.stdout, par.stdout);
    let text = String::from_utf8(seq.stdout).unwrap();
    assert!(text.starts_with("ring mat:zmod:2:2 (16 elements)\n"));
    assert_eq!(text.lines().count(), 18);

    let json = stdout_json(&ginv(&["classify", "--ring", "zmod:8"]));
    let core: Vec<Value> =
        json["rows"].as_array().unwrap().iter().filter(|r| r["in_R_core"] == json!(true)).map(|r| r["element"].clone()).collect();
    assert_eq!(core, [json!(0), json!(1), json!(3), json!(5), json!(7)]);
}

#[test]
fn ring_size_guard_is_configurable() {
    let bin = env!("CARGO_BIN_EXE_ginv");
    let out = Command::new(bin).args(["classify", "--ring", "zmod:8"]).env("GINV_MAX_RING_SIZE", "4").output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit of 4"));
    let args = ["compute", "--ring", "mat:zmod:5:3", "--kind", "group", "--element", "[[1,0,0],[0,0,0],[0,0,0]]"];
    let refused = Command::new(bin).args(args).env("GINV_MAX_RING_SIZE", "1000").output().unwrap();
    assert_eq!(code(&refused), 1);
    assert!(String::from_utf8_lossy(&refused.stderr).contains("5^9 elements"));
    let raised = Command::new(bin).args(args).env("GINV_MAX_RING_SIZE", "2000000").output().unwrap();
    assert_eq!(code(&raised), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&ginv(&["compute", "--kind", "core", "--element", "3"])), 1);
    assert_eq!(code(&ginv(&["compute", "--ring", "zmod:x", "--kind", "core", "--element", "3"])), 1);
    assert_eq!(code(&ginv(&["compute", "--ring", "zmod:8", "--kind", "bogus", "--element", "3"])), 1);
    assert_eq!(code(&ginv(&["compute", "--ring", "mat:rat:2", "--kind", "core", "--element", "[[1,0]]"])), 1);
    assert_eq!(code(&ginv(&["compute", "--ring", "zmod:8", "--kind", "core", "--element-file", "/no/such/file"])), 1);
    assert_eq!(code(&ginv(&["--help"])), 0);
}

#[test]
fn table_ring_from_file() {
    // Z2 × Z2 with the coordinate swap as involution; index = x + 2y.
    let desc = json!({
        "kind": {
            "type": "table",
            "size": 4,
            "add": [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]],
            "mul": [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]],
            "star": [0, 2, 1, 3]
        },
        "involution": "explicit_map"
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ring.json");
    fs::write(&path, desc.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let unit = ginv(&["compute", "--ring-file", p, "--kind", "core", "--element", r#"{"idx": 3}"#]);
    assert_eq!(code(&unit), 0);
    assert_eq!(stdout_json(&unit)["result"], json!({"idx": 3}));
    // e = (1, 0) has e*e = 0, so no {1,3}-inverse.
    let e = ginv(&["compute", "--ring-file", p, "--kind", "core", "--element", r#"{"idx": 1}"#]);
    assert_eq!(code(&e), 2);
    assert_eq!(stdout_json(&e)["because"], "Not13Invertible");
}
