use std::process::{Command, Output};

fn qso3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qso3")).args(args).output().expect("spawn qso3")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn be2_table_example_row() {
    let o = qso3(&["be2-table", "--lambda", "4", "--tau", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,L,tau,rme_raising,rme_diagonal,be2"));
    assert_eq!(lines.next(), Some("4,0,0,10.5830052443,0,22.4"));
}

#[test]
fn be2_json_mirrors_header() {
    let o = qso3(&["be2-table", "--lambda", "2", "--tau", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let first = v[0].as_object().unwrap();
    let keys: Vec<&str> = first.keys().map(String::as_str).collect();
    for k in ["lambda", "L", "tau", "rme_raising", "rme_diagonal", "be2"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v[0]["be2"], serde_json::json!(8.0));
    assert!(v[1]["be2"].is_null());
}

#[test]
fn qnum_examples() {
    let o = qso3(&["qnum", "--x", "0", "--tau", "0.3"]);
    assert_eq!(stdout(&o), "tau,value\n0.3,0\n");
    let o = qso3(&["qnum", "--x", "3", "--tau", "0.2"]);
    assert_eq!(stdout(&o), "tau,value\n0.2,3.16214474368\n");
    let o = qso3(&["qnum", "--x", "2", "--scale", "2", "--tau", "0.1"]);
    assert_eq!(stdout(&o), "tau,value\n0.1,2.04013351124\n");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let args = ["rme", "--lambda", "2:3", "--tau=-0.2,0.4", "--oracle"];
    let direct = qso3(&args);
    let mut with_file: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_file.extend(["--output", p]);
    let o = qso3(&with_file);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn cg_column_and_single_agree() {
    let col = stdout(&qso3(&["cg", "--j1", "1", "--j2", "1/2", "--j", "3/2", "--m", "1/2", "--tau", "0.25"]));
    let one = stdout(&qso3(&[
        "cg", "--j1", "1", "--m1", "0", "--j2", "1/2", "--m2", "1/2", "--j", "3/2", "--m", "1/2", "--tau", "0.25",
    ]));
    let row = one.lines().nth(1).unwrap();
    assert!(col.lines().any(|l| l == row), "{row} not in\n{col}");
}

#[test]
fn exit_codes() {
    assert_eq!(qso3(&["nonsense"]).status.code(), Some(2));
    assert_eq!(qso3(&["qnum", "--x", "1"]).status.code(), Some(2));
    assert_eq!(qso3(&["qnum", "--x", "1", "--tau", "inf"]).status.code(), Some(2));
    assert_eq!(qso3(&["be2-table", "--lambda", "4", "--tau", "1:0:0"]).status.code(), Some(2));
    assert_eq!(qso3(&["basis", "--lambda", "2", "--l", "1", "--m", "0", "--tau", "0"]).status.code(), Some(2));
    assert_eq!(qso3(&["verify", "--nmax", "6"]).status.code(), Some(2));
    assert_eq!(qso3(&["verify", "--tau", "0.2", "--lambda-max", "2", "--nmax", "6", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(qso3(&["--help"]).status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_qso3"))
        .args(["qnum", "--x", "1", "--tau", "0"])
        .env("QSO3_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_failure_exits_one_with_report() {
    let o = qso3(&["verify", "--tau", "0.3", "--lambda-max", "2", "--nmax", "6", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("suite,check,tag,tau,residual,tolerance,status\n"));
    assert!(text.lines().any(|l| l.ends_with(",fail")));
}

#[test]
fn verify_small_run_passes_and_lists_tags() {
    let o = Command::new(env!("CARGO_BIN_EXE_qso3"))
        .args(["verify", "--tau=-0.3,0.5", "--lambda-max", "4", "--nmax", "8"])
        .env("QSO3_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for tag in ["Eq. (s1)", "Eq. (v16)", "Eq. (v22c)", "Eq. (q11)", "Eq. (b16)", "Eq. (q14a)", "Eq. (t8a)"] {
        assert!(text.contains(tag), "missing {tag}");
    }
}
