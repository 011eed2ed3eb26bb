use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsor-count")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn header_is_frozen() {
    let o = run(&["count", "--q", "2", "--nmax", "0"]);
    assert_eq!(stdout(&o).lines().next(), Some("n,method,count,predicted,ratio,seconds"));
    let golden = include_str!("golden/count_q3_n4_all.csv");
    assert_eq!(golden.lines().next(), Some("n,method,count,predicted,ratio,seconds"));
    assert!(golden.ends_with('\n') && !golden.contains('\r'));
}

#[test]
fn constant_maps_over_f3_by_every_method() {
    let o = run(&["count", "--q", "3", "--nmax", "0", "--method", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    let methods: Vec<&str> = r.iter().map(|row| row[1].as_str()).collect();
    assert_eq!(methods, ["torsor", "geometric", "moebius"]);
    assert!(r.iter().all(|row| row[2] == "2" && row[4].is_empty()));
}

#[test]
fn degree_one_is_empty() {
    let o = run(&["count", "--q", "2", "--nmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!((r[1][0].as_str(), r[1][2].as_str()), ("1", "0"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["count", "--q", "two", "--nmax", "1"][..],
        &["count", "--q", "6", "--nmax", "1"],
        &["count", "--q", "2", "--nmax", "15"],
        &["count", "--q", "2", "--nmax", "2", "--method", "bogus"],
        &["verify", "--suite", "bogus"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn json_has_the_csv_keys() {
    let o = run(&["count", "--q", "2", "--nmax", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    let arr = v.as_array().expect("array");
    assert_eq!(arr.len(), 5);
    let keys: Vec<&String> = arr[0].as_object().expect("object").keys().collect();
    for k in ["n", "method", "count", "predicted", "ratio", "seconds"] {
        assert!(keys.iter().any(|x| *x == k), "{k}");
    }
    assert!(arr[0]["ratio"].is_null());
    assert_eq!(arr[4]["count"], 144);
}

#[test]
fn out_flag_writes_the_table() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("t.csv");
    let o = run(&["count", "--q", "3", "--nmax", "4", "--method", "all", "--out", path.to_str().expect("utf-8 path")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).expect("written"), include_str!("golden/count_q3_n4_all.csv"));
}

#[test]
fn output_independent_of_threads() {
    let a = run(&["count", "--q", "3", "--nmax", "6", "--method", "all", "--threads", "1"]);
    let b = run(&["count", "--q", "3", "--nmax", "6", "--method", "all", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "--suite", "local", "--qv", "2,3,4,5"][..],
        &["verify", "--suite", "series", "--trunc", "6"],
        &["verify", "--suite", "decomposition", "--q", "2", "--instances", "10"],
        &["verify", "--suite", "moebius"],
        &["verify", "--suite", "kernel", "--q", "2", "--instances", "20"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        assert!(!out.is_empty() && out.lines().all(|l| l.starts_with("PASS\t")), "{args:?}");
    }
}

#[test]
fn verify_json_report() {
    let o = run(&["verify", "--suite", "moebius", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    let first = &v.as_array().expect("array")[0];
    for k in ["suite", "id", "anchor", "expected", "actual", "pass"] {
        assert!(first.get(k).is_some(), "{k}");
    }
}
