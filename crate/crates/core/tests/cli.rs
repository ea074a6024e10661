use std::process::{Command, Output};

fn dp5(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dp5"))
        .args(args)
        .env_remove("DP5_WORKERS")
        .output()
        .expect("running dp5")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn count_both_at_one() {
    let o = dp5(&["count", "--B", "1", "--method", "both", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[2] == "4"));
}

#[test]
fn count_both_at_hundred() {
    let o = dp5(&["count", "--B", "100", "--method", "both", "--split", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows[0][2], rows[1][2]);
    let split: u64 = rows[1][3..6].iter().map(|s| s.parse::<u64>().unwrap()).sum();
    assert_eq!(split.to_string(), rows[1][2]);
}

#[test]
fn naive_refused_above_feasibility_bound() {
    let o = dp5(&["count", "--B", "1000", "--method", "naive"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_worker_env_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_dp5"))
        .args(["count", "--B", "5"])
        .env("DP5_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_dp5"))
        .args(["count", "--B", "5", "--format", "csv"])
        .env("DP5_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn constant_text_and_json() {
    let o = dp5(&["constant"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().next().unwrap().ends_with("1/864"));

    let o = dp5(&["constant", "--json", "--pmax", "10000"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["alpha"], "1/864");
    assert!(v["error"].as_f64().unwrap() > 0.0);
    assert!(v["omega"]["error_estimate"].as_f64().unwrap() > 0.0);
    assert!(v["euler"]["tail_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn constant_tolerances_agree() {
    let omega = |tol: &str| {
        let o = dp5(&["constant", "--json", "--tol", tol, "--pmax", "1000"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        (v["omega"]["value"].as_f64().unwrap(), v["omega"]["error_estimate"].as_f64().unwrap())
    };
    let (a, ea) = omega("1e-2");
    let (b, eb) = omega("1e-3");
    assert!((a - b).abs() <= ea + eb, "{a} ± {ea} vs {b} ± {eb}");
}

#[test]
fn verify_passes_and_catches_injected_fault() {
    let o = dp5(&["verify"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));

    let o = dp5(&["verify", "--inject-fault", "--format", "json"]);
    assert_eq!(code(&o), 4);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for check in v.as_array().unwrap() {
        let expect = check["check"] != "coprimality_equivalence";
        assert_eq!(check["passed"].as_bool().unwrap(), expect, "{check}");
    }
}

#[test]
fn deep_verify() {
    let o = dp5(&["verify", "--B", "200"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn predict_ratios_and_determinism() {
    let args = ["predict", "--B", "1000,10000", "--format", "csv", "--no-timing", "--pmax", "10000"];
    let one = dp5(&[&args[..], &["--workers", "1"]].concat());
    let two = dp5(&[&args[..], &["--workers", "2"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
    let text = stdout(&one);
    assert_eq!(text.lines().next().unwrap(), "B,method,count,na,nb1,nb2,main_term,ratio,seconds");
    for row in csv_rows(&one) {
        let ratio: f64 = row[7].parse().unwrap();
        assert!(ratio.is_finite() && ratio > 0.0);
        assert_eq!(row[8], "");
    }
}
