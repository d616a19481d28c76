use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deformcalc"))
        .args(args)
        .env_remove("DEFCALC_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_values(text: &str, column: usize) -> Vec<f64> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').nth(column).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn hausdorff_of_identity_is_the_prefactor() {
    let out = cli(&[
        "deriv",
        "--op",
        "hausdorff",
        "--zeta",
        "0.5",
        "--l0",
        "1",
        "--fn",
        "x",
        "--grid",
        "0:2:5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("x,value"));
    let xs = csv_values(&text, 0);
    let vs = csv_values(&text, 1);
    assert_eq!(xs, [0.0, 0.5, 1.0, 1.5, 2.0]);
    for (x, v) in xs.iter().zip(&vs) {
        assert!((v - (x + 1.0f64).sqrt()).abs() <= 1e-15);
    }
}

#[test]
fn map_reports_q_one() {
    let out = cli(&["map", "--zeta", "1", "--l0", "1", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "map");
    assert_eq!(v["rows"][0]["q"], 1.0);
    assert_eq!(v["rows"][0]["zeta"], 1.0);
}

#[test]
fn map_inverse_direction() {
    let out = cli(&["map", "--q", "0", "--l0", "2.5"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("q,zeta,l0,first_order_residual_bound"));
    assert_eq!(csv_values(&text, 1), [-1.5]);
}

#[test]
fn mittag_leffler_at_one_is_e() {
    let out = cli(&["ml", "--alpha", "1", "--z", "1"]);
    let v = csv_values(&stdout(&out), 1)[0];
    assert!((v - std::f64::consts::E).abs() <= 1e-14);
}

#[test]
fn format_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_deformcalc"))
        .args(["ml", "--alpha", "2", "--z", "0"])
        .env("DEFCALC_FORMAT", "json")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"][0]["value"], 1.0);
    let keys: Vec<_> = v["params"].as_object().unwrap().keys().cloned().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = cli(&[
        "expand",
        "--zeta",
        "0.5",
        "--l0",
        "1",
        "--order",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv_values(&text, 1), [1.0, 0.5, -0.125]);
}

#[test]
fn solve_emits_residual_columns() {
    let out = cli(&["solve", "--op", "q", "--q", "0.5", "--grid", "0:2:11"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("x,value,closed_form,residual"));
    assert!(csv_values(&text, 3).iter().all(|r| *r <= 1e-7));
    let last = csv_values(&text, 2).pop().unwrap();
    assert!((last - 4.0).abs() <= 1e-12);
}

#[test]
fn parse_error_is_rendered_with_caret() {
    let out = cli(&["deriv", "--op", "classical", "--fn", "2*", "--grid", "0:1:3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("byte 2"), "{err}");
    assert!(err.contains("expected operand"), "{err}");
    assert!(err.lines().any(|l| l == "  ^"), "{err}");
}

#[test]
fn config_errors_name_the_flag() {
    let out = cli(&["deriv", "--op", "q", "--fn", "x", "--grid", "0:1:3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--q"));
    let out = cli(&["deriv", "--op", "q", "--q", "0.5", "--fn", "x", "--grid", "3:1:3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cli(&["ml", "--alpha", "1", "--z", "1", "--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_errors_report_operator_and_point() {
    let out = cli(&[
        "deriv",
        "--op",
        "hausdorff",
        "--zeta",
        "0.5",
        "--l0",
        "1",
        "--fn",
        "x",
        "--grid",
        "-2:0:3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("hausdorff at x = -2"), "{err}");
    let out = cli(&["ml", "--alpha", "0.5", "--z", "-10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn limit_form_requires_support() {
    let out = cli(&[
        "deriv", "--op", "gl", "--alpha", "0.5", "--fn", "x", "--grid", "0:1:3", "--form", "limit",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--form"));
}

#[test]
fn selftest_passes() {
    let out = cli(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_end().ends_with("0 failed"));
}
