use std::process::{Command, Output};

fn exzero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exzero")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn non_squarefree_modulus_is_a_usage_error() {
    let o = exzero(&["moments", "--q", "9", "--x", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not square-free"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["moments", "--q", "2"][..],
        &["goldbach", "--n-min", "200", "--n-max", "100"][..],
        &["chain", "--x", "5000", "--limit", "1000"][..],
        &["zeros", "--threads", "0"][..],
        &["zeros", "--format", "xml"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(exzero(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn csv_schema() {
    let o = exzero(&["moments", "--q", "3,5", "--x", "1e4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# exzero-schema v1"));
    assert_eq!(lines.next(), Some("# command: moments"));
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body[0].starts_with("q,x,moment,"));
    assert_eq!(body.len(), 3);
    assert!(body[1].starts_with("3,10000,"));
    assert!(body.iter().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn json_schema() {
    let o = exzero(&["zeros", "--q", "3,7", "--step", "0.01", "--self-test", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "exzero-schema v1");
    assert_eq!(v["command"], "zeros");
    assert_eq!(v["meta"]["c3"], 1);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["table"], "zeros");
    assert!(rows[0]["beta"].is_null());
    assert_eq!(rows[2]["table"], "self_test");
    assert_eq!(rows[2]["pass"], true);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let out = dir.path().join("report.csv");
    std::fs::write(&cfg, "# chain settings\nq = 15\nx = 4e4\nc3 = 2\nformat = json\n").unwrap();
    let o = exzero(&[
        "chain",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
        "--what-if",
        "0.9,1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# exzero-schema v1\n# command: chain\n"));
    assert!(text.contains("# c3: 2\n"));
    assert!(text.contains("# x: 40000\n"));
    let what_if: Vec<&str> = text.lines().skip_while(|l| *l != "# table: what_if").skip(2).take_while(|l| !l.starts_with('#')).collect();
    assert_eq!(what_if.len(), 2);
    // x = 4e4 < 15⁴: the run must say it is outside the intended regime.
    assert!(stderr(&o).contains("x = 40000 < q^4"));
}

#[test]
fn bad_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = exzero(&["zeros", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key"));
    let o = exzero(&["zeros", "--config", dir.path().join("missing.conf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verification_failure_exits_1() {
    // An absurdly tight tolerance cannot be met by floating point.
    let o = exzero(&["verify-lemmas", "--q", "15,105,211", "--tol-twisted-gauss", "1e-300"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("# passed: false"));
}

#[test]
fn verify_lemmas_with_special_moduli() {
    let o = exzero(&["verify-lemmas", "--q", "4,8,15", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("\ngauss-sum,4,"));
    assert!(text.contains("\ngauss-sum,8,"));
    assert!(text.contains("\nramanujan-twisted,15,"));
    assert!(!text.contains("\nramanujan,8,"));
}

#[test]
fn goldbach_small_run() {
    let o = exzero(&[
        "goldbach", "--n-min", "1000", "--n-max", "1010", "--n-step", "2", "--bound-min", "1000",
        "--bound-max", "20000", "--q", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    // r(1000) counts ordered pairs of odd primes: 2·28 = 56.
    assert!(text.contains("\n1000,56,"), "{text}");
    assert!(text.contains("# table: pair_bound\n"));
}
