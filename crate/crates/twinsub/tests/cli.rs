use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    run_env(args, None)
}

fn run_env(args: &[&str], env: Option<&str>) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["twinsub"];
    argv.extend_from_slice(args);
    let code = twinsub::run(argv, env, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn lines(s: &str) -> Vec<Value> {
    s.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn exact_reports_counts_as_strings() {
    let (code, out) = run(&["exact", "--k", "3"]);
    assert_eq!(code, 0);
    let v = lines(&out);
    assert_eq!(v.len(), 3);
    assert_eq!(v[2]["N"], "45");
    assert_eq!(v[0]["profile"], serde_json::json!([1, 2]));
    assert_eq!(v[0]["M"], "6");

    let (code, out) = run(&["exact", "--n", "5", "--k", "1", "--no-table"]);
    assert_eq!(code, 0);
    let v = lines(&out);
    assert_eq!(v[0]["m"], "324/125");
    assert_eq!(v[0]["m_ratio"], "1620/625");
    assert_eq!(v[0]["S"], "1620");

    let (_, out) = run(&["exact", "--k", "4", "--d-cap", "2", "--no-table"]);
    assert_eq!(lines(&out)[0]["N"], "576");
}

#[test]
fn domain_errors_exit_two() {
    let (code, out) = run(&["exact", "--n", "4", "--k", "2"]);
    assert_eq!(code, 2);
    let v = lines(&out);
    assert_eq!(v[0]["error"]["kind"], "domain");
    assert!(v[0]["error"]["message"].as_str().unwrap().contains("n must exceed 2k"));

    for args in [
        &["thresholds", "--delta", "2"][..],
        &["thresholds", "--delta", "-0.1"],
        &["thresholds", "--eps2", "0.5"],
        &["bound", "--k", "1"],
        &["exact", "--k", "0"],
        &["exact", "--k", "3", "--d-cap", "0"],
        &["integral"],
        &["sample", "--n", "5", "--trials", "0"],
        &["verify", "nonsense"],
        &["verify", "oracle", "--nmax", "12"],
        &["exact", "--k", "x"],
        &["--tol", "2", "saddle"],
    ] {
        let (code, out) = run(args);
        assert_eq!(code, 2, "{args:?}: {out}");
        assert!(lines(&out)[0]["error"]["message"].is_string());
    }
    assert_eq!(run_env(&["exact", "--k", "2"], Some("12")).0, 2);
}

#[test]
fn help_is_not_an_error() {
    let (code, out) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "routes", "--kmax", "40"][..],
        &["verify", "oracle", "--nmax", "6"],
        &["verify", "saddle", "--k", "10", "--tol", "1e-6"],
        &["verify", "cayley", "--kmax", "12"],
        &["verify", "montecarlo", "--n", "9", "--k", "2", "--trials", "4000"],
    ] {
        let (code, out) = run(args);
        assert_eq!(code, 0, "{args:?}");
        let v = lines(&out);
        let last = v.last().unwrap();
        assert_eq!(last["passed"], true);
        assert_eq!(last["checks"].as_u64().unwrap() as usize, v.len() - 1);
        assert!(v[..v.len() - 1].iter().all(|c| c["passed"] == true));
    }
}

#[test]
fn verify_failure_exits_one() {
    // No quadrature reaches this tolerance.
    let (code, out) = run(&["verify", "saddle", "--k", "5", "--tol", "1e-300"]);
    assert_eq!(code, 1);
    let v = lines(&out);
    let last = v.last().unwrap();
    assert_eq!(last["passed"], false);
    assert_eq!(last["first_failure"]["check"], "k=5 cap=unbounded");
}

#[test]
fn precision_comes_from_the_environment() {
    let (_, a) = run_env(&["bound", "--k", "4"], Some("128"));
    assert_eq!(lines(&a)[0]["precision_bits"], 128);
    let (_, b) = run_env(&["bound", "--k", "4", "--precision-bits", "192"], Some("128"));
    assert_eq!(lines(&b)[0]["precision_bits"], 192);
    let (_, c) = run(&["bound", "--k", "4"]);
    assert_eq!(lines(&c)[0]["precision_bits"], 256);
}

#[test]
fn bound_and_integral_bracket_the_exact_value() {
    let (_, b) = run(&["bound", "--k", "12", "--refine"]);
    let (_, i) = run(&["integral", "--k", "12"]);
    let (b, i) = (&lines(&b)[0], &lines(&i)[0]);
    let exact = b["exact_log_N"].as_f64().unwrap();
    assert!(b["value"].as_f64().unwrap() >= exact);
    assert!(i["relative_error"].as_f64().unwrap() < 1e-12);
    assert!(b["value_decimal"].as_str().unwrap().contains('.'));
}

#[test]
fn sample_reports() {
    let (code, out) = run(&["sample", "--n", "3", "--k", "1", "--trials", "20000", "--seed", "7", "--report", "summary"]);
    assert_eq!(code, 0);
    let v = lines(&out);
    assert_eq!(v.len(), 1);
    let mean = v[0]["estimate"]["mean"].as_f64().unwrap();
    let se = v[0]["estimate"]["std_error"].as_f64().unwrap();
    assert!((mean - 2.0 / 3.0).abs() < 5.0 * se);

    let (_, out) = run(&["sample", "--n", "40", "--trials", "25", "--report", "max-twin"]);
    let v = lines(&out);
    assert_eq!(v.len(), 26);
    assert!(v[0]["max_twin_size"].is_u64());
    assert!(v[25]["estimate"].is_null());
    let hist: u64 = v[25]["max_twin_histogram"].as_array().unwrap().iter().map(|p| p[1].as_u64().unwrap()).sum();
    assert_eq!(hist, 25);

    let (_, out) = run(&["sample", "--n", "20", "--k", "1", "--trials", "10"]);
    let v = lines(&out);
    assert_eq!(v.len(), 11);
    let from_lines: u64 = v[..10]
        .iter()
        .map(|t| t["twin_counts"].as_array().unwrap().iter().find(|p| p[0] == 1).map_or(0, |p| p[1].as_u64().unwrap()))
        .sum();
    assert_eq!(from_lines as f64 / 10.0, v[10]["estimate"]["mean"].as_f64().unwrap());
}

#[test]
fn thresholds_table() {
    let (code, out) = run(&["thresholds", "--n", "1000,1000000", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut rows = out.lines();
    assert_eq!(
        rows.next().unwrap(),
        "op,n,delta,K_n,k_n,part_a_log,part_a_qualifier,part_b_log,part_b_qualifier,eps2,precision_bits"
    );
    assert!(rows.next().unwrap().starts_with("thresholds,1000,0.5,9269,240,"));
    assert!(rows.next().unwrap().starts_with("thresholds,1000000,0.5,3462586,8387,"));
}

#[test]
fn lemma1_command() {
    let (code, out) = run(&["lemma1", "--radii", "4", "--phases", "6", "--precision-bits", "128"]);
    assert_eq!(code, 0);
    let v = &lines(&out)[0];
    assert_eq!(v["passed"], true);
    assert_eq!(v["points"], 25);
    let (code, _) = run(&["lemma1", "--radii", "4", "--phases", "6", "--precision-bits", "128", "--alpha", "5"]);
    assert_eq!(code, 1);
}

#[test]
fn binary_matches_library() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_twinsub"))
        .args(["exact", "--k", "5", "--n", "11"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let (_, lib) = run(&["exact", "--k", "5", "--n", "11"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib);
    let bad = std::process::Command::new(env!("CARGO_BIN_EXE_twinsub")).args(["exact", "--n", "4", "--k", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
