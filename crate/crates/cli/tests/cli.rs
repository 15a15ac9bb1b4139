use umbral_lab_cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("umbral-lab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn compute_xi() {
    assert_eq!(invoke(&["compute", "xi", "--n", "2"]), (EXIT_OK, "5/2\n".into(), String::new()));
    assert_eq!(invoke(&["compute", "xi2", "--n", "3"]).1, "53/9\n");
    assert_eq!(invoke(&["compute", "xi", "--n", "1"]).1, "2\n");
}

#[test]
fn compute_integers_and_polys() {
    assert_eq!(invoke(&["compute", "derangement", "--n", "6"]).1, "265\n");
    assert_eq!(invoke(&["compute", "derangement", "--n", "0"]).1, "1\n");
    assert_eq!(invoke(&["compute", "factorial", "--n", "10"]).1, "3628800\n");
    assert_eq!(invoke(&["compute", "dpoly", "--n", "3"]).1, "2 + 3*x + x^3\n");
    assert_eq!(invoke(&["compute", "dpoly", "--n", "0"]).1, "1\n");
    assert_eq!(invoke(&["compute", "xi2-scaled", "--n", "3"]).1, "159\n");
}

#[test]
fn compute_domain_errors() {
    let (code, out, err) = invoke(&["compute", "xi", "--n", "0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("n >= 1"), "{err}");
    assert_eq!(invoke(&["compute", "chain", "--n", "0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["compute", "xi", "--max-n", "3"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["compute", "what", "--n", "3"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["compute", "xi", "--n", "2", "--max-n", "3"]).0, EXIT_USAGE);
}

#[test]
fn approx_is_opt_in_and_labelled() {
    let (code, out, _) = invoke(&["compute", "xi", "--n", "3", "--approx", "5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "26/9\n~ 2.88889 (approximate)\n");
    assert_eq!(invoke(&["compute", "derangement", "--n", "3", "--approx", "2"]).0, EXIT_USAGE);
    let (_, table, _) = invoke(&["table", "xi", "--max-n", "2", "--format", "csv"]);
    assert!(!table.contains('.'));
}

#[test]
fn compute_json() {
    let (_, out, _) = invoke(&["compute", "xi", "--n", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["value"], "5/2");
    assert_eq!(v[0]["n"], "2");
}

#[test]
fn chain_prints_six_lines() {
    let (code, out, _) = invoke(&["compute", "chain", "--n", "2"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[..6].iter().all(|l| l.ends_with("= 18")));
    let (code, _, _) = invoke(&["compute", "chain", "--n", "5", "--inject-fault", "3"]);
    assert_eq!(code, EXIT_FAILED);
}

#[test]
fn verify_summary() {
    let (code, out, _) = invoke(&["verify", "conjecture", "--max-n", "50"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "conjecture: 50/50 pass\n");
    let (code, out, _) = invoke(&["verify", "eq22", "--max-n", "5", "--jobs", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "eq22: 6/6 pass\n");
    assert_eq!(invoke(&["verify", "chain", "--n", "7"]).1, "chain: 1/1 pass\n");
}

#[test]
fn verify_all_and_faults() {
    let (code, out, _) = invoke(&["verify", "all", "--max-n", "20"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().count(), 7);
    let (code, out, _) = invoke(&["verify", "all", "--max-n", "20", "--inject-fault", "2"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("FAIL"));
}

#[test]
fn verify_json_follows_report_schema() {
    let (code, out, _) = invoke(&["verify", "eq23", "--max-n", "4", "--format", "json", "--inject-fault", "4"]);
    assert_eq!(code, EXIT_FAILED);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 5);
    let ns: Vec<u64> = reports.iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [0, 1, 2, 3, 4]);
    let failing = &reports[4];
    assert_eq!(failing["identity"], "EQ23");
    assert_eq!(failing["passed"], false);
    let w = &failing["witnesses"][0];
    assert!(w["point"].is_string() && w["lhs"].is_string() && w["rhs"].is_string());
    assert!(reports[..4].iter().all(|r| r["passed"] == true && r["witnesses"].as_array().unwrap().is_empty()));
}

#[test]
fn verify_usage_errors() {
    assert_eq!(invoke(&["verify", "all", "--max-n", "0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["verify", "conjecture", "--n", "0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["verify", "all", "--max-n", "3", "--jobs", "0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["verify", "all"]).0, EXIT_USAGE);
}

#[test]
fn table_gap_column_is_n() {
    let (code, out, _) = invoke(&["table", "all", "--max-n", "25", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, ["n", "derangement", "xi_scaled", "xi2_scaled", "xi", "xi2", "xi2_minus_xi"]);
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[6], cells[0]);
        rows += 1;
    }
    assert_eq!(rows, 25);
    assert!(!out.contains('\r'));
}

#[test]
fn table_formats() {
    let (_, md, _) = invoke(&["table", "xi", "--max-n", "2", "--format", "markdown"]);
    assert!(md.starts_with("| n | derangement |"));
    assert!(md.contains("| 2 | 1 | 10 | 18 | 5/2 | 9/2 | 2 |"));
    let (_, json, _) = invoke(&["table", "xi", "--max-n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[2]["xi2"], "53/9");
    let (_, text, _) = invoke(&["table", "xi", "--max-n", "3", "--approx", "3"]);
    assert!(text.contains("2.889") && text.contains("5.889"));
}

#[test]
fn bench_checks_agreement_first() {
    let (code, out, _) = invoke(&["bench", "xi2", "--max-n", "5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 6);
    // xi2_via_derangement reads D_k, so a fault breaks agreement
    let (code, out, _) = invoke(&["bench", "xi2", "--max-n", "5", "--inject-fault", "1"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("disagree") && !out.contains("_us"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("umbral-lab"));
}
