use std::process::{Command, Output};

fn flagsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagsplit"))
        .args(args)
        .env_remove("FLAGSPLIT_OUT_DIR")
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn all_checks_pass_for_sl5() {
    let out = flagsplit(&["verify", "--family", "sl", "--n", "5", "--r", "2", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    let orders = checks.iter().find(|c| c["name"] == "orders").unwrap();
    assert_eq!(orders["payload"]["factors"], serde_json::json!([1, 2, 2, 1]));
    assert_eq!(orders["payload"]["total"], 6);
    assert_eq!(orders["payload"]["expected"], 6);
    let rnc = checks.iter().find(|c| c["name"] == "rnc").unwrap();
    assert_eq!(rnc["payload"]["certificate"]["length"], 10);
    assert!(rnc["payload"]["certificate"]["order"].is_array());
    assert!(checks.iter().all(|c| c["seconds"].is_null()));
}

#[test]
fn sl2_splits_for_three_primes() {
    let out = flagsplit(&["verify", "--family", "sl", "--n", "2", "--r", "1", "--p", "3,5,7", "--checks", "splitcoeff"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let verdicts = v["checks"][0]["payload"]["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 3);
    assert!(verdicts.iter().all(|x| x["splits"] == true && x["coefficient"] == "1"));
}

#[test]
fn sp2_reports_orders_and_specialization() {
    let out = flagsplit(&["verify", "--family", "sp", "--n", "2", "--checks", "orders,specializations"]);
    let v = json(&out);
    assert_eq!(v["checks"][0]["payload"]["factors"], serde_json::json!([1, 2]));
    assert_eq!(v["checks"][0]["status"], "pass");
    let spec = &v["checks"][1]["payload"];
    assert_eq!(spec["membership_exact"], true);
    assert_eq!(spec["upper_bound_matches"], true);
    // The family found has fewer parameters than stated, which is reported as a failure.
    assert_eq!(spec["param_count_matches"], false);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        vec!["verify", "--family", "sl", "--n", "4"],
        vec!["verify", "--family", "sp", "--n", "2", "--r", "1"],
        vec!["verify", "--family", "sl", "--n", "4", "--r", "2", "--p", "9"],
        vec!["verify", "--family", "sl", "--n", "4", "--r", "2", "--checks", "skew"],
        vec!["verify", "--family", "sl", "--n", "4", "--r", "2", "--checks", "bogus"],
        vec!["verify", "--family", "gl", "--n", "4"],
        vec!["rnc", "--family", "sp", "--n", "2"],
    ] {
        assert_eq!(flagsplit(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn empty_check_list_exits_zero() {
    let out = flagsplit(&["verify", "--family", "so", "--n", "3", "--checks", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["checks"].as_array().unwrap().is_empty());
}

#[test]
fn guard_trip_exits_three() {
    let out = flagsplit(&["verify", "--family", "sl", "--n", "4", "--r", "2", "--p", "7", "--checks", "splitcoeff", "--max-terms", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["checks"][0]["status"], "not-computed");
    assert_eq!(v["checks"][0]["payload"]["verdicts"][0]["not_computed"]["guard"], "max_terms");
}

#[test]
fn out_dir_from_environment() {
    let dir = std::env::temp_dir().join(format!("flagsplit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_flagsplit"))
        .args(["verify", "--family", "so", "--n", "2", "--format", "text", "--checks", "orders"])
        .env("FLAGSPLIT_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.join("so2.txt")).unwrap();
    assert!(text.contains("[PASS] orders"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn golden_and_rnc_subcommands() {
    let out = flagsplit(&["appendix-check", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
    let out = flagsplit(&["rnc", "--family", "sl", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("order: "));
    assert!(text.trim_end().ends_with("f6: 1"));
}
