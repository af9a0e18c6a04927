use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const EVENS: &str = r#"{"op":"periodic","m":2,"residues":[0]}"#;

fn kneser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kneser-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn density_of_evens() {
    let path = scratch("evens.json");
    std::fs::write(&path, EVENS).unwrap();
    let out = kneser(&["density", "--expr", path.to_str().unwrap(), "--family", "sym", "--n", "1000", "--expect", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "density");
    assert!((r["report"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-3);
}

#[test]
fn failed_assertion_exits_1() {
    let out = kneser(&["density", "--expr", EVENS, "--n", "1000", "--expect", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["pass"], false);
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(kneser(&["density", "--expr", "{oops", "--n", "10"]).status.code(), Some(2));
    assert_eq!(kneser(&["density", "--n", "10"]).status.code(), Some(2));
    assert_eq!(kneser(&["appendix", "--scenario", "e1", "--mI", "17/50", "--n", "10000"]).status.code(), Some(2));
    assert_eq!(kneser(&["sturmian", "--alpha", "1,2"]).status.code(), Some(2));
}

#[test]
fn resource_errors_exit_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_kneser"))
        .args(["density", "--expr", EVENS, "--n", "100000"])
        .env("KNESER_MAX_ELEMENTS", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("KNESER_MAX_ELEMENTS"));
}

#[test]
fn kemperman_up_to_order_8() {
    let out = kneser(&["kemperman", "--order-max", "8", "--i1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["report"]["violations"], 0);
    assert_eq!(r["report"]["groups"].as_array().unwrap().len(), 14);
    assert_eq!(r["report"]["i1_failures"], 0);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["kemperman", "--order-min", "9", "--order-max", "10", "--samples", "3000", "--seed", "7"];
    let a = kneser(&args);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "2"]);
    let b = kneser(&threaded);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["seed"], 7);
    let c = kneser(&["kemperman", "--order-min", "9", "--order-max", "10", "--samples", "3000", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn appendix_e2_at_full_scale() {
    let csv = scratch("e2.csv");
    let out = kneser(&["appendix", "--scenario", "e2", "--mI", "2/5", "--n", "1000000", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["report"]["scenario"]["pass"], true);
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("quantity,n,size,count,ratio\n"));
    assert!(text.contains("lower_density_ab,1000000,2000001,"));
}

#[test]
fn appendix_convergence() {
    let out = kneser(&["appendix", "--scenario", "e3", "--mI", "1/5", "--n", "200000", "--convergence"]);
    assert_eq!(out.status.code(), Some(0));
    let conv = report(&out)["report"]["convergence"].as_array().unwrap().clone();
    assert!(!conv.is_empty());
    assert!(conv.iter().all(|c| c["ok"] == true));
}

#[test]
fn out_file_matches_stdout() {
    let path = scratch("folner.json");
    let args = ["folner-defect", "--group", "Z", "--g", "1", "--n-max", "5"];
    let stdout = kneser(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let quiet = kneser(&with_out);
    assert!(quiet.stdout.is_empty());
    assert_eq!(std::fs::read(path).unwrap(), stdout);
    let r: Value = serde_json::from_slice(&stdout).unwrap();
    assert_eq!(r["report"]["defects"][1]["defect"], "2/5");
}

#[test]
fn every_subcommand_emits_the_envelope() {
    let sturmian = r#"{"op":"sturmian","spec":{"alpha":{"p":-1,"q":1,"r":2,"d":5},"interval":{"lo":"0","hi":"3/10"}}}"#;
    let cases: Vec<Vec<&str>> = vec![
        vec!["density", "--expr", EVENS, "--n", "100"],
        vec!["banach", "--expr", EVENS, "--len", "10", "--search", "-50,50"],
        vec!["sturmian", "--n", "1000", "--tol", "0.05", "--members", "0,9", "--shift-bound", "10"],
        vec!["kneser-z", "--a", sturmian, "--b", EVENS, "--n", "10000"],
        vec!["kemperman", "--group", "S3"],
        vec!["kneser-abelian", "--order-max", "6"],
        vec!["structure", "--expr", EVENS, "--window", "-1000,1000", "--run", "2,100"],
        vec!["cxmachine", "--scale", "4", "--check-scale", "2", "--oracle-scale", "1", "--l-lambda"],
        vec!["appendix", "--scenario", "base", "--mI", "3/10", "--n", "20000"],
        vec!["folner-defect", "--group", "Z[1/2]", "--g", "1:0", "--n-min", "2", "--n-max", "4"],
    ];
    for args in cases {
        let out = kneser(&args);
        let r = report(&out);
        assert_eq!(r["command"], args[0]);
        for key in ["schema_version", "seed", "pass", "report"] {
            assert!(r.get(key).is_some(), "{} lacks {key}", args[0]);
        }
        assert_eq!(out.status.code(), Some(if r["pass"] == true { 0 } else { 1 }), "{args:?}");
    }
}

#[test]
fn sturmian_members_on_small_window() {
    let r = report(&kneser(&["sturmian", "--n", "100000", "--members", "0,9", "--shift-bound", "5"]));
    assert_eq!(r["pass"], true);
    assert_eq!(r["report"]["members"], serde_json::json!([0, 2, 5]));
    assert_eq!(r["report"]["shift_n"], 1);
}
