use std::process::{Command, Output};

fn abelfdb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelfdb")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn devlin_table() {
    let o = abelfdb(&["devlin", "--m", "3", "--cap", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("n=4: 6 x1.x1.x1 | 2 x1.x2 | 3 x2.x1 | 1 x3"), "{text}");
    assert_eq!(text.lines().count(), 5);
    assert!(stderr(&o).contains("runtime:"));

    let o = abelfdb(&["devlin", "--m", "2", "--cap", "1"]);
    assert_eq!(stdout(&o), "n=1: 1 e\nn=2: 1 x1\n");

    let o = abelfdb(&["devlin", "--m", "1"]);
    assert!(!o.status.success());
}

#[test]
fn devlin_json_uses_fraction_strings() {
    let o = abelfdb(&["devlin", "--m", "2", "--cap", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let third = &v[2]["series"]["terms"];
    assert_eq!(third[0]["word"], "x1.x1");
    assert_eq!(third[0]["coeff"], "2");
}

#[test]
fn antipode_commands() {
    let o = abelfdb(&["antipode", "--root", "1", "--word", "x2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("-a[1;x2] + a[1;x1]·a[1;e]"));

    let o = abelfdb(&["antipode", "--root", "2", "--word", "x1", "--alg", "both"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("MATCH") && !text.contains("MISMATCH"));

    let o = abelfdb(&["antipode", "--word", "x9", "--m", "3"]);
    assert!(!o.status.success());

    let o = abelfdb(&["antipode", "--grade", "3", "--all", "--alg", "both", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["matches"] == true));
}

#[test]
fn verify_suites() {
    let o = abelfdb(&["verify", "--suite", "fourway", "--m", "3", "--cap", "6"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = abelfdb(&["verify", "--suite", "hopf-axioms", "--grade", "6"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = abelfdb(&["verify", "--suite", "all", "--m", "2", "--cap", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stderr(&o).contains("runtime:"));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 7);
}

#[test]
fn verify_is_deterministic() {
    let a = abelfdb(&["verify", "--suite", "all", "--seed", "7", "--m", "2", "--cap", "4"]);
    let b = abelfdb(&["verify", "--suite", "all", "--seed", "7", "--m", "2", "--cap", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_csv() {
    let o = abelfdb(&["bench", "--grade", "4", "--m", "3", "--reps", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("grade,generator_count,classical_ns,coderivation_ns,classical_min_ns,coderivation_min_ns"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn simulate_center() {
    let o = abelfdb(&["simulate", "--preset", "cos-sin", "--omega", "2pi", "--r", "0.1", "--format", "text"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("CENTER OK"));

    let o = abelfdb(&["simulate", "--preset", "ramp"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("precondition"));

    let path = std::env::temp_dir().join(format!("abelfdb-trace-{}.csv", std::process::id()));
    let o = abelfdb(&["simulate", "--r", "0", "--steps", "100", "--trace", path.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,z[r=0]"));
    assert!(lines.all(|l| l.ends_with(",0")));
}

#[test]
fn fdb_and_abel() {
    let o = abelfdb(&["fdb", "--n", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("h~2 = "));

    let o = abelfdb(&["abel", "--m", "2", "--cap", "3", "--route", "feedback"]);
    let p = abelfdb(&["abel", "--m", "2", "--cap", "3", "--route", "realization"]);
    assert!(o.status.success() && p.status.success());
    assert_eq!(o.stdout, p.stdout);

    let r = abelfdb(&["abel", "--cap", "3", "--realization", "0 0 1,0 0 0 1;1;0 1"]);
    assert_eq!(r.stdout, o.stdout);
}
