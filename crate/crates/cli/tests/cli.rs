use std::path::PathBuf;
use std::process::{Command, Output};

fn annihil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annihil"))
        .args(args)
        .env_remove("ANNIHIL_FIXTURE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("annihil-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn table_prints_every_character() {
    let o = annihil(&["table", "S3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("order 6"));
    assert!(out.lines().any(|l| l.starts_with("chi2") && l.contains("-1")));
    let o = annihil(&["table", "Q8", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["characters"].as_array().unwrap().len(), 5);
}

#[test]
fn construct_then_verify() {
    let dir = scratch("verify");
    assert!(annihil(&["quadratic", "23", "--out-dir", s(&dir)]).status.success());
    let el = dir.join("el.json");
    let field = dir.join("field.json");
    let values = dir.join("values.json");
    let cl = dir.join("classgroup.json");
    let o = annihil(&["construct", "--field", s(&field), "--values", s(&values), "--chi", "chi1", "--p", "3", "--out", s(&el)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&el).unwrap()).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["3", "-3"]));
    let o = annihil(&["verify", "--element", s(&el), "--classgroup", s(&cl)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("PASS\n"));

    // 1 - sigma does not kill cl(Q(sqrt(-23)))
    let text = std::fs::read_to_string(&el).unwrap().replace("\"3\"", "\"1\"").replace("\"-3\"", "\"-1\"");
    std::fs::write(&el, text).unwrap();
    let o = annihil(&["verify", "--element", s(&el), "--classgroup", s(&cl), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["outcome"], "FAIL");
    assert_eq!(r["witness"]["image"], serde_json::json!([2]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn vanishing_character_gives_zero_with_warning() {
    let dir = scratch("zero");
    let fixture: serde_json::Value = serde_json::from_str(include_str!("../../core/data/fixtures/s3_hilbert_m23.json")).unwrap();
    let field = dir.join("field.json");
    let values = dir.join("values.json");
    std::fs::write(&field, fixture["field"].to_string()).unwrap();
    std::fs::write(&values, r#"{"schema_version": 1, "entries": []}"#).unwrap();
    let o = annihil(&["construct", "--field", s(&field), "--values", s(&values), "--chi", "chi2", "--p", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("vanishes"));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["coefficients"].as_array().unwrap().iter().all(|c| c == "0"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_to_500_passes() {
    let o = annihil(&["sweep", "--quadratic", "--dmax", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(", 0 failures"));
    let o = annihil(&["sweep", "--quadratic", "--dmax", "200", "--p", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["cases"].as_array().unwrap().iter().all(|c| c["p"] == 5));
}

#[test]
fn reports_are_deterministic() {
    let a = annihil(&["report", "--json"]);
    let b = annihil(&["report", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let o = annihil(&["report", "--fixture", "q_zeta23"]);
    assert!(stdout(&o).lines().all(|l| l.starts_with("q_zeta23") && l.ends_with("ok")));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(annihil(&["construct"]).status.code(), Some(2));
    assert_eq!(annihil(&["table", "NoSuchGroup"]).status.code(), Some(2));
    assert_eq!(annihil(&["report", "--fixture", "missing"]).status.code(), Some(2));
    assert_eq!(annihil(&["sweep", "--dmax", "10"]).status.code(), Some(2));
}
