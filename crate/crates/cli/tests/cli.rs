use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scx"))
        .args(args)
        .env_remove("SCX_SEED")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "core",
        "tests",
        "fixtures",
        name,
    ]
    .iter()
    .collect();
    p.to_str().unwrap().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn validate_s0_is_clean() {
    let o = scx(&["validate", &fixture("s0.json")]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v["valid"], true);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn s0_invariants() {
    let f = fixture("s0.json");
    let h = json(&scx(&["homology", &f]));
    assert_eq!(h["homology"]["4"], 1);
    let r = json(&scx(&["rho", &f, "--degree", "4"]));
    assert_eq!(r["rho"]["value"], "2");
    assert_eq!(r["lambda"]["value"], "inf");
    assert_eq!(scx(&["pages", &f]).status.code(), Some(0));
    assert_eq!(scx(&["abut", &f]).status.code(), Some(0));
    assert_eq!(scx(&["scheck", &f]).status.code(), Some(0));
    let t = json(&scx(&["stotal", &f]));
    assert_eq!(t["schema"], "scx/1 complex");
    assert_eq!(t["generators"].as_array().unwrap().len(), 3);
}

#[test]
fn psc_worked_example() {
    let o = scx(&["psc", "--rho-in", "1", "--rho-out", "5", "--const-C", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["obstructed"], true);
    assert_eq!(v["s2_lower_bound"], "96");
    let o = scx(&["psc", "--rho-in", "inf", "--rho-out", "5", "--const-C", "1"]);
    assert_eq!(json(&o)["vacuous"], true);
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"schema\": \"scx/1 complex\", ").unwrap();
    assert_eq!(
        scx(&["homology", p.to_str().unwrap()]).status.code(),
        Some(2)
    );
    std::fs::write(
        &p,
        r#"{"schema": "scx/1 complex", "generators": [], "differential": [], "extra": 1}"#,
    )
    .unwrap();
    assert_eq!(
        scx(&["validate", p.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        scx(&["psc", "--rho-in", "x", "--rho-out", "1", "--const-C", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(scx(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn invalid_data_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    let doc = r#"{"schema": "scx/1 complex",
        "generators": [{"id": "a", "degree": 1, "level": "0"}, {"id": "b", "degree": 0, "level": "3"}],
        "differential": [{"from": "a", "to": "b"}]}"#;
    std::fs::write(&p, doc).unwrap();
    let o = scx(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["valid"], false);
}

#[test]
fn gen_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["complex", "scomplex", "morse", "orbit", "corr", "novikov"] {
        let a = scx(&["gen", kind, "--seed", "7"]);
        let b = scx(&["gen", kind, "--seed", "7"]);
        assert_eq!(a.status.code(), Some(0), "{kind}");
        assert_eq!(a.stdout, b.stdout, "{kind}");
        let p = dir.path().join(format!("{kind}.json"));
        std::fs::write(&p, &a.stdout).unwrap();
        let v = scx(&["validate", p.to_str().unwrap()]);
        assert_eq!(
            v.status.code(),
            Some(0),
            "{kind}: {}",
            String::from_utf8_lossy(&v.stdout)
        );
    }
    let env_seeded = Command::new(env!("CARGO_BIN_EXE_scx"))
        .args(["gen", "complex"])
        .env("SCX_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(
        env_seeded.stdout,
        scx(&["gen", "complex", "--seed", "7"]).stdout
    );
}

#[test]
fn forced_hypothesis_instance_checks_out() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.json");
    let o = scx(&[
        "gen",
        "scomplex",
        "--seed",
        "11",
        "--force-hypothesis1",
        "-o",
        p.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&scx(&["scheck", p.to_str().unwrap()]));
    for row in v["degrees"].as_array().unwrap() {
        assert_eq!(row["first"]["holds"], true, "{row}");
        assert_ne!(row["first"]["inequality"], false);
    }
}

#[test]
fn corr_compare_asserts_functoriality() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("corr.json");
    std::fs::write(&p, scx(&["gen", "corr", "--seed", "5"]).stdout).unwrap();
    let o = scx(&["compare", p.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v["quasi_iso"], true);
    assert_eq!(v["asserted"], true);
}

#[test]
fn empty_suite_warns() {
    let o = scx(&["suite", "pages", "-n", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("vacuous"));
    assert_eq!(json(&o)["warnings"].as_array().unwrap().len(), 1);
    assert_eq!(scx(&["suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn suite_output_is_byte_identical() {
    let a = scx(&["suite", "relations", "-n", "40", "--seed", "3"]);
    let b = scx(&["suite", "relations", "-n", "40", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn replay_of_a_passing_dump_reports_pass() {
    // a hand-made dump for an instance that passes replays as a pass
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dump.json");
    let dump = r#"{"schema": "scx/1 failure", "suite": "persistence", "index": 0, "seed": 42, "detail": "x", "instance": null}"#;
    std::fs::write(&p, dump).unwrap();
    let o = scx(&["suite", "--replay", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn text_format() {
    let o = scx(&[
        "--format",
        "text",
        "psc",
        "--rho-in",
        "1",
        "--rho-out",
        "5",
        "--const-C",
        "1",
    ]);
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("s2_lower_bound: 96"), "{s}");
}

#[test]
fn novikov_compare_is_window_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let c = json(&scx(&["gen", "novikov", "--seed", "9"]));
    let ids: Vec<Value> = c["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["id"].clone())
        .collect();
    let matrix: Vec<Value> = ids
        .iter()
        .map(|id| serde_json::json!({"from": id, "to": id}))
        .collect();
    let doc = serde_json::json!({
        "schema": "scx/1 map",
        "source": c,
        "target": c,
        "degree": 0,
        "matrix": matrix,
        "level_shift": "0",
    });
    let p = dir.path().join("id.json");
    std::fs::write(&p, doc.to_string()).unwrap();
    let o = scx(&["compare", p.to_str().unwrap(), "--window", "16"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v["tag"], "window-level evidence");
    assert_eq!(v["consistent"], true);
}
