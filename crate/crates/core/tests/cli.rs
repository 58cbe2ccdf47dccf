use std::process::{Command, Output};

fn plg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plg"))
        .args(args)
        .env_remove("PLG_SEED")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn check_report_has_required_fields() {
    for model in ["sl2r", "s3", "lorenz", "eulertop", "liepoisson"] {
        let o = plg(&["check", "--model", model, "--samples", "10"]);
        assert_eq!(code(&o), 0, "{model}: {}", String::from_utf8_lossy(&o.stderr));
        let v = json(&o);
        for key in ["model", "unimodular", "dual_modular_character", "f0_samples", "theorem_residual", "morse"] {
            assert!(v.get(key).is_some(), "{model} lacks {key}");
        }
    }
}

#[test]
fn check_is_deterministic_and_seedable() {
    let a = plg(&["check", "sl2r", "--samples", "5"]);
    let b = plg(&["check", "sl2r", "--samples", "5"]);
    assert_eq!(a.stdout, b.stdout);

    let c = Command::new(env!("CARGO_BIN_EXE_plg"))
        .args(["check", "sl2r", "--samples", "5"])
        .env("PLG_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(code(&c), 0);
    assert_ne!(a.stdout, c.stdout);
    let d = plg(&["check", "sl2r", "--samples", "5", "--seed", "17"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn validation_failures_exit_2() {
    assert_eq!(code(&plg(&["check", "nosuchmodel"])), 2);
    assert_eq!(code(&plg(&["simulate", "sl2r", "--volume", "haar"])), 2);
    assert_eq!(code(&plg(&["simulate", "lorenz", "--eta", "0"])), 2);
    assert_eq!(code(&plg(&["morse", "sl2r", "--H", "nope"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name": "bad", "coordinates": ["x", "y", "z"], "bivector": [[0, 1, "z"], [0, 2, "x"], [1, 2, "1"]]}"#,
    )
    .unwrap();
    let o = plg(&["check", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn leaving_the_domain_exits_3() {
    let o = plg(&["simulate", "lorenz", "--x0", "5,5,5,5", "--h", "0.1", "--steps", "1000"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn simulate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = plg(&["simulate", "sl2r", "--steps", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x1,x2,x3,x4,logjac,H,det");
    assert_eq!(lines.count(), 21);
    assert!(json(&o).get("drift").is_some());
}

#[test]
fn morse_verdicts_on_sl2r() {
    let o = plg(&["morse", "sl2r", "--H", "contrast"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v.to_string().contains("no invariant volume"), "{v}");
}

#[test]
fn config_models_run_through_the_cli() {
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/rigid_body.json");
    let o = plg(&["check", "--config", cfg, "--samples", "10"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["unimodular"], serde_json::json!(true));
}
