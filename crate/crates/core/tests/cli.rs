use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_shintani");
const HAT_CFG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/q_sqrt5_hat.cfg");

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

fn write_cfg(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("shintani-cli-{}-{name}.cfg", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn bundled_config_verifies() {
    let (code, r) = run(&["--config", HAT_CFG, "verify"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "equal");
    assert_eq!(r["result"]["value"], "[(+1,+1)]-[(+1,-1)]");
    for cmd in [vec!["hat-theta"], vec!["regulator", "--hat"]] {
        let mut args = vec!["--config", HAT_CFG];
        args.extend(cmd);
        let (code, r) = run(&args);
        assert_eq!(code, 0);
        assert_eq!(r["verdict"], "[(+1,+1)]-[(+1,-1)]");
    }
}

#[test]
fn empty_t_is_a_mathematical_violation() {
    let body = std::fs::read_to_string(HAT_CFG).unwrap().replace("t = [\"5\"]", "t = []").replace("q = \"5\"\n", "");
    let (code, r) = run(&["--config", &write_cfg("empty-t", &body), "verify"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["precondition"], "mu_T_check");
}

#[test]
fn malformed_configs_exit_two() {
    let (code, _) = run(&["--config", &write_cfg("bad-key", "[field]\npoly = [-1, -1, 1]\nextra = 2\n"), "verify"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["--config", &write_cfg("bad-toml", "[field\n"), "theta"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["--config", "/nonexistent/shintani.cfg", "theta"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["theta"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timings_ms");
        v
    };
    let (_, a) = run(&["--config", HAT_CFG, "--seed", "5", "verify"]);
    let (_, b) = run(&["--config", HAT_CFG, "--seed", "5", "verify"]);
    assert_eq!(strip(a.clone()), strip(b));
    let (_, c) = run(&["--config", HAT_CFG, "--seed", "9", "verify"]);
    assert_eq!(a["result"]["value"], c["result"]["value"]);
}

#[test]
fn json_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("shintani-cli-{}.json", std::process::id()));
    let out = Command::new(BIN).args(["--config", HAT_CFG, "--json", path.to_str().unwrap(), "regulator", "--hat"]).output().unwrap();
    assert!(out.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["result"]["n_st"], -1);
}
