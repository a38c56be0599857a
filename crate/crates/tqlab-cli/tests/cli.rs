use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn tqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tqlab"))
        .args(args)
        .current_dir(root())
        .env_remove("TQLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn tq_matches_golden_files() {
    for (ty, node, anchor, golden) in [("A1", "1", "a", "tq_a1"), ("A2", "1", "1", "tq_a2"), ("B2", "2", "1", "tq_b2")] {
        for ext in ["tex", "json"] {
            let path = format!("crates/tqlab/golden/{}.{}", golden, ext);
            let o = tqlab(&["tq", "--type", ty, "--node", node, "--anchor", anchor, "--expect", &path]);
            assert_eq!(o.status.code(), Some(0), "{} {}", path, String::from_utf8_lossy(&o.stderr));
        }
    }
}

#[test]
fn golden_mismatch_exits_one_with_diff() {
    let o = tqlab(&["qchar", "--type", "A2", "--expect", "crates/tqlab/golden/qchar_b2.tex"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--- expected") && err.contains("+++ found"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tqlab(&["nonsense"]).status.code(), Some(2));
    assert_eq!(tqlab(&["tq", "--type", "E8"]).status.code(), Some(2));
    assert_eq!(tqlab(&["tq", "--type", "A2", "--node", "5"]).status.code(), Some(2));
    assert_eq!(tqlab(&["verify", "sl2", "--what", "everything"]).status.code(), Some(2));
}

#[test]
fn single_root_bethe_equation() {
    let o = tqlab(&["bethe", "gen", "--sl2", "--N", "1", "--R", "1"]);
    assert_eq!(stdout(&o).trim(), "v q \\frac{w_{1} - q^{-2}}{w_{1} - 1} = 1");
}

#[test]
fn baxter_report_for_two_sites() {
    let o = tqlab(&["verify", "sl2", "--what", "baxter", "--N", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert_eq!(c["status"], "pass");
        assert!(c["residual"].as_f64().unwrap() < 1e-9);
        assert!(c["runtime_ms"].is_null());
    }
}

#[test]
fn seed_comes_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_tqlab"))
        .args(["verify", "sl2", "--what", "degree"])
        .env("TQLAB_SEED", "99")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 99);
}

#[test]
fn bethe_solve_records_seed_and_residuals() {
    let o = tqlab(&["bethe", "solve", "--sl2", "--R", "2", "--m", "2", "--v0", "0.3,0.1", "--q0", "1.2,0.3", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["seed"], 5);
    assert!(sols[0]["residuals"].as_array().unwrap().iter().all(|r| r.as_f64().unwrap() < 1e-9));
}

#[test]
fn json_renders_back_to_latex() {
    let dir = tempfile::tempdir().unwrap();
    let o = tqlab(&["tq", "--type", "B2", "--node", "2", "--json"]);
    let file = dir.path().join("rel.json");
    std::fs::write(&file, &o.stdout).unwrap();
    let latex = tqlab(&["tq", "--type", "B2", "--node", "2", "--latex"]);
    let rendered = tqlab(&["tq-render", file.to_str().unwrap()]);
    assert_eq!(stdout(&rendered), stdout(&latex));
}

#[test]
fn scenarios_in_repo_pass() {
    for entry in std::fs::read_dir(root().join("scenarios")).unwrap() {
        let path = entry.unwrap().path();
        let o = tqlab(&["run", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn malformed_scenario_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.toml");
    std::fs::write(&file, "command = \"tq\"\ntype = \"A2\"\nnod = 1\n").unwrap();
    let o = tqlab(&["run", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.toml:3:1"));
}

#[test]
fn scenario_defaults_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("min.toml");
    std::fs::write(&file, "command = \"cartan\"\ntype = \"A2\"\n[numeric]\npreset = \"nontwisted\"\n").unwrap();
    let o = tqlab(&["run", file.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = &v["scenario"];
    assert_eq!((s["K"].as_u64(), s["Kv"].as_u64(), s["M"].as_u64()), (Some(12), Some(8), Some(16)));
    assert_eq!(s["substitutions"][0], serde_json::json!(["v_1", "q^{2}"]));
}
