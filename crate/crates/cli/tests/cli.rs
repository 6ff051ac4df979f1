use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const TENT: &str = "0,0; 1/2,1; 1,0";
const XI3: &str = "0,0; 1/3,1; 2/3,0; 1,1";
const G: &str = "0,0; 3/8,3/4; 3/4,1; 7/8,3/4; 1,0";
const PSI: &str = "0,0; 1/4,3/4; 1/2,1; 3/4,3/4; 5/6,0; 11/12,3/4; 1,1";

fn pldyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pldyn")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(bytes)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name)
}

#[test]
fn commuting_files_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tent.pl", TENT);
    let psi = write(dir.path(), "xi3.pl", XI3);
    for method in ["exact", "sat", "both"] {
        let out = pldyn(&["commute", "--g", &g, "--psi", &psi, "--method", method]);
        assert_eq!(code(&out), 0, "{method}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out.stdout)["commutes"], true);
    }
}

#[test]
fn non_commuting_pair_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tent.pl", TENT);
    let bad = write(dir.path(), "bad.pl", "0,0; 1/3,1; 1,0");
    let out = pldyn(&["commute", "--g", &g, "--psi", &bad]);
    assert_eq!(code(&out), 1);
    let report = json(&out.stdout);
    let w = &report["reports"][0]["witness"];
    assert_eq!(w["x"], "1/3");
    assert_ne!(w["g_psi"], w["psi_g"]);
}

#[test]
fn xi6_file_has_seven_breakpoints() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("xi6.pl");
    let out = pldyn(&["xi", "--t", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.trim().split(';').count(), 7);
    assert_eq!(text.trim(), "0,0; 1/6,1; 1/3,0; 1/2,1; 2/3,0; 5/6,1; 1,0");
}

#[test]
fn usage_and_input_errors_exit_two_with_json() {
    for args in [
        vec!["commute", "--g", TENT],
        vec!["no-such-command"],
        vec!["xi", "--t", "0"],
        vec!["eval", "--g", "0,0; 1,0; 1,1", "--x", "1/2"],
        vec!["eval", "--g", TENT, "--x", "3/2"],
        vec!["lattice", "--g", TENT, "--psi", "0,0; 1/3,1; 1,0"],
        vec!["family", "--id", "fig9", "--a", "3/2"],
    ] {
        let out = pldyn(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        let err = json(&out.stderr);
        assert!(err["error"].is_string() && err["message"].is_string(), "{args:?}");
    }
}

#[test]
fn eval_and_compose() {
    let out = pldyn(&["eval", "--g", G, "--x", "1/2", "--x", "15/16"]);
    assert_eq!(code(&out), 0);
    let v = json(&out.stdout);
    assert_eq!(v[0]["y"], "5/6");
    assert_eq!(v[1]["y"], "3/8");
    let out = pldyn(&["compose", "--g", TENT, "--psi", XI3]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0,0; 1/6,1; 1/3,0; 1/2,1; 2/3,0; 5/6,1; 1,0");
}

#[test]
fn lattice_report_has_counts_points_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lattice.json");
    let out = pldyn(&["lattice", "--g", G, "--psi", PSI, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&std::fs::read(&path).unwrap());
    assert_eq!((v["n"].as_u64(), v["s"].as_u64()), (Some(3), Some(1)));
    assert_eq!(v["counts"], serde_json::json!({"x": 11, "psi": 3, "g": 5, "y": 1}));
    assert_eq!(v["counts_match"], true);
    assert_eq!(v["points"]["a"].as_array().unwrap().len(), 5);
    assert_eq!(v["pairs"]["p"], serde_json::json!([[0, 0], [1, 3], [2, 6], [3, 9], [4, 12]]));
    assert!(v["seeds"].as_array().unwrap().contains(&serde_json::json!("0")));
}

#[test]
fn conjugacy_subcommands() {
    let out = pldyn(&["conjugacy", "find", "--g", G]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out.stdout)["h"], "0,0; 1/2,3/4; 1,1");

    let out = pldyn(&["conjugacy", "verify", "--g", G, "--h", "0,0; 1/2,3/4; 1,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out.stdout)["is_conjugacy"], true);

    let out = pldyn(&["conjugacy", "verify", "--f", TENT, "--g", G, "--h", "0,0; 1/2,1/2; 1,1"]);
    assert_eq!(code(&out), 1);
    assert!(!json(&out.stdout)["violations"].as_array().unwrap().is_empty());

    let out = pldyn(&["conjugacy", "check", "--g", "0,0; 1/3,1; 1,0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out.stdout)["derivative_at_zero_check"], false);

    let out = pldyn(&["conjugacy", "find", "--g", "0,0; 1/3,1; 1,0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out.stdout)["found"], false);
}

#[test]
fn family_writes_maps_and_completion_recovers_g() {
    let dir = tempfile::tempdir().unwrap();
    let (g, psi, h) = (dir.path().join("g.pl"), dir.path().join("psi.pl"), dir.path().join("h.pl"));
    let out = pldyn(&[
        "family",
        "--id",
        "fig18",
        "--a",
        "1/3",
        "--b",
        "9/20",
        "--t",
        "4",
        "--out-g",
        g.to_str().unwrap(),
        "--out-psi",
        psi.to_str().unwrap(),
        "--out-h",
        h.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out.stdout);
    assert_eq!(v["t"], 4);
    assert_eq!(v["h"], "0,0; 20/27,2/3; 1,1");
    assert!(v["slope_checks"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    let g_text = std::fs::read_to_string(&g).unwrap();

    let out = pldyn(&["commute", "--g", g.to_str().unwrap(), "--psi", psi.to_str().unwrap(), "--method", "both"]);
    assert_eq!(code(&out), 0);

    let out = pldyn(&["complete-left", "--gl", g.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out.stdout);
    assert_eq!(v["g"], g_text.trim());
    assert_eq!(v["h"], std::fs::read_to_string(&h).unwrap().trim());
}

#[test]
fn complete_left_from_leg_points() {
    let out = pldyn(&["complete-left", "--gl", "0,0; 3/8,3/4; 3/4,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out.stdout)["g"], G);
    let out = pldyn(&["complete-left", "--gl", "0,0; 1/4,3/4; 3/4,1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn render_matches_golden_figures() {
    let dir = tempfile::tempdir().unwrap();
    let fig7 = dir.path().join("fig7.svg");
    let out = pldyn(&["render", "--g", G, "--psi", PSI, "--labels", "--out", fig7.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&fig7).unwrap(), std::fs::read_to_string(golden("fig7.svg")).unwrap());

    let out = pldyn(&["render", "--g", TENT, "--psi", XI3, "--labels"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), std::fs::read_to_string(golden("fig8.svg")).unwrap());
}

#[test]
fn render_is_deterministic_and_supports_bare_scenes() {
    let args = ["render", "--g", "0,0; 1,1", "--psi", "0,0; 1,1", "--bare"];
    let a = pldyn(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, pldyn(&args).stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));

    let hl = pldyn(&["render", "--g", TENT, "--psi", XI3, "--x", "1/6"]);
    assert_eq!(code(&hl), 0);
    assert!(String::from_utf8(hl.stdout).unwrap().contains("<polygon"));
}
