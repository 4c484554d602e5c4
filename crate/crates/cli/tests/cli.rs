use std::path::Path;
use std::process::{Command, Output};

use enriques::json::{parse_class, parse_int, parse_ratio};
use enriques::scenarios::{self, run_scenario, DataSource};
use enriques_core::linalg::rat;
use serde_json::Value;

fn enriques(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enriques")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn copy_bundled(dir: &Path) {
    for (file, src) in scenarios::BUNDLED {
        std::fs::write(dir.join(file), src).unwrap();
    }
}

#[test]
fn check_prints_the_e10_profile() {
    let o = enriques(&["--config", "bundled:type_vii", "check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank 10, determinant -1, signature (1,0,9), even"), "{}", stdout(&o));
    let o = enriques(&["--json", "--config", "bundled:type_vii", "check"]);
    let v = json_of(&o);
    assert_eq!(v["profile"]["signature"], serde_json::json!([1, 0, 9]));
    assert_eq!(parse_int(&v["profile"]["determinant"]), Some((-1).into()));
}

#[test]
fn phi_of_h1() {
    let o = enriques(&["--config", "bundled:type_vii", "phi", "H1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Φ = 3"));
    let v = json_of(&enriques(&["--json", "--config", "bundled:type_vii", "phi", "H1"]));
    assert_eq!(v["phi"], 3);
    let witness = parse_class(&v["witness"]["ambient"]).expect("class");
    let h = parse_class(&v["h"]).expect("class");
    let model =
        enriques::format::parse_document(scenarios::bundled("type_vii.toml").unwrap()).unwrap().model().unwrap();
    assert_eq!(model.pair(&witness, &witness).unwrap(), rat(0));
    assert_eq!(model.pair(&witness, &h).unwrap(), rat(3));
}

#[test]
fn reye_lists_the_trivalent_seven() {
    let o = enriques(&["--config", "bundled:e8_tilde", "reye", "--half-fiber", "F1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("R1_7: 7"), "{}", stdout(&o));
}

#[test]
fn negdef_exit_codes() {
    let o = enriques(&["--config", "bundled:e8_tilde", "negdef", "F1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("false (witness subdivisor with square 0)"), "{}", stdout(&o));
    let o = enriques(&["--config", "bundled:e8_tilde", "negdef", "R1_1 + 2 R1_2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = enriques(&["--config", "bundled:e8_tilde", "negdef", "R1_1 - R1_2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_names_are_errors() {
    let o = enriques(&["--config", "bundled:type_vii", "phi", "H9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("H9"));
    let o = enriques(&["--config", "bundled:e8_tilde", "reye", "--half-fiber", "R1_1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(enriques(&["phi", "H1"]).status.code(), Some(2));
}

#[test]
fn fano_json_round_trips() {
    let o = enriques(&["--json", "--config", "bundled:d8_tilde", "fano"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(parse_ratio(&v["h_square"]), Some(rat(10)));
    assert_eq!(v["phi"], 3);
    let text = serde_json::to_string(&v).unwrap();
    assert!(!text.contains('.'), "decimal in {text}");
    let h = parse_class(&v["h"]["ambient"]).expect("class");
    let model =
        enriques::format::parse_document(scenarios::bundled("d8_tilde.toml").unwrap()).unwrap().model().unwrap();
    assert_eq!(model.pair(&h, &h).unwrap(), rat(10));
}

#[test]
fn reduce_reports_multiplicities() {
    let v = json_of(&enriques(&["--json", "--config", "bundled:type_vii", "reduce", "H1 + E3 + E8"]));
    assert_eq!(v["multiplicities"]["E3"], 1);
    assert_eq!(v["multiplicities"]["E8"], 1);
}

#[test]
fn self_loop_and_empty_curves() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.toml");
    std::fs::write(&path, "curves = [\"A\", \"B\"]\nedges = [[\"A\", \"A\", 1]]\n").unwrap();
    let o = enriques(&["--config", path.to_str().unwrap(), "check"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("[A, A, 1]") && err.contains("self-loop"), "{err}");

    std::fs::write(&path, "curves = []\n").unwrap();
    let o = enriques(&["--config", path.to_str().unwrap(), "check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no curves"));
}

#[test]
fn paper_verify_passes() {
    let o = enriques(&["paper-verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("5/5 scenarios pass"));
}

#[test]
fn paper_verify_json_round_trips() {
    let o = enriques(&["--json", "paper-verify", "--scenario", "typeVII_counterexample"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    let report = &v["scenarios"][0];
    let dp = report["assertions"].as_array().unwrap().iter().find(|a| a["id"] == "Dp.Gp").expect("present");
    assert_eq!(dp["origin"], "published");
    assert!(dp["anchor"].as_str().unwrap().contains("type VII"));
    assert_eq!(parse_ratio(&dp["computed"]), Some(rat(-2)));
}

#[test]
fn corrupted_data_dir_fails_in_a_structured_way() {
    let dir = tempfile::tempdir().unwrap();
    copy_bundled(dir.path());
    std::fs::write(dir.path().join("e8_tilde.toml"), "curves = [\"A\"\n").unwrap();
    let o = enriques(&["--json", "paper-verify", "--data-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["passed"], 4);
    let e8 = &v["scenarios"][0];
    assert_eq!(e8["scenario"], "E8_tilde");
    assert!(e8["error"].as_str().unwrap().contains("parse error"));
}

#[test]
fn deleted_edge_stops_at_structural_checks() {
    let src = scenarios::bundled("type_vii.toml").unwrap();
    let needle = "[\"K1\", \"K2\", 2]";
    assert!(src.contains(needle));
    let dir = tempfile::tempdir().unwrap();
    copy_bundled(dir.path());
    std::fs::write(dir.path().join("type_vii.toml"), src.replacen(&format!("{needle},"), "", 1)).unwrap();
    let r = run_scenario("typeVII_counterexample", &DataSource::Dir(dir.path().to_path_buf())).unwrap();
    assert!(!r.passed());
    assert!(!r.structural_ok());
    assert!(r.assertions.is_empty());
    assert!(!r.find("k-k").unwrap().pass);
}
