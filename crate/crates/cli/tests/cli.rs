use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn nileta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nileta"))
        .args(args)
        .env_remove("NILETA_ENUM_CAP")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn eta_a2() {
    let out = nileta(&["eta", "A2", "--twist", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["eta"], "5/6");
}

#[test]
fn negative_twist_and_oracle() {
    let out = nileta(&["eta", "A1", "--twist", "-1", "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["eta"], v["oracle"]["eta"]);
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn classify_a2() {
    let out = nileta(&["classify", "A2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "NONTRIVIAL_PI6");
}

#[test]
fn f_invariant_a2() {
    let out = nileta(&["f-invariant", "A2", "--level", "3", "--order", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["series"]["coeffs"][0][0], "2/3");
    assert_eq!(v["series"]["coeffs"].as_array().unwrap().len(), 5);
}

#[test]
fn spectrum_with_k_range() {
    let out = nileta(&["spectrum", "A2", "--twist", "2", "--levels", "1", "--k-range", "-1:1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kernel_dimension"], 12);
    assert_eq!(v["vertical"]["unit"], "2*pi");
}

#[test]
fn file_input_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("q7.json");
    fs::write(&input, r#"{"gram": [[2,1],[1,4]]}"#).unwrap();
    let output = dir.path().join("report.json");
    let out = nileta(&["classify", input.to_str().unwrap(), "--out", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["verdict"], "NONTRIVIAL_PI6");
    assert_eq!(v["disc"], 7);
}

#[test]
fn non_square_file_is_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    fs::write(&input, r#"{"gram": [[2,1]]}"#).unwrap();
    let out = nileta(&["info", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "ParseError");
}

#[test]
fn invalid_lattice_exit_one() {
    let out = nileta(&["eta", "[[2,3],[3,2]]"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "NotPositiveDefinite");
}

#[test]
fn enum_cap_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_nileta"))
        .args(["eta", "A2", "--twist", "5"])
        .env("NILETA_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "OrderOverflow");
}

#[test]
fn bad_flag_is_usage_error() {
    let out = nileta(&["eta", "A2", "--twist", "x"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["congruence", "Q7"],
        vec!["info", "A2", "--twist", "-2"],
        vec!["spectrum", "3A1", "--twist", "-1"],
    ] {
        let a = nileta(&args);
        let b = nileta(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn rationals_round_trip() {
    use nileta_core::cyclo::QSeries;
    use nileta_core::rational::{format_rational, parse_rational};
    let v = json(&nileta(&["eta", "Q7", "--twist", "3"]));
    for key in ["eta", "discriminant_sum"] {
        let s = v[key].as_str().unwrap();
        assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
    }
    let v = json(&nileta(&["f-invariant", "Q7", "--order", "6"]));
    assert_eq!(QSeries::from_json(&v["series"]).unwrap().to_json(), v["series"]);
}
