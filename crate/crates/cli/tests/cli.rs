use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const CATALAN: f64 = 0.915_965_594_177_219_015;
/// (2D(i) - (3/4)D(ω))/π
const PROVED_CONIC: f64 = 0.421_588_834_451_912_4;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn mahler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(args)
        .env_remove("MAHLER_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn measure_reports_value_and_bound() {
    let v = json(&mahler(&["measure", "y^2+y*(x+1)+x^2+x+1", "--method", "jensen1d"]));
    let value = v["value"].as_f64().unwrap();
    let bound = v["error_bound"].as_f64().unwrap();
    assert!((value - PROVED_CONIC).abs() < 1e-10, "{value}");
    assert!(bound > 0.0 && bound < 1e-8);
    let q = json(&mahler(&["measure", "y^2+y*(x+1)+x^2+x+1", "--method", "quad2d"]));
    assert!((q["value"].as_f64().unwrap() - PROVED_CONIC).abs() <= q["error_bound"].as_f64().unwrap());
}

#[test]
fn dilog_and_zeta_print_twelve_digits() {
    let out = mahler(&["--format", "plain", "dilog", "0", "1"]);
    assert_eq!(stdout(&out).trim(), format!("{CATALAN:.12}"));
    let out = mahler(&["--format", "plain", "dilog", "-0.5", "-0.8660254037844386"]);
    assert_eq!(stdout(&out).trim(), "-0.676627737606");
    let out = mahler(&["--format", "plain", "zeta-quad", "2"]);
    assert!(stdout(&out).starts_with("zeta_F(2) = 1.751417510087"), "{}", stdout(&out));
}

#[test]
fn evaluate_with_parameter_file() {
    let param = data("boyd.json");
    let v = json(&mahler(&["evaluate", "x+y-4*x*y+x^2*y+x*y^2", "--param", param.to_str().unwrap()]));
    let total = v["total"].as_f64().unwrap();
    assert!((total - 4.0 * CATALAN / std::f64::consts::PI).abs() < 1e-12, "{total}");
    let terms = v["dilog_terms"].as_array().unwrap();
    assert!(terms.iter().any(|t| t["arg"] == "inf"));
    assert!(terms.iter().all(|t| t["j"] == 1));
}

#[test]
fn parametrize_output_round_trips_through_evaluate() {
    let p = "y^2+y(x+1)+x^2+x+1";
    let out = mahler(&["parametrize", p]);
    let dir = std::env::temp_dir().join(format!("mahler-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("conic.json");
    std::fs::write(&file, &out.stdout).unwrap();
    let v = json(&mahler(&["evaluate", p, "--param", file.to_str().unwrap()]));
    assert!((v["total"].as_f64().unwrap() - PROVED_CONIC).abs() < 1e-12);
    assert_eq!(v["winding_terms"].as_array().unwrap().len() % 4, 0);
}

#[test]
fn identity_with_automatic_basis() {
    let v = json(&mahler(&["identity", "y^2+y+x^2+x+1", "--basis", "auto"]));
    assert_eq!(v["coefficients"], serde_json::json!([[3, 4], [5, 4], [-5, 6]]));
    assert_eq!(v["basis"], serde_json::json!(["D(omega)", "D(xi_5)", "D(xi_5^2)"]));
    let v = json(&mahler(&["identity", "y^2+y(x+1)+x^2+x+1", "--basis", "D(i), D(omega)"]));
    assert_eq!(v["coefficients"], serde_json::json!([[2, 1], [-3, 4]]));
}

#[test]
fn paths_emit_winding_table_and_plot_data() {
    let param = data("boyd.json");
    let plot = std::env::temp_dir().join(format!("mahler-plot-{}.csv", std::process::id()));
    let v = json(&mahler(&[
        "paths",
        "x+y-4xy+x^2y+xy^2",
        "--param",
        param.to_str().unwrap(),
        "--plot-data",
        plot.to_str().unwrap(),
    ]));
    assert_eq!(v["segments"][0]["u"], "inf");
    let w: Vec<f64> = v["windings"].as_array().unwrap().iter().map(|t| t["winding"].as_f64().unwrap()).collect();
    assert_eq!(w.len(), 8);
    assert!((w.iter().sum::<f64>()).abs() < 1e-10);
    let csv = std::fs::read_to_string(&plot).unwrap();
    assert!(csv.starts_with("sheet,phi,re,im\n"));
    assert!(csv.lines().count() > 1000);
}

#[test]
fn newton_toric_admissible() {
    let v = json(&mahler(&["newton", "y^2+y(x^2+1)+x^4+x^3+x^2+x+1"]));
    assert_eq!(v["tempered"]["tempered"], true);
    assert_eq!(v["polygon"]["vertices"].as_array().unwrap().len(), 3);
    let v = json(&mahler(&["toric", "y^2+y(x^2+1)+x^4+x^3+x^2+x+1"]));
    let pts = v.as_array().unwrap();
    // (±i, ∓i) lie on the curve too: x² + 1 = 0 and x⁴+x³+x²+x+1 = 1 at x = ±i
    assert_eq!(pts.len(), 9);
    assert_eq!(pts.iter().filter(|p| p["singular"] == true).count(), 1);
    let v = json(&mahler(&["admissible", "y^2+y+x^2+x+1"]));
    assert_eq!(v["admissible"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(mahler(&["toric", "x^2+"]).status.code(), Some(2));
    assert_eq!(mahler(&["parametrize", "x^2-y^2"]).status.code(), Some(2));
    assert_eq!(mahler(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mahler(&["evaluate", "(x(x+1)^5 - y(y+1)^5)/(x-y)"]).status.code(), Some(2));
    assert_eq!(mahler(&["toric", "y-x"]).status.code(), Some(3));
    assert_eq!(mahler(&["paper-suite", "--only", "nonexistent"]).status.code(), Some(2));
}

#[test]
fn config_from_environment() {
    let dir = std::env::temp_dir().join(format!("mahler-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("plain.json");
    std::fs::write(&good, r#"{"format": "plain", "measure_tol": 1e-10}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(["measure", "1+x+y"])
        .env("MAHLER_CONFIG", &good)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("0.3230659472 ± "), "{}", stdout(&out));
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"measure_tol": -1}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(["measure", "1+x+y"])
        .env("MAHLER_CONFIG", &bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_rows_in_fixed_order() {
    let v = json(&mahler(&["paper-suite", "--only", "quintic-field", "--only", "boyd", "--only", "no-toric"]));
    let rows = v["rows"].as_array().unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["no-toric", "boyd", "quintic-field"]);
    assert!(rows.iter().all(|r| r["pass"] == true));
}
