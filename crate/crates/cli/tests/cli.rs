use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn indgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indgap"))
        .args(args)
        .env_remove("INDGAP_PRECISION")
        .output()
        .expect("spawn indgap")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("indgap-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

#[test]
fn poly_star3() {
    let o = indgap(&["poly", "star:3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["coeffs"], serde_json::json!([1, -4, 3, -1]));
}

#[test]
fn poly_from_global_graph_flag() {
    let o = indgap(&["--graph", "path:4", "poly"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["coeffs"], serde_json::json!([1, -4, 3]));
}

#[test]
fn empty_edge_list_has_unit_polynomial() {
    let p = temp_file("empty.txt", "0 0\n");
    let o = indgap(&["poly", "--file", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["coeffs"], serde_json::json!([1]));
}

#[test]
fn certify_path3_is_valid() {
    let o = indgap(&["certify", "path:3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["valid"], Value::Bool(true));
    assert!(v["certified_gap"].is_string());
}

#[test]
fn certify_disconnected_exits_4() {
    let p = temp_file("dis.txt", "4 2\n0 1\n2 3\n");
    let o = indgap(&["certify", "--file", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn too_many_vertices_exits_3() {
    let o = indgap(&["poly", "gnp:70:0.3:seed1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(indgap(&["poly", "cycle:2"]).status.code(), Some(2));
    assert_eq!(indgap(&["poly", "nonsense:3"]).status.code(), Some(2));
    assert_eq!(indgap(&["certify", "path:3", "--tol", "abc"]).status.code(), Some(2));
    assert_eq!(indgap(&["certify", "path:3", "--precision", "20"]).status.code(), Some(2));
    assert_eq!(indgap(&["verify", "nosuch"]).status.code(), Some(2));
    assert_eq!(indgap(&["poly"]).status.code(), Some(2));
}

#[test]
fn precision_env_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_indgap"))
        .args(["roots", "path:3"])
        .env("INDGAP_PRECISION", "128")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["precision"], serde_json::json!(128));
}

#[test]
fn roots_are_sorted_with_small_residuals() {
    let o = indgap(&["roots", "cycle:5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.iter().map(|r| r["multiplicity"].as_u64().unwrap()).sum::<u64>(), 2);
    let moduli: Vec<f64> = roots.iter().map(|r| r["re"].as_f64().unwrap().hypot(r["im"].as_f64().unwrap())).collect();
    assert!(moduli.windows(2).all(|w| w[0] <= w[1]));
    assert!(roots.iter().all(|r| r["residual"].as_f64().unwrap() < 1e-25));
}

#[test]
fn plot_data_csv_shape() {
    let o = indgap(&["plot-data", "star:3", "--pivot", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,abs_f_u,majorant"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 720);
    for r in &rows {
        assert!(r[1] <= r[2] * (1.0 + 1e-9) + 1e-12, "{r:?}");
    }
}

#[test]
fn plot_data_to_file() {
    let out = std::env::temp_dir().join(format!("indgap-plot-{}.csv", std::process::id()));
    let o = indgap(&["plot-data", "path:4", "--grid", "32", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 33);
    fs::remove_file(out).ok();
}

#[test]
fn family_table() {
    let o = indgap(&["family", "cycle", "--nmax", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["n"], serde_json::json!(3));
    assert!((rows[0]["beta"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn verify_families_small() {
    let o = indgap(&["verify", "families", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
}

#[test]
fn verify_soundness_json() {
    let o = indgap(&["verify", "soundness", "--nmax", "4", "--random", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v[0]["suite"], serde_json::json!("soundness"));
}
