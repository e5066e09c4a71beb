use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hdx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdx"))
        .args(args)
        .current_dir(dir)
        .env_remove("HDX_SEED")
        .output()
        .expect("hdx runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn read(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn gen_families() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(hdx(d, &["gen", "complete", "--d", "3", "--out", "k4.json"]).status.success());
    let k4 = read(d, "k4.json");
    assert_eq!(k4["vertices"], 4);
    assert_eq!(k4["edges"].as_array().unwrap().len(), 6);
    assert_eq!(k4["polygons"].as_array().unwrap().len(), 4);

    assert!(hdx(d, &["gen", "building", "--q", "2", "--out", "b.json"]).status.success());
    assert_eq!(read(d, "b.json")["vertices"], 65);

    assert!(hdx(d, &["gen", "cyclic-cover", "--m", "5", "--out", "c.json"]).status.success());
    assert_eq!(read(d, "c.json")["vertices"], 5);

    let out = hdx(d, &["gen", "free-product", "--pres", "t | t^2", "--pres", "<a | a^3>"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["edges"].as_array().unwrap().len(), 2);

    let out = hdx(d, &["gen", "contracted", "--d", "5"]);
    assert_eq!(json(&out)["polygons"].as_array().unwrap().len(), 10);

    assert_eq!(hdx(d, &["gen", "building", "--q", "4"]).status.code(), Some(1));
    assert_eq!(hdx(d, &["gen", "complete"]).status.code(), Some(1));
    assert_eq!(hdx(d, &["gen", "torus"]).status.code(), Some(1));
    assert_eq!(hdx(d, &["--help"]).status.code(), Some(0));
}

#[test]
fn cheeger_on_k3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    hdx(d, &["gen", "complete", "--d", "2", "--out", "k3.json"]);
    let out = hdx(d, &["cheeger", "--complex", "k3.json", "--kind", "h1", "--coeff", "sym", "--nmax", "2", "--out", "r.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = read(d, "r.json");
    assert_eq!(r["result"]["value"]["fraction"], "3");
    assert_eq!(r["config"]["command"]["nmax"], 2);
    assert_eq!(r["config"]["global"]["seed"], 42);
    assert!(r["version"].is_string());
    assert!(r["tolerances"]["inequality"].is_number());
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["holds"] == true));

    let out = hdx(d, &["cheeger", "--complex", "k3.json", "--kind", "h0", "--mode", "sweep"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["value"]["kind"], "interval");
}

#[test]
fn cheeger_csv_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for k in ["2", "3"] {
        hdx(d, &["gen", "complete", "--d", k, "--out", &format!("k{k}.json")]);
    }
    let out = hdx(d, &["cheeger", "--complex", "k2.json", "k3.json", "--csv", "t.csv"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(d.join("t.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("k2.json,h1,f2,exact,3,3,"));
    assert_eq!(hdx(d, &["cheeger", "--complex", "k2.json", "k3.json"]).status.code(), Some(1));
}

#[test]
fn spectral_checks_and_violation_exit() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    hdx(d, &["gen", "complete", "--d", "3", "--out", "k4.json"]);
    let out = hdx(d, &["spectral", "--complex", "k4.json", "--check", "trickle"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["holds"], true);
    // equality case: a negative tolerance turns it into a failure
    let out = hdx(d, &["spectral", "--complex", "k4.json", "--check", "trickle", "--tol-inequality=-0.001"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("violated"));

    let out = hdx(d, &["spectral", "--complex", "k4.json", "--check", "cheeger-lower"]);
    assert_eq!(out.status.code(), Some(0));
    let out = hdx(d, &["spectral", "--complex", "k4.json", "--check", "links"]);
    assert_eq!(json(&out)["result"]["links"].as_array().unwrap().len(), 4);
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.json"), r#"{"vertices": 2, "edges": [{"id": 0, "src": 0, "dst": 7}], "polygons": [], "measures": {"mu0": "descending", "mu1": "uniform", "mu2": "uniform"}}"#).unwrap();
    let out = hdx(d, &["cheeger", "--complex", "bad.json", "--kind", "h0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edge 0"));
    let out = hdx(d, &["cheeger", "--complex", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cosystole_and_cover() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    hdx(d, &["gen", "presentation", "--pres", "a, b | b", "--out", "ab.json"]);
    let out = hdx(d, &["cosystole", "--complex", "ab.json", "--nmax", "3", "--check-covers"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["cosystole"]["value"]["fraction"], "1/2");
    assert!(!r["result"]["covers"].as_array().unwrap().is_empty());

    std::fs::write(d.join("a.json"), r#"{"coefficient": {"sym": 3}, "values": {"0": "(1 2 3)"}}"#).unwrap();
    let out = hdx(d, &["cover", "--complex", "ab.json", "--cochain", "a.json", "--out", "cover.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["connected"], true);
    assert_eq!(r["result"]["level_crossing"]["fraction"], "1/2");
    let cover = read(d, "cover.json");
    assert_eq!(cover["degree"], 3);
    assert_eq!(cover["vertices"], 3);
    assert_eq!(cover["base"], "ab.json");
}

#[test]
fn correct_methods() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    hdx(d, &["gen", "complete", "--d", "3", "--out", "k4.json"]);
    std::fs::write(d.join("c.json"), r#"{"coefficient": {"sym": 3}, "values": {"0": "(1 2)", "4": "(1 2 3)"}}"#).unwrap();
    for method in ["complete", "exact"] {
        let out = hdx(d, &["correct", "--complex", "k4.json", "--cochain", "c.json", "--method", method]);
        assert_eq!(out.status.code(), Some(0), "{method}");
        assert_eq!(json(&out)["result"]["output_is_cocycle"], true);
    }
    let out = hdx(d, &["correct", "--complex", "k4.json", "--cochain", "c.json", "--method", "cone", "--radius-budget", "1", "--fill-budget", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["claimed_factor"]["fraction"], "2");
    assert_eq!(r["result"]["holds"], true);
    assert_eq!(r["config"]["command"]["fill_budget"], 2);
}

#[test]
fn experiment_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    hdx(d, &["gen", "complete", "--d", "3", "--out", "k4.json"]);
    let args = ["experiment", "--complex", "k4.json", "--method", "complete", "--p-corrupt", "0.2", "--trials", "30", "--report", "s.json"];
    let a = hdx(d, &args);
    let first = std::fs::read(d.join("s.json")).unwrap();
    let b = hdx(d, &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(first, std::fs::read(d.join("s.json")).unwrap());
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("trial,defect,distance,ratio,method,seed\n"));
    assert_eq!(text.lines().count(), 31);

    let other = Command::new(env!("CARGO_BIN_EXE_hdx")).args(args).current_dir(d).env("HDX_SEED", "7").output().unwrap();
    assert_ne!(other.stdout, b.stdout);
    assert_eq!(read(d, "s.json")["config"]["global"]["seed"], 7);
}
