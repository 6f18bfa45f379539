use std::process::Command;

use adictrop::polyhedra::io::ComplexJson;
use adictrop::valpoly::{parse_poly, FieldProfile, LaurentPolynomial, PolyJson};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["adictrop"];
    argv.extend(args);
    let status = adictrop_cli::run(argv, &mut out, &mut err);
    (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (status, out, err) = run(args);
    assert_eq!(status, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "adictrop/1");
    v
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn empty_polynomial_is_a_parse_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_adictrop")).args(["trop", ""]).output().unwrap();
    assert_ne!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["schema"], "adictrop/1");
    assert_eq!(e["error"]["kind"], "syntax");
}

#[test]
fn usage_errors_are_json_too() {
    let (status, _, err) = run(&["frobnicate"]);
    assert_eq!(status, 2);
    let e: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(e["error"]["kind"], "usage");
}

#[test]
fn line_and_its_round_trip() {
    let v = json(&["trop", "x+y+1"]);
    let cells = v["hypersurface"]["cells"].as_array().unwrap();
    assert_eq!(cells.iter().filter(|c| c["dim"] == 1).count(), 3);
    // the polynomial and the complex read back through their input schemas
    let profile = FieldProfile::rational();
    let p: PolyJson = serde_json::from_value(v["polynomial"]["json"].clone()).unwrap();
    assert_eq!(LaurentPolynomial::from_json(&p, &profile).unwrap(), parse_poly("x+y+1", &profile).unwrap());
    let stripped: Vec<Value> = cells
        .iter()
        .map(|c| serde_json::json!({"ineqs": c["ineqs"], "eqs": c["eqs"], "vertices": c["vertices"], "rays": c["rays"], "lineality": c["lineality"]}))
        .collect();
    let cj: ComplexJson = serde_json::from_value(serde_json::json!({"ambient": 2, "cells": stripped})).unwrap();
    assert_eq!(cj.build().unwrap().len(), 4);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        vec!["trop", "x^2 + t*x*y + y^2 + t^2"],
        vec!["trop", "x+y+1", "--format", "svg"],
        vec!["tower", "--insert", "1/2,1/3", "--format", "text"],
        vec!["extended", "x*y + y*z + t*x*z"],
    ] {
        assert_eq!(run(&args), run(&args));
    }
}

#[test]
fn initial_forms() {
    let v = json(&["initial", "x+y+t", "--at", "1,1"]);
    assert_eq!(v["initial_form"]["text"], "x + y + 1");
    assert_eq!(v["terms"], 3);
    let (status, _, err) = run(&["initial", "x+y+t", "--at", "1/2,0"]);
    assert_eq!(status, 1);
    assert!(err.contains("rationality"));
    let v = json(&["initial", "x+y+t", "--at", "1/2,0", "--gamma", "2"]);
    assert_eq!(v["terms"], 1);
    let (status, out, _) = run(&["initial", "x + 2*y", "--at", "0,0", "--field", "F_3", "--format", "text"]);
    assert_eq!(status, 0);
    // scaled so that the lexicographically first exponent (y) has coefficient 1
    assert_eq!(out.trim(), "2*x + y");
}

#[test]
fn explode_with_and_without_refinement() {
    let dir = tempfile::tempdir().unwrap();
    let coarse = json(&["explode", "x+y+1"]);
    assert_eq!(coarse["cells"].as_array().unwrap().len(), 4);
    // split the ray along the positive x axis at (2, 0)
    let refine = write(
        &dir,
        "refine.json",
        r#"{"ambient": 2, "cells": [
            {"vertices": [["0","0"], ["2","0"]]},
            {"vertices": [["2","0"]], "rays": [[1,0]]},
            {"vertices": [["0","0"]], "rays": [[0,1]]},
            {"vertices": [["0","0"]], "rays": [[-1,-1]]}]}"#,
    );
    let fine = json(&["explode", "x+y+1", "--refine", &refine]);
    let cells = fine["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 6);
    for c in cells {
        let t = c["trop_cell"].as_u64().unwrap() as usize;
        assert_eq!(c["fiber"], coarse["cells"][t]["fiber"]);
    }
}

#[test]
fn middle_chart() {
    let dir = tempfile::tempdir().unwrap();
    let cone = write(&dir, "middle.json", r#"{"rays": [[0,1],[1,1]]}"#);
    let v = json(&["chart", "--cone", &cone]);
    let basis: Vec<&str> = v["hilbert_basis"].as_array().unwrap().iter().map(|e| e["monomial"].as_str().unwrap()).collect();
    assert_eq!(basis, ["t", "p*t^-1"]);
    assert_eq!(v["hilbert_basis"][1]["u"], serde_json::json!([-1]));
    assert_eq!(v["hilbert_basis"][1]["n"], "1");
    assert_eq!(v["relations"][0]["text"], "x*y = p");
    let (_, text, _) = run(&["chart", "--cone", &cone, "--format", "text", "--uniformizer", "q"]);
    assert!(text.contains("x*y = q"));
    // admissibility only gets easier over a finer value group
    let (status, _, _) = run(&["chart", "--cone", &cone, "--gamma", "2"]);
    assert_eq!(status, 0);
}

#[test]
fn model_from_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let complex = write(
        &dir,
        "c.json",
        r#"{"ambient": 1, "cells": [{"vertices": [["0"]], "rays": [[-1]]}, {"vertices": [["0"], ["1"]]}, {"vertices": [["1"]], "rays": [[1]]}]}"#,
    );
    let cfg = write(&dir, "job.json", &format!(r#"{{"inputs": {{"complex": {complex:?}}}, "format": "dot"}}"#));
    let (status, out, err) = run(&["model", "--config", &cfg]);
    assert_eq!(status, 0, "{err}");
    assert!(out.starts_with("graph special_fiber"));
    assert_eq!(out.matches(" -- ").count(), 1);
    let bad = write(&dir, "bad.json", r#"{"inputs": {}, "verbose": true}"#);
    let (status, _, err) = run(&["model", "--config", &bad]);
    assert_eq!(status, 1);
    assert!(err.contains("verbose"));
}

#[test]
fn metrized_complex_and_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let v = json(&["metrized", "x + y + 1 + t*x*y", "--out", out_dir.to_str().unwrap()]);
    let edges = v["metrized"]["edges"].as_array().unwrap();
    let lengths: Vec<&Value> = edges.iter().map(|e| &e["length"]).filter(|l| *l != "inf").collect();
    assert_eq!(lengths, [&Value::from("1")]);
    let svg = std::fs::read_to_string(out_dir.join("metrized.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(out_dir.join("metrized.json").exists() && out_dir.join("metrized.txt").exists());
    let (status, _, _) = run(&["initial", "x+1", "--at", "0", "--format", "svg"]);
    assert_eq!(status, 1);
}

#[test]
fn tower_table() {
    let v = json(&["tower", "--insert", "1/2,1/4,1/8"]);
    let counts: Vec<u64> = v["stages"].as_array().unwrap().iter().map(|s| s["components"].as_u64().unwrap()).collect();
    assert_eq!(counts, [2, 3, 4, 5]);
    assert_eq!(v["trace"]["class"], "limit boundary point");
    assert_eq!(v["gamma"], 8);
    let (status, _, err) = run(&["tower", "--insert", "1/4,1/2"]);
    assert_eq!(status, 1);
    assert!(err.contains("insertion_order"));
}

#[test]
fn extended_plane() {
    let v = json(&["extended", "x+y+z"]);
    let orbits = v["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), 7);
    assert_eq!(orbits.iter().filter(|o| o["part"] == "hypersurface").count(), 4);
    let (status, _, err) = run(&["extended", "x+y^2+z"]);
    assert_eq!(status, 1);
    assert!(err.contains("non_homogeneous"));
}

#[test]
fn check_reports_its_seed() {
    let out = Command::new(env!("CARGO_BIN_EXE_adictrop"))
        .args(["check", "--polynomials", "2", "--points", "60", "--cones", "3", "--format", "json"])
        .env("ADICTROP_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 17);
    assert_eq!(v["suites"].as_array().unwrap().len(), 4);
    let out = Command::new(env!("CARGO_BIN_EXE_adictrop"))
        .args(["check", "--polynomials", "1", "--points", "50", "--cones", "1"])
        .env("ADICTROP_SEED", "seventeen")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
