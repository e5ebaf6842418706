use std::io::Write as _;
use std::process::Command;

use serde_json::Value as Json;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_objprior")).args(args).output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn json_records(args: &[&str]) -> (Vec<Json>, i32) {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--format", "json"]);
    let (out, _, code) = run(&full);
    (out.lines().map(|l| serde_json::from_str(l).unwrap()).collect(), code)
}

fn of_kind<'a>(recs: &'a [Json], kind: &str) -> Vec<&'a Json> {
    recs.iter().filter(|r| r["record"] == kind).collect()
}

fn num(r: &Json, field: &str) -> f64 {
    r[field].as_f64().unwrap_or_else(|| panic!("{field} missing in {r}"))
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn mdip_prior_reports_the_constant() {
    let (recs, code) = json_records(&["prior", "--model", "bernoulli", "--kind", "mdip"]);
    assert_eq!(code, 0);
    let p = of_kind(&recs, "prior")[0];
    assert!((num(p, "constant") - 1.6186).abs() <= 5e-4);
    assert!((num(p, "lower_limit") - num(p, "constant")).abs() < 1e-4);
    assert_eq!(of_kind(&recs, "density").len(), 2048);
}

#[test]
fn uniform_density_column_is_one() {
    let (recs, code) = json_records(&["prior", "--model", "bernoulli", "--kind", "uniform", "--grid", "100"]);
    assert_eq!(code, 0);
    let rows = of_kind(&recs, "density");
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| num(r, "density") == 1.0));
}

#[test]
fn normalizing_haldane_fails() {
    let (out, err, code) = run(&["prior", "--model", "bernoulli", "--kind", "haldane", "--normalize"]);
    assert_ne!(code, 0);
    assert!(out.contains("improper measure"));
    assert!(err.contains("improper measure"));
    // without normalization the measure is tabulated as improper
    let (recs, code) = json_records(&["prior", "--kind", "haldane", "--grid", "16"]);
    assert_eq!(code, 0);
    assert_eq!(of_kind(&recs, "prior")[0]["proper"], false);
}

#[test]
fn succession_table_cells() {
    let (recs, code) = json_records(&["succession", "--kind", "uniform,jeffreys,mixed,haldane", "--n-max", "5"]);
    assert_eq!(code, 0);
    assert!(!of_kind(&recs, "warning").is_empty());
    let rows = of_kind(&recs, "succession");
    assert_eq!(rows.len(), 6);
    assert!((num(rows[4], "uniform") - 5.0 / 6.0).abs() <= 1e-10);
    assert!((num(rows[0], "jeffreys") - 0.5).abs() <= 1e-12);
    assert!((num(rows[2], "mixed(0.25,0.25)") - 0.9).abs() <= 1e-9);
    assert_eq!(rows[1]["haldane"], "improper");
    assert_eq!(of_kind(&recs, "note").len(), 6);

    let (recs, _) = json_records(&["succession", "--kind", "haldane", "--n-max", "2", "--haldane-limit"]);
    let rows = of_kind(&recs, "succession");
    assert_eq!(num(rows[0], "haldane"), 0.5);
    assert_eq!(num(rows[2], "haldane"), 1.0);
    assert!(of_kind(&recs, "warning").is_empty());
}

#[test]
fn efficiency_report() {
    let (recs, code) = json_records(&[
        "efficiency", "--model", "bernoulli", "--kind", "uniform", "--successes", "1",
        "--perturbations", "100", "--seed", "17",
    ]);
    assert_eq!(code, 0);
    let rows = of_kind(&recs, "efficiency");
    assert_eq!(rows[0]["candidate"], "posterior");
    assert!(num(rows[0], "delta").abs() <= 1e-8);
    assert_eq!(num(rows[0], "efficiency"), 1.0);
    assert_eq!(rows[1]["candidate"], "likelihood-only");
    assert!(num(rows[1], "delta").abs() <= 1e-8);
    let p = of_kind(&recs, "perturbations")[0];
    assert_eq!(p["count"], 100);
    assert!(num(p, "min_delta") > 0.0);
    assert!(num(p, "max_kl_gap") <= 1e-8);
}

#[test]
fn efficiency_without_perturbations_has_two_rows() {
    let (recs, code) = json_records(&["efficiency", "--successes", "2", "--failures", "5"]);
    assert_eq!(code, 0);
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["record"] == "efficiency"));
    for field in ["output_info", "input_info", "delta", "efficiency"] {
        assert!(recs[0].get(field).is_some());
    }
}

#[test]
fn efficiency_needs_a_seed_and_a_proper_prior() {
    let (out, _, code) = run(&["efficiency", "--successes", "1", "--perturbations", "3"]);
    assert_eq!(code, 1);
    assert!(out.contains("--seed"));
    let (out, _, code) = run(&["efficiency", "--kind", "haldane", "--successes", "1", "--failures", "1"]);
    assert_eq!(code, 1);
    assert!(out.contains("not a proper prior"));
    let (out, _, code) = run(&["efficiency", "--kind", "mixed", "--successes", "1"]);
    assert_eq!(code, 1);
    assert!(out.contains("has atoms"));
}

#[test]
fn ar1_long_series() {
    let (recs, code) = json_records(&["ar1", "--T", "500", "--b", "0.5", "--sigma", "1", "--seed", "8"]);
    assert_eq!(code, 0);
    let s = of_kind(&recs, "ar1-summary")[0];
    assert!(num(s, "mean_difference") < 0.02);
    let near_one = of_kind(&recs, "kernel")
        .into_iter()
        .find(|r| num(r, "gap") == 1e-6 && num(r, "b") > 0.0)
        .unwrap();
    assert!(num(near_one, "jeffreys") > 700.0);
    assert!(num(near_one, "mdip") < 0.002);
}

#[test]
fn ar1_flat_series_from_file() {
    let f = temp_file("ar1\n0\n0\n");
    let path = f.path().to_str().unwrap();
    let (recs, code) = json_records(&["ar1", "--data", path, "--grid", "400"]);
    assert_eq!(code, 0);
    let posts = of_kind(&recs, "ar1");
    // flat likelihood: the posterior is the prior kernel, peaked at 0 for
    // mdip and at the extreme nodes for jeffreys
    let mdip_mode = num(posts[0], "mode");
    let jeff_mode = num(posts[1], "mode");
    assert!(mdip_mode.abs() < 0.01, "{mdip_mode}");
    assert!(jeff_mode.abs() > 0.999, "{jeff_mode}");
    assert_eq!(of_kind(&recs, "ar1-summary")[0]["T"], 2);
}

#[test]
fn ar1_rejects_bad_parameters() {
    for args in [
        &["ar1", "--seed", "1", "--b", "1.0"][..],
        &["ar1", "--seed", "1", "--b", "-1.5"],
        &["ar1", "--seed", "1", "--sigma", "0"],
        &["ar1", "--seed", "1", "--T", "1"],
        &["ar1"],
    ] {
        let (out, _, code) = run(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.contains("error"));
        assert!(!out.contains("kernel"));
    }
}

#[test]
fn posterior_from_counts_and_files() {
    let (recs, code) = json_records(&["posterior", "--kind", "mixed", "--k0", "0.25", "--k1", "0.25", "--successes", "3", "--grid", "64"]);
    assert_eq!(code, 0);
    assert!(of_kind(&recs, "warning").is_empty());
    let p = of_kind(&recs, "posterior")[0];
    assert!((num(p, "marginal") - 0.375).abs() < 1e-12);
    let atoms = of_kind(&recs, "atoms");
    assert_eq!(atoms.len(), 2);
    assert!((num(atoms[1], "mass") - 2.0 / 3.0).abs() < 1e-12);

    let f = temp_file("bernoulli\n1\n1\n0\n");
    let (recs, code) = json_records(&["posterior", "--kind", "uniform", "--data", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let p = of_kind(&recs, "posterior")[0];
    assert!((num(p, "marginal") - 1.0 / 12.0).abs() < 1e-12);
    assert!((num(p, "mean") - 0.6).abs() < 1e-12);
    for field in ["nodes", "density"] {
        assert!(of_kind(&recs, "density")[0].get(field).is_some());
    }

    let (out, _, code) = run(&["posterior", "--kind", "haldane", "--successes", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("improper posterior"));

    let bad = temp_file("bernoulli\n1\nseven\n");
    let (out, _, code) = run(&["posterior", "--kind", "uniform", "--data", bad.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("line 3"));
}

#[test]
fn correlation_model_commands() {
    let (recs, code) = json_records(&["prior", "--model", "correlation", "--kind", "mdip", "--grid", "256"]);
    assert_eq!(code, 0);
    for r in of_kind(&recs, "density") {
        let x = num(r, "nodes");
        if x.abs() < 0.99 {
            let exact = 1.0 / (std::f64::consts::PI * (1.0 - x * x).sqrt());
            assert!((num(r, "density") - exact).abs() < 1e-4);
        }
    }
    let (_, _, code) = run(&["prior", "--model", "correlation", "--kind", "haldane"]);
    assert_eq!(code, 1);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let args = ["succession", "--kind", "uniform,jeffreys", "--n-max", "4", "--grid", "256"];
    let (csv, _, _) = run(&[&args[..], &["--format", "csv"]].concat());
    let (json, _, _) = run(&[&args[..], &["--format", "json"]].concat());
    let csv_rows: Vec<&str> = csv.lines().filter(|l| l.starts_with("succession,")).collect();
    let json_rows: Vec<&str> = json.lines().collect();
    assert_eq!(csv_rows.len(), json_rows.len());
    for (c, j) in csv_rows.iter().zip(json_rows) {
        let cells: Vec<&str> = c.split(',').collect();
        let obj: serde_json::Map<String, Json> = serde_json::from_str(j).unwrap();
        for (cell, name) in cells[2..].iter().zip(["uniform", "jeffreys"]) {
            assert!(j.contains(&format!("\"{name}\":{cell}")), "{cell} not in {j}");
            assert_eq!(cell.parse::<f64>().unwrap(), obj[name].as_f64().unwrap());
        }
    }
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prior.csv");
    let (out, _, code) = run(&["prior", "--kind", "uniform", "--grid", "8", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("record,label"));
    assert_eq!(text.lines().filter(|l| l.starts_with("density,")).count(), 8);
}

#[test]
fn usage_errors_exit_before_computing() {
    for args in [
        &["prior", "--kind", "flat"][..],
        &["prior", "--kind", "uniform", "--grid", "1"],
        &["prior", "--kind", "uniform", "--scheme", "simpson"],
        &["prior", "--kind", "uniform", "--format", "xml"],
        &["prior", "--model", "poisson", "--kind", "uniform"],
        &["frobnicate"],
    ] {
        let (out, err, code) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
}

#[test]
fn table_format_is_the_default() {
    let (out, _, code) = run(&["prior", "--kind", "mdip", "--grid", "2048"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# prior\n"));
    assert!(out.contains("1.618576166"));
}
