use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::json;
use tempfile::TempDir;
use zecmac::estimator::Verdict;
use zecmac::uv::Symbol;
use zecmac_cli::info::{InfoReport, INFO_FILE};
use zecmac_cli::io::{csv_manifest, read_csv, read_json};
use zecmac_cli::manifest::{ManifestFile, MANIFEST_FILE};
use zecmac_cli::region::{csv_name, hull_name, read_region_csv, CodesFile, DiffFile, HullFile, Method, DIFF_FILE};
use zecmac_cli::simulate::{trace_name, SimSummary, TraceRow, SUMMARY_FILE};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn cfg(rel: &str) -> String {
    configs().join(rel).display().to_string()
}

fn zecmac(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zecmac"));
    cmd.args(args).env_remove("ZECMAC_THREADS").env("SOURCE_DATE_EPOCH", "1700000000");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = zecmac(args, &[]);
    assert!(
        out.status.success(),
        "zecmac {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn hash_of(dir: &Path) -> String {
    read_json::<ManifestFile>(&dir.join(MANIFEST_FILE)).unwrap().hash
}

fn info(rel: &str, extra: &[&str]) -> (InfoReport, String, TempDir) {
    let tmp = TempDir::new().unwrap();
    let (config, out) = (cfg(rel), tmp.path().display().to_string());
    let mut args = vec!["info", "--config", &config, "--out", &out];
    args.extend_from_slice(extra);
    let stdout = ok(&args);
    let report: InfoReport = read_json(&tmp.path().join(INFO_FILE)).unwrap();
    assert_eq!(report.manifest, hash_of(tmp.path()));
    (report, stdout, tmp)
}

fn ints(v: &[i64]) -> Vec<Vec<Symbol>> {
    v.iter().map(|&i| vec![Symbol::Int(i)]).collect()
}

#[test]
fn info_five_tuple_has_two_blocks() {
    let (r, stdout, _tmp) = info("uv/five_tuple.json", &[]);
    assert_eq!(r.info_bits, 1.0);
    assert_eq!(r.blocks, vec![ints(&[0, 1, 2]), ints(&[3])]);
    assert_eq!(r.common_cardinality, 2);
    assert!(stdout.contains("I*[X;Y] = 1.0 bits"), "{stdout}");
    assert!(stdout.contains("block 0: {0, 1, 2}"), "{stdout}");
}

#[test]
fn info_identity_and_product() {
    assert_eq!(info("uv/identity.json", &[]).0.info_bits, 2.0);
    let (p, stdout, _tmp) = info("uv/product.json", &["--unrelated", "X:Y"]);
    assert_eq!(p.info_bits, 0.0);
    assert_eq!(p.blocks.len(), 1);
    assert!(p.unrelated.unwrap().holds);
    assert!(stdout.contains("unrelated X | Y: yes"));
}

#[test]
fn info_conditional_takes_the_worst_slice() {
    let (r, _, _tmp) = info(
        "uv/sliced.json",
        &["--x", "X", "--y", "Y", "--given", "W", "--markov", "X:Y:W", "--unrelated", "X:Y"],
    );
    let c = r.conditional.unwrap();
    assert_eq!(c.info_bits, 1.0);
    assert_eq!(c.slices.iter().map(|s| s.blocks).collect::<Vec<_>>(), vec![2, 4]);
    assert!(r.markov.unwrap().holds);
    assert!(!r.unrelated.unwrap().holds);
}

#[test]
fn malformed_config_names_field_and_line() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("bad.json");
    fs::write(&path, "{\n  \"variables\": [\"X\"],\n  \"support\": [[0]],\n  \"suport\": []\n}\n").unwrap();
    let out = zecmac(&["info", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("suport") && err.contains("line 4"), "{err}");
    let out = zecmac(&["info", "--config", "/definitely/missing.json"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = zecmac(&["info", "--config", &cfg("uv/five_tuple.json"), "--x", "Q"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

fn region(mac: &str, extra: &[&str]) -> TempDir {
    let tmp = TempDir::new().unwrap();
    let (config, out) = (cfg(mac), tmp.path().display().to_string());
    let mut args = vec!["region", "--config", &config, "--out", &out];
    args.extend_from_slice(extra);
    ok(&args);
    tmp
}

#[test]
fn adder_methods_agree_at_n1() {
    let tmp = region("mac/adder.json", &["--n", "1", "--method", "both"]);
    let dir = tmp.path();
    let hash = hash_of(dir);
    let diff: DiffFile = read_json(&dir.join(DIFF_FILE)).unwrap();
    assert_eq!(diff.manifest, hash);
    assert!(diff.differences.is_empty(), "{:?}", diff.differences);
    for m in [Method::Thm1, Method::Bruteforce] {
        let rows = read_region_csv(&dir.join(csv_name(m))).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().any(|r| r.w_max == [3, 1, 1] && (r.rates[0] - 3f64.log2()).abs() < 1e-15));
        assert!(rows.iter().any(|r| r.rates == [0.0, 1.0, 0.0]));
        assert!(rows.iter().any(|r| r.rates == [0.0, 0.0, 1.0]));
        assert_eq!(csv_manifest(&dir.join(csv_name(m))).as_deref(), Some(hash.as_str()));
        let hull: HullFile = read_json(&dir.join(hull_name(m))).unwrap();
        assert_eq!(hull.manifest, hash);
        assert_eq!(hull.hull.len(), 3);
    }
}

#[test]
fn full_noise_xor_has_single_row() {
    let tmp = region("mac/xor_noise.json", &["--n", "2", "--method", "both"]);
    let rows = read_region_csv(&tmp.path().join(csv_name(Method::Thm1))).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].rates, vec![0.0; 3]);
    assert_eq!(rows[0].w_max, vec![1; 3]);
    let diff: DiffFile = read_json(&tmp.path().join(DIFF_FILE)).unwrap();
    assert!(diff.differences.is_empty());
}

#[test]
fn adder_n2_region_file() {
    let tmp = region(
        "mac/adder.json",
        &["--n", "2", "--method", "bruteforce", "--cap-u", "4", "--cap-wmax", "4"],
    );
    let rows = read_region_csv(&tmp.path().join(csv_name(Method::Bruteforce))).unwrap();
    let half_log3 = 3f64.log2() / 2.0;
    assert!(rows
        .iter()
        .any(|r| r.n == 2 && r.w_max == [1, 2, 3] && r.rates[1] == 0.5 && (r.rates[2] - half_log3).abs() < 1e-15));
    // The search is exhaustive within the caps: with a full private bit for
    // user 1, user 2 cannot add any message at n = 2.
    assert!(!rows.iter().any(|r| r.rates[1] >= 1.0 && r.rates[2] > 0.0));
    let codes: CodesFile = read_json(&tmp.path().join("codes_bruteforce.json")).unwrap();
    assert_eq!(codes.codes.len(), rows.len());
}

#[test]
fn oversized_search_aborts_before_running() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("r");
    let args = [
        "region",
        "--config",
        &cfg("mac/adder.json"),
        "--n",
        "4",
        "--method",
        "bruteforce",
        "--out",
        out.to_str().unwrap(),
    ];
    let res = zecmac(&args, &[]);
    assert_eq!(res.status.code(), Some(3));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("estimate"), "{err}");
    assert!(!out.exists());
    let res = zecmac(
        &["region", "--config", &cfg("mac/adder.json"), "--n", "9", "--out", out.to_str().unwrap()],
        &[],
    );
    assert_eq!(res.status.code(), Some(3));
}

fn simulate(config: &str, extra: &[&str]) -> (SimSummary, TempDir) {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().display().to_string();
    let mut args = vec!["simulate", "--config", config, "--out", &out];
    args.extend_from_slice(extra);
    ok(&args);
    let s: SimSummary = read_json(&tmp.path().join(SUMMARY_FILE)).unwrap();
    assert_eq!(s.manifest, hash_of(tmp.path()));
    (s, tmp)
}

#[test]
fn zero_noise_run_is_exact() {
    let (s, _tmp) = simulate(&cfg("sim/zero_noise.json"), &[]);
    assert_eq!(s.sup_error, vec![0.0; 3]);
    assert!(s.bounded);
    assert_eq!(s.verdict, None);
}

#[test]
fn feasible_run_is_interior_and_bounded() {
    let (s, tmp) = simulate(&cfg("sim/feasible.json"), &["--seeds", "0..3", "--horizon", "3000"]);
    assert_eq!(s.verdict, Some(Verdict::Interior));
    assert!(s.bounded);
    assert_eq!(s.seeds, vec![0, 1, 2]);
    for r in &s.runs {
        assert!(r.bounded && r.overflow_after_transient == 0 && r.bound_violations == 0);
    }
    let trace = tmp.path().join(trace_name(1));
    let rows: Vec<TraceRow> = read_csv(&trace).unwrap();
    assert_eq!(rows.len(), 3000);
    assert_eq!(csv_manifest(&trace), Some(s.manifest.clone()));
    assert_eq!(fs::read_to_string(&trace).unwrap().lines().nth(1), Some("# seed=1"));
    let sup = rows.iter().map(|r| r.err1).fold(0.0, f64::max);
    assert_eq!(sup, s.runs[1].sup_error[1]);
    assert!(rows.iter().all(|r| r.err0 <= r.bound0 && r.err1 <= r.bound1 && r.err2 <= r.bound2));
}

#[test]
fn starved_run_diverges_with_reported_growth() {
    let (s, _tmp) = simulate(&cfg("sim/starved.json"), &[]);
    assert_eq!(s.verdict, Some(Verdict::Outside));
    assert!(!s.bounded);
    assert_eq!(s.runs.len(), 10);
    for r in &s.runs {
        assert!(!r.bounded);
        let g = r.growth_ratio.expect("growth ratio reported");
        assert!((1.9..=2.1).contains(&g), "{g}");
    }
    assert_eq!(s.rate_margins[1], -1.0);
}

fn write_sim(dir: &Path, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(configs().join("sim/feasible.json")).unwrap()).unwrap();
    v["mac"] = json!(cfg("mac/adder.json"));
    v["code"] = json!(cfg("codes/adder_third.json"));
    v["horizon"] = json!(200);
    edit(&mut v);
    let path = dir.join("sim.json");
    fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path
}

#[test]
fn assumption_violations_carry_labels() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        (json!({"A": [[1.0, 0.0], [0.0, 1.0]], "C": [[1.0, 0.0]], "v_bound": 0.0, "w_bound": 0.0, "l": 1.0}), "A1"),
        (json!({"A": [[0.5]], "C": [[1.0]], "v_bound": 0.0, "w_bound": 0.0, "l": 1.0}), "A5"),
    ];
    for (plant, label) in cases {
        let path = write_sim(tmp.path(), |v| v["plants"][1] = plant.clone());
        let out = zecmac(
            &["simulate", "--config", path.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()],
            &[],
        );
        assert_eq!(out.status.code(), Some(2));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(label), "{err}");
    }
    let path = write_sim(tmp.path(), |_| {});
    let (s, _o) = simulate(path.to_str().unwrap(), &[]);
    let labels: Vec<&str> = s.assumptions[0].iter().map(|a| a.label.as_str()).collect();
    assert_eq!(labels, ["A1", "A2", "A3", "A4", "A5", "A6"]);
}

#[test]
fn simulate_with_code_from_region_output() {
    let reg = region("mac/adder.json", &["--n", "1"]);
    let codes: CodesFile = read_json(&reg.path().join("codes_thm1.json")).unwrap();
    let index = codes.codes.iter().position(|c| c.point.w_max == [3, 1, 1]).unwrap();
    let tmp = TempDir::new().unwrap();
    let hull = reg.path().join(hull_name(Method::Thm1));
    let path = write_sim(tmp.path(), |v| {
        v["code"] = json!(reg.path().join("codes_thm1.json"));
        v["code_index"] = json!(index);
        v["region"] = json!({ "hull": hull });
        v["quantizer"] = json!({"n": 1, "cells": [3, 1, 1]});
        let stable = json!({"A": [[0.5]], "C": [[1.0]], "v_bound": 0.001, "w_bound": 0.001, "l": 1.0, "degenerate_stable": true});
        v["plants"] = json!([{"A": [[1.2]], "C": [[1.0]], "v_bound": 0.001, "w_bound": 0.001, "l": 1.0}, stable, stable]);
    });
    let (s, _o) = simulate(path.to_str().unwrap(), &["--seeds", "4,5"]);
    // The two stable plants have zero entropy, which puts h on a face.
    assert_eq!(s.verdict, Some(Verdict::Boundary));
    assert!(s.bounded);
    assert_eq!(s.blocklength, 1);
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect()
}

#[test]
fn identical_manifest_gives_identical_bytes() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let o = out.to_str().unwrap();
    let (mac, sim) = (cfg("mac/adder.json"), cfg("sim/feasible.json"));
    let runs: [Vec<&str>; 2] = [
        vec!["region", "--config", &mac, "--method", "both", "--out", o],
        vec!["simulate", "--config", &sim, "--seeds", "0..4", "--horizon", "500", "--out", o],
    ];
    for args in runs {
        ok(&args);
        let first = snapshot(&out);
        let again = zecmac(&args, &[("ZECMAC_THREADS", "1")]);
        assert!(again.status.success());
        assert_eq!(first, snapshot(&out), "{args:?}");
        let hash = hash_of(&out);
        let later = zecmac(&args, &[("SOURCE_DATE_EPOCH", "1800000000")]);
        assert!(later.status.success());
        assert_eq!(hash, hash_of(&out));
        fs::remove_dir_all(&out).unwrap();
    }
}

#[test]
fn outputs_round_trip_through_their_schemas() {
    let reg = region("mac/ternary_noisy_max.json", &["--n", "1", "--method", "both"]);
    for name in ["hull_thm1.json", "codes_bruteforce.json", DIFF_FILE, MANIFEST_FILE] {
        let path = reg.path().join(name);
        let text = fs::read_to_string(&path).unwrap();
        let again = match name {
            "hull_thm1.json" => serde_json::to_string_pretty(&read_json::<HullFile>(&path).unwrap()),
            "codes_bruteforce.json" => serde_json::to_string_pretty(&read_json::<CodesFile>(&path).unwrap()),
            DIFF_FILE => serde_json::to_string_pretty(&read_json::<DiffFile>(&path).unwrap()),
            _ => serde_json::to_string_pretty(&read_json::<ManifestFile>(&path).unwrap()),
        }
        .unwrap();
        assert_eq!(text.trim_end(), again, "{name}");
    }
    let (s, tmp) = simulate(&cfg("sim/starved.json"), &["--seeds", "3"]);
    let text = fs::read_to_string(tmp.path().join(SUMMARY_FILE)).unwrap();
    assert_eq!(text.trim_end(), serde_json::to_string_pretty(&s).unwrap());
}

#[test]
fn thread_override_is_validated() {
    let out = zecmac(&["info", "--config", &cfg("uv/identity.json")], &[("ZECMAC_THREADS", "0")]);
    assert_eq!(out.status.code(), Some(2));
    let out = zecmac(&["info", "--config", &cfg("uv/identity.json")], &[("ZECMAC_THREADS", "2")]);
    assert!(out.status.success());
}
