use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use pihl_core::bounds::{bound1, bound2, default_params, BoundInputs, R_EPSILON_CAP};
use pihl_cli::output::fmt_num;

fn pihl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pihl"))
        .args(args)
        .env_remove("PI_HL_QUAD_TOL")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> (String, String) {
    let out = pihl(args);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(out.status.success(), "pihl {args:?} failed: {stderr}");
    (String::from_utf8(out.stdout).unwrap(), stderr)
}

fn records(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s:?}"))
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let (header, rows) = records(csv);
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| num(&r[i])).collect()
}

#[test]
fn bound_json_report() {
    let (stdout, _) = ok(&["bound", "--n", "1000", "--delta", "1", "--lambda-span", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let expected = PI * PI / 1e6 * (1.0 - (8.0 * 1000f64.ln() / 1000.0).sqrt());
    assert!((v["bound2"].as_f64().unwrap() - expected).abs() < 1e-18);
    for key in ["bound_bandlimited", "bound1_raw", "conventional_hl", "pi_hl", "alpha", "L", "epsilon", "N", "delta"] {
        assert!(v[key].is_number(), "{key}");
    }
    assert!((v["pi_hl"].as_f64().unwrap() - PI / 1000.0).abs() < 1e-18);
}

#[test]
fn bound_below_crossover_warns() {
    let (stdout, stderr) = ok(&["bound", "--n", "10", "--delta", "1", "--lambda-span", "1"]);
    assert!(stderr.contains("bound vacuous below Nδ = 26.09"), "{stderr}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["bound2"].as_f64().unwrap() < 0.0);
    assert!(v["bound1_raw"].is_null());
}

#[test]
fn bound_uses_spectrum_and_explicit_params() {
    let (stdout, _) = ok(&[
        "bound", "--n", "100", "--delta", "0.5", "--lambda-minus", "-1", "--lambda-plus", "2",
        "--alpha", "1", "--bandwidth", "60", "--format", "csv",
    ]);
    let (header, rows) = records(&stdout);
    assert_eq!(header.len(), 10);
    let get = |k: &str| num(&rows[0][header.iter().position(|h| h == k).unwrap()]);
    assert_eq!(get("N"), 300.0);
    assert_eq!(get("L"), 60.0);
    let inputs = BoundInputs::new(300.0, 0.5).unwrap();
    let params = pihl_core::bounds::BoundParams::new(1.0, 60.0, &inputs).unwrap();
    assert_eq!(fmt_num(get("bound1_raw")), fmt_num(bound1(&inputs, &params).unwrap()));
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        &["bound", "--n", "1000"][..],
        &["bound", "--n", "1000", "--delta", "1", "--alpha", "2"],
        &["bound", "--n", "0", "--delta", "1"],
        &["bound", "--n", "100", "--delta", "-1"],
        &["scaling", "--n", "0,5"],
        &["probe", "--n", "5", "--samples", "100"],
        &["well", "--width", "1", "--points", "5"],
        &["nonsense"],
    ] {
        let out = pihl(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn figures_are_written() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["figures", "--out", dir.path().to_str().unwrap()]);
    let read = |f: &str| fs::read_to_string(dir.path().join(f)).unwrap();
    for stem in ["fig_nalpha", "fig_repsilon", "fig_bound"] {
        assert!(read(&format!("{stem}.gp")).contains(&format!("'{stem}.csv'")));
    }

    let rep = read("fig_repsilon.csv");
    let r = column(&rep, "r_over_eps2");
    assert_eq!(r.len(), 200);
    assert!(r.iter().all(|&v| v <= R_EPSILON_CAP));
    assert!(column(&rep, "cap").iter().all(|&c| c == 1.52661));

    let na = read("fig_nalpha.csv");
    let alpha = column(&na, "alpha");
    assert_eq!(alpha.len(), 51);
    let ratio = column(&na, "ratio_asymptote");
    assert!(alpha.iter().zip(&ratio).all(|(&a, &q)| a < 1.0 || q < 1.0));

    let fb = read("fig_bound.csv");
    let nd = column(&fb, "N_delta");
    let b1 = column(&fb, "bound1_scaled");
    let b2 = column(&fb, "bound2_scaled");
    assert_eq!(nd.len(), 50);
    for i in 0..50 {
        let inputs = BoundInputs::new(nd[i], 1.0).unwrap();
        let p = default_params(&inputs).unwrap();
        let scale = nd[i] * nd[i] / (PI * PI);
        assert!((b1[i] - bound1(&inputs, &p).unwrap() * scale).abs() <= 1e-10 * (1.0 + b1[i].abs()));
        assert!((b2[i] - bound2(&inputs).unwrap() * scale).abs() <= 1e-10 * (1.0 + b2[i].abs()));
    }
}

#[test]
fn figures_need_existing_directory() {
    let out = pihl(&["figures", "--out", "/nonexistent/figure/dir"]);
    assert!(!out.status.success());
}

#[test]
fn scaling_sweep_table() {
    let (a, _) = ok(&["scaling", "--n", "10..200:10"]);
    let (b, _) = ok(&["scaling", "--n", "10..200:10"]);
    assert_eq!(a, b);
    let (header, rows) = records(&a);
    assert_eq!(header, ["n", "mse", "rmse", "n_rmse", "bound2_delta1", "sandwich_violation"]);
    assert_eq!(rows.len(), 20);
    let last = num(&rows[19][3]);
    assert!((last / PI - 1.0).abs() < 0.06);
    assert!(rows.iter().all(|r| r[5] == "0"));
}

#[test]
fn scaling_leaves_bound_blank_for_n_one() {
    let (out, _) = ok(&["scaling", "--n", "1,2"]);
    let (_, rows) = records(&out);
    assert_eq!(rows[0][4], "");
    assert!(!rows[1][4].is_empty());
}

#[test]
fn csv_numbers_round_trip() {
    let (out, _) = ok(&["scaling", "--n", "3,17,64"]);
    let (_, rows) = records(&out);
    for row in rows {
        for field in &row[1..5] {
            assert_eq!(&fmt_num(num(field)), field);
        }
    }
    assert!(!out.contains('\r'));
}

#[test]
fn kaiser_prior_summary() {
    let (out, _) = ok(&["prior", "--kind", "kaiser", "--alpha", "2", "--bandwidth", "8"]);
    let (_, rows) = records(&out);
    let summary = |name: &str| num(&rows.iter().find(|r| r[0] == name).unwrap()[2]);
    assert!((summary("total_mass") - 1.0).abs() < 1e-6);
    assert!(summary("tail_mass") <= summary("tail_bound"));
    assert!(summary("bandwidth_excess") < 1e-6);
    assert_eq!(rows.iter().filter(|r| r[0] == "density").count(), 401);
}

#[test]
fn smeared_prior_needs_a_core() {
    let out = pihl(&["prior", "--kind", "smeared", "--alpha", "2", "--bandwidth", "8", "--delta", "2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta > 8*alpha/L"));
}

#[test]
fn prior_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("comb.json");
    fs::write(&path, r#"{"kind": "comb", "delta": 0.5, "weights": [[0, 1.0], [1, 3.0]]}"#).unwrap();
    let (out, _) = ok(&["prior", "--prior-json", path.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["total_mass"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert!(v["tail_bound"].is_null());

    fs::write(&path, r#"{"kind": "kaiser", "alpha": 2}"#).unwrap();
    assert!(!pihl(&["prior", "--prior-json", path.to_str().unwrap()]).status.success());
}

#[test]
fn well_report_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.csv");
    let (out, _) = ok(&["well", "--width", "102", "--points", "4000", "--profile", profile.to_str().unwrap()]);
    let energy = column(&out, "energy")[0];
    assert!((energy / (PI * PI / (102.0 * 102.0)) - 1.0).abs() < 1e-4);
    let order = column(&out, "order")[0];
    assert!(order > 1.9 && order < 2.1, "{order}");
    let p = fs::read_to_string(&profile).unwrap();
    let dev = column(&p, "profile")
        .iter()
        .zip(column(&p, "sine"))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(dev < 1e-3, "{dev}");
}

#[test]
fn frequency_bound() {
    let (out, _) = ok(&["freq", "--time", "2", "--lambda-span", "1"]);
    assert!((column(&out, "delta_omega")[0] - PI / 2.0).abs() < 1e-11);
    assert!(!pihl(&["freq", "--time", "0"]).status.success());
    assert!(!pihl(&["freq", "--time", "-1"]).status.success());
    assert!(!pihl(&["freq", "--time", "1", "--lambda-span", "0"]).status.success());
}

#[test]
fn probe_state_round_trip_and_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let (a, _) = ok(&["probe", "--n", "12", "--kind", "sine", "--save-state", state.to_str().unwrap()]);
    let (b, _) = ok(&["probe", "--state", state.to_str().unwrap()]);
    assert_eq!(column(&a, "mse"), column(&b, "mse"));

    let args = ["probe", "--n", "8", "--samples", "20000", "--seed", "11", "--format", "json"];
    let (first, _) = ok(&args);
    let (second, _) = ok(&args);
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    let (mse, emp, se) = (
        v["mse"].as_f64().unwrap(),
        v["empirical_mse"].as_f64().unwrap(),
        v["standard_error"].as_f64().unwrap(),
    );
    assert!((emp - mse).abs() < 4.0 * se);
}

#[test]
fn out_flag_writes_only_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("bound.json");
    let (stdout, _) = ok(&["bound", "--n", "500", "--delta", "1", "--out", target.to_str().unwrap()]);
    assert!(stdout.is_empty());
    let written: serde_json::Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(written["N"], 500.0);
    let entries: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
}

#[test]
fn quadrature_tolerance_from_environment() {
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_pihl"))
            .args(["prior", "--kind", "kaiser", "--alpha", "1", "--bandwidth", "4", "--points", "3"])
            .env("PI_HL_QUAD_TOL", tol)
            .output()
            .unwrap()
    };
    assert!(run("1e-8").status.success());
    let bad = run("loose");
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("PI_HL_QUAD_TOL"));
    assert!(!run("-1").status.success());
}
