use std::process::{Command, Output};

use serde_json::Value;

fn e2pt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_e2pt")).args(args).output().expect("spawn e2pt")
}

fn config(name: &str) -> String {
    format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

/// (first column, verdict) for every data row.
fn verdicts(csv: &str) -> Vec<(f64, String)> {
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "verdict").unwrap();
    csv.lines()
        .skip(1)
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            (cells[0].parse().unwrap(), cells[col].to_string())
        })
        .collect()
}

fn verdict_at(csv: &str, value: f64) -> String {
    let rows = verdicts(csv);
    rows.into_iter().find(|(x, _)| (x - value).abs() < 1e-9).unwrap_or_else(|| panic!("no row {value}")).1
}

#[test]
fn mu3_sweep_flips_at_mu4() {
    let out = e2pt(&["classify", "-c", &config("classify_mu3.json")]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "mu3,theta,lambda_re,lambda_im,rho,tau,verdict,margin_ineq1,margin_ineq2"
    );
    assert_eq!(lines.count(), 51);
    // the grid steps by 0.03, so mu3 = 1 falls between two rows
    for (mu3, verdict) in verdicts(&csv) {
        assert_eq!(verdict, if mu3 < 1.0 { "broken" } else { "symmetric" }, "mu3 = {mu3}");
    }
}

#[test]
fn theta_sweep_flips_at_eight() {
    let csv = stdout(&e2pt(&["classify", "-c", &config("classify_theta.json")]));
    assert!(csv.starts_with("theta,lambda_re"));
    assert_eq!(verdict_at(&csv, 7.8), "broken");
    assert_eq!(verdict_at(&csv, 8.0), "boundary");
    assert_eq!(verdict_at(&csv, 8.2), "symmetric");
    // divergent lambda at the boundary is left empty rather than printed as inf
    assert!(!csv.contains("inf") && !csv.contains("NaN"));
}

#[test]
fn equal_endpoints_give_identical_rows() {
    let out = e2pt(&[
        "classify",
        "-c",
        &config("classify_mu3.json"),
        "--set",
        "axes.0.min=1.5",
        "--set",
        "axes.0.max=1.5",
        "--set",
        "axes.0.steps=2",
    ]);
    let csv = stdout(&out);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], rows[1]);
}

#[test]
fn toy_spectrum_reports_both_conventions() {
    let v = json(&e2pt(&["spectrum", "-c", &config("spectrum_toy.json")]));
    assert_eq!(v["verdict"], "all-real");
    let oracle = v["toy"]["oracle"].as_array().unwrap();
    for level in oracle {
        let n = level["n"].as_i64().unwrap() as f64;
        let e = level["energy"].as_f64().unwrap();
        assert!((e - (n * n - 0.3 * n)).abs() < 1e-12, "n = {n}: {e}");
    }
    let pi = std::f64::consts::PI;
    let paper_one = v["toy"]["paper"].as_array().unwrap().iter().find(|l| l["n"] == 1).unwrap();
    assert!((paper_one["energy"].as_f64().unwrap() - (4.0 * pi * pi - 0.6 * pi)).abs() < 1e-12);
    for key in ["model", "params", "representation", "eigenvalues"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn hermitian_input_is_all_real() {
    let v = json(&e2pt(&["spectrum", "-c", &config("spectrum_symmetric.json")]));
    assert_eq!(v["verdict"], "all-real");
    let e = &v["eigenvalues"][0];
    assert!(e["re"].is_number() && e["im"].is_number() && e["converged"].is_boolean());
}

#[test]
fn ep_and_hermitize() {
    let v = json(&e2pt(&["ep", "-c", &config("ep_theta.json")]));
    assert!((v["exceptional_point"].as_f64().unwrap() - 8.0).abs() < 1e-6);

    let v = json(&e2pt(&["hermitize", "-c", &config("hermitize_worked.json")]));
    let half_ln2 = 0.5 * 2f64.ln();
    assert!((v["dyson"]["lambda"]["re"].as_f64().unwrap() - half_ln2).abs() < 1e-14);
    assert!(v["hermiticity_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn verify_passes_and_catches_fault() {
    let ok = e2pt(&["verify", "--only", "adjoint", "--json"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["suite"] == "adjoint"));

    let bad = e2pt(&["verify", "--only", "adjoint", "--inject-fault", "adjoint-theta"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("adjoint closed-form vs oracle"));
    assert!(stdout(&bad).contains("offending draw"));
}

#[test]
fn exit_codes() {
    let unknown_field = e2pt(&["classify", "-c", &config("classify_mu3.json"), "--set", "bogus=1"]);
    assert_eq!(unknown_field.status.code(), Some(2));
    assert!(!unknown_field.stderr.is_empty());

    let bad_axis = e2pt(&["classify", "-c", &config("classify_mu3.json"), "--set", "axes.0.param=mu10"]);
    assert_eq!(bad_axis.status.code(), Some(2));

    let missing = e2pt(&["classify", "-c", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let tiny = e2pt(&["spectrum", "-c", &config("spectrum_symmetric.json"), "--set", "representation.dims.0=2"]);
    assert_eq!(tiny.status.code(), Some(3));
}
