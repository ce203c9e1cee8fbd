use std::collections::BTreeMap;

use deformed_e2::dyson::{adjoint_poly, DysonParams};
use deformed_e2::models::{
    classify_region, find_exceptional_point, hermitian_counterpart_pt5, rho_for_lambda, solve_generic_numeric,
    solve_pt5_special, solve_pt5_undeformed, toy_lambda_from_ratio, toy_model, toy_spectrum, Convention,
    HamiltonianCoeffs, PathParam, PhasePath, SLOTS, SOLVED_TOL,
};
use deformed_e2::spectral::{diagonalize_classify, poly_to_matrix, Representation, J_SIGN_ON_FOURIER_MODE};
use deformed_e2::{algebra::hermiticity_residual, models::build_general, Error, Poly};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{EpCriterion, ModelKind, Point, ScanConfig};
use crate::CliError;

pub const CSV_TAIL: [&str; 8] = ["theta", "lambda_re", "lambda_im", "rho", "tau", "verdict", "margin_ineq1", "margin_ineq2"];

/// One classified grid point. `None` fields are written as empty cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row {
    pub lambda: Option<Complex64>,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub verdict: String,
    pub margin1: Option<f64>,
    pub margin2: Option<f64>,
    pub error: Option<String>,
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Empty for absent or non-finite values (the latter occur at exceptional
/// points, where `lambda` diverges).
fn cell(x: Option<f64>) -> String {
    x.filter(|v| v.is_finite()).map(fmt_f64).unwrap_or_default()
}

fn toy_lambda(point: &Point) -> Result<Complex64, Error> {
    if point.values.contains_key("lambda") {
        Ok(Complex64::new(point.get("lambda"), 0.0))
    } else {
        toy_lambda_from_ratio(point.get("mu3"), point.get("mu4"))
    }
}

fn classify_point(model: ModelKind, point: &Point, seed: u64) -> Result<Row, Error> {
    let th = point.theta;
    match model {
        ModelKind::Pt5General | ModelKind::Pt5Special => {
            let mu = point.mu();
            let v = classify_region(&mu, th, model.mode())?;
            let mu_eff = if model == ModelKind::Pt5Special { mu.with_special_choice() } else { mu };
            let rho = v.lambda.map(|l| rho_for_lambda(&mu_eff, l)).transpose()?;
            Ok(Row {
                lambda: v.lambda,
                rho: rho.map(|r| r.re),
                tau: v.lambda.map(|_| 0.0),
                verdict: v.phase.to_string(),
                margin1: Some(v.margin1),
                margin2: Some(v.margin2),
                error: v.diagnostic,
            })
        }
        ModelKind::Toy => {
            let lambda = toy_lambda(point)?;
            let (mu3, mu4) = (point.get("mu3"), point.get("mu4"));
            let gap = if point.values.contains_key("lambda") { None } else { Some(mu3.abs() - mu4.abs()) };
            let verdict = match gap {
                Some(g) if g.abs() <= deformed_e2::models::BOUNDARY_TOL * mu3.abs().max(mu4.abs()) => "boundary",
                Some(g) if g < 0.0 => "broken",
                _ => "symmetric",
            };
            let rho = if lambda.im == 0.0 && lambda.re != 0.0 {
                Some(toy_model(point.get("mu1"), mu4, lambda.re, th)?.params.rho.re)
            } else {
                None
            };
            Ok(Row { lambda: Some(lambda), rho, tau: Some(0.0), verdict: verdict.into(), margin1: None, margin2: gap, error: None })
        }
        ModelKind::GeneralCoeffs => {
            let sol = solve_generic_numeric(&point.coeffs(), th, seed)?;
            Ok(Row {
                lambda: Some(sol.params.lambda),
                rho: Some(sol.params.rho.re),
                tau: Some(sol.params.tau.re),
                verdict: if sol.solved { "symmetric" } else { "broken" }.into(),
                margin1: None,
                margin2: Some(SOLVED_TOL - sol.residual),
                error: None,
            })
        }
    }
}

/// Classifies every grid point on `threads` workers; rows come back in grid
/// order. The second value counts points that failed numerically.
pub fn classify(cfg: &ScanConfig, threads: usize) -> Result<(String, usize), CliError> {
    cfg.validate(true)?;
    let grid = cfg.grid();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| CliError::Config(e.to_string()))?;
    let rows: Vec<(Point, Result<Row, Error>)> = pool.install(|| {
        grid.par_iter()
            .map(|g| {
                let p = cfg.assignment(g);
                let r = classify_point(cfg.model, &p, cfg.seed);
                (p, r)
            })
            .collect()
    });

    let swept: Vec<&str> = cfg.axes.iter().map(|a| a.param.as_str()).filter(|p| *p != "theta").collect();
    let mut out = String::new();
    let header: Vec<&str> = swept.iter().copied().chain(CSV_TAIL).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    let mut failures = 0;
    for (point, row) in rows {
        let row = row.unwrap_or_else(|e| {
            failures += 1;
            Row { verdict: "error".into(), error: Some(e.to_string()), ..Row::default() }
        });
        let mut cells: Vec<String> = swept.iter().map(|p| fmt_f64(point.get(p))).collect();
        cells.push(fmt_f64(point.theta));
        cells.push(cell(row.lambda.map(|l| l.re)));
        cells.push(cell(row.lambda.map(|l| l.im)));
        cells.extend([cell(row.rho), cell(row.tau), row.verdict.clone(), cell(row.margin1), cell(row.margin2)]);
        out.push_str(&cells.join(","));
        out.push('\n');
        if let (Some(e), "error") = (&row.error, row.verdict.as_str()) {
            eprintln!("warning: {e}");
        }
    }
    Ok((out, failures))
}

fn hamiltonian(cfg: &ScanConfig, point: &Point) -> Result<Poly, CliError> {
    let th = point.theta;
    Ok(match cfg.model {
        ModelKind::Pt5General => point.mu().hamiltonian(th),
        ModelKind::Pt5Special => point.mu().with_special_choice().hamiltonian(th),
        ModelKind::GeneralCoeffs => build_general(&point.coeffs(), th),
        ModelKind::Toy => {
            let lambda = toy_lambda(point).map_err(numeric)?;
            if lambda.im != 0.0 {
                return Err(CliError::Numeric("toy model needs |mu3| > |mu4| for a real lambda".into()));
            }
            toy_model(point.get("mu1"), point.get("mu4"), lambda.re, th).map_err(numeric)?.mu.hamiltonian(th)
        }
    })
}

fn numeric(e: Error) -> CliError {
    CliError::Numeric(e.to_string())
}

fn cx_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn params_json(point: &Point) -> Value {
    let mut m: BTreeMap<String, Value> = point.values.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    m.insert("theta".into(), json!(point.theta));
    json!(m)
}

fn rep_json(rep: &Representation, delta: Option<usize>) -> Value {
    json!({ "kind": rep.kind.to_string(), "dims": rep.dims, "j0": rep.j0, "theta": rep.theta, "delta": delta })
}

/// Toy levels: circle diagonalization of `mu1 J² + eps J` labelled by mode
/// number, and the published `2 pi`-scaled formula.
fn toy_levels(cfg: &ScanConfig, point: &Point) -> Result<Value, CliError> {
    let th = point.theta;
    let lambda = toy_lambda(point).map_err(numeric)?;
    if lambda.im != 0.0 {
        return Err(CliError::Numeric("toy model needs |mu3| > |mu4| for a real lambda".into()));
    }
    let t = toy_model(point.get("mu1"), point.get("mu4"), lambda.re, th).map_err(numeric)?;
    let [lo, hi] = cfg.spectrum.levels;
    if lo > hi {
        return Err(CliError::Config(format!("empty level range [{lo}, {hi}]")));
    }
    let mut out = serde_json::Map::new();
    out.insert("lambda".into(), json!(lambda.re));
    out.insert("epsilon".into(), json!(t.epsilon));
    out.insert("shift".into(), json!(t.shift));
    out.insert("shift_published".into(), json!(t.shift_published));
    if cfg.spectrum.convention.includes(Convention::Oracle) {
        let m = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
        let circle = Representation::circle(0.0, m.max(1)).map_err(numeric)?;
        let p = Poly::from_terms(
            [(deformed_e2::Monomial::new(0, 0, 2), t.h.coeff(SLOTS[0])), (deformed_e2::Monomial::new(0, 0, 1), t.h.coeff(SLOTS[1]))],
            0.0,
        );
        // the circle matrix is diagonal; index k holds J = k - M, i.e. the mode m = s (k - M)
        let mat = poly_to_matrix(&p, &circle).map_err(numeric)?;
        let by_mode: BTreeMap<i64, f64> = (0..circle.size())
            .map(|k| (J_SIGN_ON_FOURIER_MODE * (k as i64 - m.max(1) as i64), mat[(k, k)].re))
            .collect();
        let levels: Vec<Value> = (lo..=hi)
            .map(|n| json!({ "n": n, "energy": by_mode[&n], "formula": toy_spectrum(t.mu.m(1), t.epsilon, n, Convention::Oracle) }))
            .collect();
        out.insert("oracle".into(), json!(levels));
    }
    if cfg.spectrum.convention.includes(Convention::Paper) {
        let levels: Vec<Value> =
            (lo..=hi).map(|n| json!({ "n": n, "energy": toy_spectrum(t.mu.m(1), t.epsilon, n, Convention::Paper) })).collect();
        out.insert("paper".into(), json!(levels));
    }
    Ok(Value::Object(out))
}

pub fn spectrum(cfg: &ScanConfig) -> Result<String, CliError> {
    cfg.validate(false)?;
    if !cfg.axes.is_empty() {
        return Err(CliError::Config("spectrum works on a single point; remove the axes".into()));
    }
    let point = cfg.base_point();
    let h = hamiltonian(cfg, &point)?;
    let (rep, delta) = cfg.representation(point.theta)?;
    let report = diagonalize_classify(&h, &rep, delta).map_err(numeric)?;
    let eig: Vec<Value> = report
        .eigenvalues
        .iter()
        .zip(&report.converged)
        .map(|(e, ok)| json!({ "re": e.re, "im": e.im, "converged": ok }))
        .collect();
    let mut doc = json!({
        "model": cfg.model.name(),
        "params": params_json(&point),
        "representation": rep_json(&rep, delta),
        "eigenvalues": eig,
        "verdict": report.verdict.to_string(),
    });
    if let Some(d) = report.diagnostic {
        doc["diagnostic"] = json!(d);
    }
    if cfg.model == ModelKind::Toy {
        doc["toy"] = toy_levels(cfg, &point)?;
    }
    Ok(to_json(&doc))
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn ep(cfg: &ScanConfig) -> Result<String, CliError> {
    cfg.validate(false)?;
    let Some(ep) = &cfg.ep else {
        return Err(CliError::Config("ep needs an `ep` block with `param` and `bracket`".into()));
    };
    if !matches!(cfg.model, ModelKind::Pt5General | ModelKind::Pt5Special) {
        return Err(CliError::Config("ep supports the pt5-general and pt5-special models".into()));
    }
    let param = if ep.param == "theta" {
        PathParam::Theta
    } else {
        PathParam::Mu(ep.param.trim_start_matches("mu").parse().map_err(|_| CliError::Config(format!("bad param `{}`", ep.param)))?)
    };
    let base = cfg.base_point();
    let mut path = PhasePath::new(base.mu(), base.theta, param, cfg.model.mode());
    if ep.criterion == EpCriterion::FirstInequality {
        path = path.first_inequality();
    }
    let x = find_exceptional_point(&path, (ep.bracket[0], ep.bracket[1])).map_err(numeric)?;
    let doc = json!({
        "model": cfg.model.name(),
        "params": params_json(&base),
        "param": ep.param,
        "bracket": ep.bracket,
        "criterion": match ep.criterion { EpCriterion::Overall => "overall", EpCriterion::FirstInequality => "first-inequality" },
        "exceptional_point": x,
    });
    Ok(to_json(&doc))
}

fn coeffs_json(p: &Poly) -> Value {
    let terms: Vec<Value> = p.terms().map(|(m, c)| json!({ "monomial": m.to_string(), "re": c.re, "im": c.im })).collect();
    json!(terms)
}

pub fn hermitize(cfg: &ScanConfig) -> Result<String, CliError> {
    cfg.validate(false)?;
    let point = cfg.base_point();
    let th = point.theta;
    let big_h = hamiltonian(cfg, &point)?;
    let (params, method, closed): (DysonParams<f64>, &str, Option<Poly>) = match cfg.model {
        ModelKind::Pt5Special => {
            let mu = point.mu().with_special_choice();
            let p = solve_pt5_special(&mu, th).map_err(numeric)?;
            let h = hermitian_counterpart_pt5(&mu, th).map_err(numeric)?;
            (p, "closed-form", Some(h))
        }
        ModelKind::Pt5General if th == 0.0 => {
            let u = solve_pt5_undeformed(&point.mu()).map_err(numeric)?;
            (u.params, "closed-form", None)
        }
        ModelKind::Toy => {
            let lambda = toy_lambda(&point).map_err(numeric)?;
            let t = toy_model(point.get("mu1"), point.get("mu4"), lambda.re, th).map_err(numeric)?;
            (t.params, "closed-form", Some(t.h))
        }
        ModelKind::Pt5General | ModelKind::GeneralCoeffs => {
            let coeffs = HamiltonianCoeffs::extract(&big_h).0;
            let sol = solve_generic_numeric(&coeffs, th, cfg.seed).map_err(numeric)?;
            (sol.params, "numeric", None)
        }
    };
    if !params.is_real() {
        return Err(CliError::Numeric(format!(
            "Dyson map is not real (lambda = {}): broken phase",
            params.lambda
        )));
    }
    let image = adjoint_poly(&params, &big_h).map_err(numeric)?;
    let residual = hermiticity_residual(&image);
    let mut doc = json!({
        "model": cfg.model.name(),
        "params": params_json(&point),
        "method": method,
        "dyson": { "lambda": cx_json(params.lambda), "rho": cx_json(params.rho), "tau": cx_json(params.tau) },
        "hermiticity_residual": residual,
        "h": coeffs_json(&image),
        "h_text": image.to_string(),
    });
    if let Some(c) = closed {
        doc["closed_form_mismatch"] = json!(image.max_abs_diff(&c));
    }
    if residual > 1e-8 * (1.0 + image.max_abs()) {
        return Err(CliError::Numeric(format!("conjugated Hamiltonian is not Hermitian (residual {residual:e})")));
    }
    Ok(to_json(&doc))
}
