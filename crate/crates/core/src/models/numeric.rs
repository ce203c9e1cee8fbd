//! Multi-start least-squares search for a real Dyson map that makes an
//! arbitrary quadratic Hamiltonian Hermitian. Used for the PT3/PT4 families,
//! which have no closed-form solution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_general, constraint_residuals, HamiltonianCoeffs};
use crate::dyson::{adjoint_poly, DysonParams};
use crate::error::{Error, Result};

/// Number of starting points, the first of which is the identity map.
pub const MULTI_START: usize = 16;

/// Residual below which a solution counts as found.
pub const SOLVED_TOL: f64 = 1e-9;

const MAX_ITER: usize = 300;
const START_RANGE: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSolution {
    pub params: DysonParams<f64>,
    /// Max-norm of the ten Hermiticity residuals of `eta H eta^{-1}`.
    pub residual: f64,
    /// `residual < 1e-9`. A `false` here means no start converged, which
    /// suggests but does not prove the broken phase.
    pub solved: bool,
}

fn residuals(coeffs: &HamiltonianCoeffs<f64>, theta: f64, x: [f64; 3]) -> [f64; 10] {
    let h = build_general(coeffs, theta);
    let params = DysonParams::real(x[0], x[1], x[2], theta);
    let image = adjoint_poly(&params, &h).expect("same theta");
    constraint_residuals(&HamiltonianCoeffs::extract(&image).0, theta)
}

fn sum_sq(r: &[f64; 10]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn max_abs(r: &[f64; 10]) -> f64 {
    r.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        *xk = det(m) / d;
    }
    Some(x)
}

/// Levenberg–Marquardt from one starting point; returns the final point and
/// its max-norm residual.
fn levenberg_marquardt(coeffs: &HamiltonianCoeffs<f64>, theta: f64, start: [f64; 3]) -> ([f64; 3], f64) {
    let f = |x: [f64; 3]| residuals(coeffs, theta, x);
    let mut x = start;
    let mut r = f(x);
    let mut cost = sum_sq(&r);
    let mut damping = 1e-3;
    for _ in 0..MAX_ITER {
        if !cost.is_finite() || max_abs(&r) < 1e-14 {
            break;
        }
        let mut jac = [[0.0; 3]; 10];
        for k in 0..3 {
            let h = 1e-7 * (1.0 + x[k].abs());
            let (mut xp, mut xm) = (x, x);
            xp[k] += h;
            xm[k] -= h;
            let (rp, rm) = (f(xp), f(xm));
            for i in 0..10 {
                jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for i in 0..10 {
            for a in 0..3 {
                jtr[a] += jac[i][a] * r[i];
                for b in 0..3 {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }
        let mut improved = false;
        while damping < 1e12 {
            let mut lhs = jtj;
            for a in 0..3 {
                lhs[a][a] += damping * (jtj[a][a] + 1e-12);
            }
            let Some(step) = solve3(lhs, jtr.map(|v| -v)) else {
                damping *= 10.0;
                continue;
            };
            let trial = [x[0] + step[0], x[1] + step[1], x[2] + step[2]];
            let rt = f(trial);
            let ct = sum_sq(&rt);
            if ct.is_finite() && ct < cost {
                let small = step.iter().all(|s| s.abs() < 1e-15 * (1.0 + trial.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
                x = trial;
                r = rt;
                cost = ct;
                damping = (damping * 0.3).max(1e-12);
                improved = !small;
                break;
            }
            damping *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (x, max_abs(&r))
}

/// Searches real `(lambda, rho, tau)` with `eta H eta^{-1}` Hermitian, from
/// [`MULTI_START`] deterministic starting points seeded by `seed`.
pub fn solve_generic_numeric(coeffs: &HamiltonianCoeffs<f64>, theta: f64, seed: u64) -> Result<NumericSolution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<([f64; 3], f64)> = None;
    for k in 0..MULTI_START {
        let start = if k == 0 {
            [0.0; 3]
        } else {
            [(); 3].map(|_| rng.random_range(-START_RANGE..START_RANGE))
        };
        let (x, res) = levenberg_marquardt(coeffs, theta, start);
        if !res.is_finite() {
            continue;
        }
        if best.is_none_or(|(_, b)| res < b) {
            best = Some((x, res));
        }
        if res < 1e-14 {
            break;
        }
    }
    let (x, residual) = best.ok_or_else(|| Error::NonFinite("every start produced a non-finite objective".into()))?;
    Ok(NumericSolution { params: DysonParams::real(x[0], x[1], x[2], theta), residual, solved: residual < SOLVED_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dagger, PTKind};
    use crate::models::pt5::{solve_pt5_special, Mu};
    use crate::models::pt_invariant_part;
    use crate::scalar::cx;

    #[test]
    fn hermitian_input_needs_no_map() {
        let mut c = HamiltonianCoeffs::default();
        c.set(1, cx(1.0, 0.0));
        c.set(3, cx(0.4, 0.0));
        c.set(6, cx(0.8, 0.0));
        c.set(3, cx(0.4, 0.4));
        let p = build_general(&c, 0.5);
        let herm = HamiltonianCoeffs::extract(&(&p + &dagger(&p))).0;
        let sol = solve_generic_numeric(&herm, 0.5, 1).unwrap();
        assert!(sol.solved && sol.residual == 0.0);
        assert_eq!((sol.params.lambda.re, sol.params.rho.re, sol.params.tau.re), (0.0, 0.0, 0.0));
    }

    #[test]
    fn recovers_closed_form_pt5_solution() {
        let mu = Mu::from_f64([1.0, 0.0, 1.0, 2.0, 1.0, 1.0, 0.0, 0.0, 0.0]).with_special_choice();
        let th = 12.0;
        let exact = solve_pt5_special(&mu, th).unwrap();
        let sol = solve_generic_numeric(&mu.to_coeffs(), th, 42).unwrap();
        assert!(sol.solved, "{sol:?}");
        assert!((sol.params.lambda - exact.lambda).norm() < 1e-6, "{sol:?} vs {exact:?}");
        assert!((sol.params.rho - exact.rho).norm() < 1e-6);
        assert!(sol.params.tau.norm() < 1e-6);
    }

    #[test]
    fn pt4_family_follows_rotated_inequality() {
        // J² + i a U + b V is the rotation of the PT5 model J² + b U + i a V
        let th = 0.8;
        let h = |a: f64, b: f64| {
            let mut c = HamiltonianCoeffs::default();
            c.set(1, cx(1.0, 0.0));
            c.set(3, cx(0.0, a));
            c.set(4, cx(b, 0.0));
            assert_eq!(pt_invariant_part(PTKind::PT4, &c, th), c);
            c
        };
        assert!(solve_generic_numeric(&h(1.0, 2.0), th, 3).unwrap().solved);
        assert!(!solve_generic_numeric(&h(2.0, 1.0), th, 3).unwrap().solved);
    }
}
