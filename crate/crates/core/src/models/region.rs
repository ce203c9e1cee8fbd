//! Phase classification of the PT5 family and exceptional-point bisection.

use std::fmt;

use super::pt5::{arccoth_real, mu3_deformed, Mu};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Relative tolerance for `| |a| - |b| | <= tol · max(|a|, |b|)` to count as equality.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Width at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-9;

/// Root scan range for `lambda` in the deformed general mode.
const LAMBDA_SCAN_MAX: f64 = 40.0;
const LAMBDA_SCAN_MIN: f64 = 1e-6;
const LAMBDA_SCAN_POINTS: usize = 600;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// All of `mu1..mu9` as given.
    General,
    /// `mu7` and `mu9` replaced by the values that remove the `coth 2 lambda` constraint.
    Special,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Symmetric,
    Broken,
    Boundary,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Symmetric => "symmetric",
            Phase::Broken => "broken",
            Phase::Boundary => "boundary",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inequality {
    /// `|mu78| >= |mu19|`, unaffected by the deformation.
    First,
    /// `|mu23| >= |mu24|` at `theta = 0`, or its deformed replacement.
    Second,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionVerdict<T: Real> {
    pub phase: Phase,
    /// The inequality that decided the phase.
    pub deciding: Inequality,
    /// `|mu78| - |mu19|`; zero when the constraint is absent.
    pub margin1: T,
    /// `|lhs| - |rhs|` of the second criterion (see [`classify_region`]).
    pub margin2: T,
    /// `lambda` fixed by the second criterion, when there is one.
    pub lambda: Option<Cx<T>>,
    pub diagnostic: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Status {
    Holds,
    Equal,
    Violated,
    Absent,
}

/// Compares `|a| >= |b|`.
fn compare<T: Real>(a: T, b: T) -> (Status, T) {
    let (a, b) = (a.abs(), b.abs());
    if a == T::zero() && b == T::zero() {
        return (Status::Absent, T::zero());
    }
    let margin = a - b;
    let status = if margin.abs() <= T::lit(BOUNDARY_TOL) * a.max(b) {
        Status::Equal
    } else if margin > T::zero() {
        Status::Holds
    } else {
        Status::Violated
    };
    (status, margin)
}

fn combine<T: Real>(
    first: (Status, T),
    second: (Status, T),
    lambda: Option<Cx<T>>,
    diagnostic: Option<String>,
) -> RegionVerdict<T> {
    let (s1, m1) = first;
    let (s2, m2) = second;
    let (phase, deciding) = if s1 == Status::Violated {
        (Phase::Broken, Inequality::First)
    } else if s2 == Status::Violated {
        (Phase::Broken, Inequality::Second)
    } else if s1 == Status::Equal {
        (Phase::Boundary, Inequality::First)
    } else if s2 == Status::Equal {
        (Phase::Boundary, Inequality::Second)
    } else if s1 == Status::Holds && (s2 == Status::Absent || m1 < m2) {
        (Phase::Symmetric, Inequality::First)
    } else {
        (Phase::Symmetric, Inequality::Second)
    };
    RegionVerdict { phase, deciding, margin1: m1, margin2: m2, lambda, diagnostic }
}

/// Phase decided by `|mu78| >= |mu19|` alone. Neither quantity depends on
/// `theta`, so neither does this verdict.
pub fn classify_first_inequality<T: Real>(mu: &Mu<T>) -> Result<Phase> {
    if mu.m(1) == T::zero() {
        return Err(Error::ZeroMu1);
    }
    let a = mu.abbrev();
    Ok(match compare(a.mu78, a.mu19).0 {
        Status::Holds | Status::Absent => Phase::Symmetric,
        Status::Equal => Phase::Boundary,
        Status::Violated => Phase::Broken,
    })
}

/// Classifies a PT5 parameter point.
///
/// * `General`, `theta = 0` (or `mu5 = mu6 = 0`, where the deformation drops
///   out): `|mu78| >= |mu19|` and `|mu23| >= |mu24|`; `margin2 = |mu23| - |mu24|`.
/// * `General`, `theta != 0`: the first inequality plus existence of a real
///   `lambda` solving the deformed `mu3` relation, found by a sign-change
///   scan; `margin2 = |coth lambda| - 1` at the root, or minus the smallest
///   residual seen when there is none.
/// * `Special`: `mu7`, `mu9` are overwritten by their special values and the
///   phase follows from `|num| > |den|` in the `coth lambda` ratio;
///   `margin2 = |num| - |den|`. A vanishing denominator is reported as
///   `Boundary`, unless the numerator vanishes too, in which case the
///   constraint is absent and the point is symmetric for every `lambda`.
///
/// Margins within [`BOUNDARY_TOL`] (relative) of equality give `Boundary`.
pub fn classify_region<T: Real>(mu: &Mu<T>, theta: T, mode: Mode) -> Result<RegionVerdict<T>> {
    if mu.m(1) == T::zero() {
        return Err(Error::ZeroMu1);
    }
    match mode {
        Mode::Special => {
            let mu = mu.with_special_choice();
            let (num, den) = mu.special_ratio_parts(theta);
            let tiny = T::lit(1e-300);
            if den.abs() <= tiny {
                if num.abs() <= tiny {
                    return Ok(combine(
                        (Status::Absent, T::zero()),
                        (Status::Absent, T::zero()),
                        None,
                        Some("coth lambda constraint absent; lambda is free".into()),
                    ));
                }
                let mut v = combine(
                    (Status::Absent, T::zero()),
                    (Status::Equal, num.abs()),
                    None,
                    Some("denominator of the coth lambda ratio vanishes".into()),
                );
                v.phase = Phase::Boundary;
                return Ok(v);
            }
            let second = compare(num, den);
            Ok(combine((Status::Absent, T::zero()), second, Some(arccoth_real(num / den)), None))
        }
        Mode::General => {
            let a = mu.abbrev();
            let first = compare(a.mu78, a.mu19);
            if theta == T::zero() || (mu.m(5) == T::zero() && mu.m(6) == T::zero()) {
                let second = compare(a.mu23, a.mu24);
                let lambda = (a.mu24 != T::zero()).then(|| arccoth_real(a.mu23 / a.mu24));
                return Ok(combine(first, second, lambda, None));
            }
            match deformed_lambda_root(mu, theta) {
                Ok(l) => {
                    let margin = (T::one() / l.tanh()).abs() - T::one();
                    Ok(combine(first, (Status::Holds, margin), Some(Cx::new(l, T::zero())), None))
                }
                Err(best) => Ok(combine(
                    first,
                    (Status::Violated, -best),
                    None,
                    Some("no real lambda solves the deformed mu3 relation".into()),
                )),
            }
        }
    }
}

/// Real root of `mu3_deformed(mu, l, theta) - mu3` on both half-lines, or the
/// smallest residual magnitude seen.
fn deformed_lambda_root<T: Real>(mu: &Mu<T>, theta: T) -> std::result::Result<T, T> {
    let f = |l: T| mu3_deformed(mu, l, theta).map(|v| v - mu.m(3)).unwrap_or(T::nan());
    let (lo, hi) = (T::lit(LAMBDA_SCAN_MIN).ln(), T::lit(LAMBDA_SCAN_MAX).ln());
    let n = T::from_usize(LAMBDA_SCAN_POINTS - 1).unwrap();
    let mut best = T::infinity();
    for sign in [T::one(), -T::one()] {
        let grid = (0..LAMBDA_SCAN_POINTS).map(|k| sign * (lo + (hi - lo) * T::from_usize(k).unwrap() / n).exp());
        let mut prev: Option<(T, T)> = None;
        for l in grid {
            let v = f(l);
            if !v.is_finite() {
                prev = None;
                continue;
            }
            best = best.min(v.abs());
            if v == T::zero() {
                return Ok(l);
            }
            if let Some((pl, pv)) = prev {
                if pv.signum() != v.signum() {
                    return Ok(bisect_root(&f, pl, l, pv));
                }
            }
            prev = Some((l, v));
        }
    }
    Err(best)
}

fn bisect_root<T: Real>(f: &impl Fn(T) -> T, mut a: T, mut b: T, mut fa: T) -> T {
    let half = T::lit(0.5);
    for _ in 0..200 {
        let m = half * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == T::zero() {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    half * (a + b)
}

/// Parameter varied along a [`PhasePath`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathParam {
    /// `mu_k`, 1-based.
    Mu(usize),
    Theta,
}

/// Which verdict a path follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    Overall,
    FirstInequality,
}

/// One-parameter family through `(mu, theta)` space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePath<T: Real> {
    pub base: Mu<T>,
    pub theta: T,
    pub param: PathParam,
    pub mode: Mode,
    pub criterion: Criterion,
}

impl<T: Real> PhasePath<T> {
    pub fn new(base: Mu<T>, theta: T, param: PathParam, mode: Mode) -> Self {
        PhasePath { base, theta, param, mode, criterion: Criterion::Overall }
    }

    pub fn first_inequality(mut self) -> Self {
        self.criterion = Criterion::FirstInequality;
        self
    }

    pub fn point(&self, x: T) -> (Mu<T>, T) {
        match self.param {
            PathParam::Mu(k) => (self.base.with(k, x), self.theta),
            PathParam::Theta => (self.base, x),
        }
    }

    pub fn phase(&self, x: T) -> Result<Phase> {
        let (mu, theta) = self.point(x);
        match self.criterion {
            Criterion::Overall => classify_region(&mu, theta, self.mode).map(|v| v.phase),
            Criterion::FirstInequality => classify_first_inequality(&mu),
        }
    }
}

/// Bisects on the phase verdict along `path` to a bracket narrower than
/// [`BISECTION_TOL`]. Endpoints must differ in whether they are symmetric;
/// hitting a `Boundary` verdict ends the search at that point.
pub fn find_exceptional_point<T: Real>(path: &PhasePath<T>, bracket: (T, T)) -> Result<T> {
    bisect_phase(|x| path.phase(x), bracket)
}

pub fn bisect_phase<T: Real>(phase: impl Fn(T) -> Result<Phase>, bracket: (T, T)) -> Result<T> {
    let (mut lo, mut hi) = bracket;
    let p_lo = phase(lo)?;
    let p_hi = phase(hi)?;
    if p_lo == Phase::Boundary {
        return Ok(lo);
    }
    if p_hi == Phase::Boundary {
        return Ok(hi);
    }
    let sym_lo = p_lo == Phase::Symmetric;
    if sym_lo == (p_hi == Phase::Symmetric) {
        return Err(Error::RejectedBracket(p_lo.to_string()));
    }
    let tol = T::lit(BISECTION_TOL);
    let half = T::lit(0.5);
    while (hi - lo).abs() > tol {
        let mid = half * (lo + hi);
        match phase(mid)? {
            Phase::Boundary => return Ok(mid),
            p if (p == Phase::Symmetric) == sym_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(half * (lo + hi))
}
