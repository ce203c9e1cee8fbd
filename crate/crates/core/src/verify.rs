//! Self-check of every identity the library relies on, with fixed seeds.
//!
//! Each check records the worst deviation seen over its draws and the first
//! draw that broke the tolerance. [`run_verify`] runs the selected suites in a
//! fixed order, so reports are reproducible.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    commutator, dagger, hermiticity_residual, normal_order_product, pt_apply, relation_defects, Generator, Monomial,
    OperatorPoly, PTKind,
};
use crate::dyson::{adjoint_generator_oracle, adjoint_poly, closed_image, AdjointImage, DysonParams};
use crate::error::{Error, Result};
use crate::models::{
    build_general, classify_region, find_exceptional_point, hermitian_counterpart_pt5, max_constraint_residual,
    pt_invariant_part, solve_generic_numeric, solve_pt5_special, toy_model, toy_spectrum, Convention, HamiltonianCoeffs,
    Mode, Mu, PathParam, Phase, PhasePath,
};
use crate::spectral::{
    commutator_fidelity, diagonalize_classify, dyson_consistency, eigenvalues, generator_hermiticity,
    isospectral_check, poly_to_matrix, Representation, SpectrumVerdict, J_SIGN_ON_FOURIER_MODE,
};

type P = OperatorPoly<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Algebra,
    Adjoint,
    Constraints,
    Pt5,
    Ep,
    Spectral,
    Toy,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Algebra, Suite::Adjoint, Suite::Constraints, Suite::Pt5, Suite::Ep, Suite::Spectral, Suite::Toy];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Adjoint => "adjoint",
            Suite::Constraints => "constraints",
            Suite::Pt5 => "pt5",
            Suite::Ep => "ep",
            Suite::Spectral => "spectral",
            Suite::Toy => "toy",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .or_else(|| (s == "dyson").then_some(Suite::Adjoint))
            .ok_or_else(|| Error::Degenerate(format!("unknown verify suite `{s}`")))
    }
}

/// Deliberate mutations used to check that the suite notices them.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Faults {
    /// Added to `θ` inside the closed-form image of `U` only.
    pub adjoint_theta_shift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub suites: Vec<Suite>,
    pub faults: Faults,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { suites: Suite::ALL.to_vec(), faults: Faults::default(), seed: 20_240_601 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
    pub draws: usize,
    /// The first draw outside tolerance, described in words.
    pub offending: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{mark} [{}] {}: worst {:e} (tol {:e}, {} draws)", c.suite, c.name, c.worst, c.tolerance, c.draws)?;
            if let Some(o) = &c.offending {
                write!(f, "\n     offending draw: {o}")?;
            }
            writeln!(f)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

struct Check {
    suite: Suite,
    name: &'static str,
    tolerance: f64,
    worst: f64,
    draws: usize,
    offending: Option<String>,
}

impl Check {
    fn new(suite: Suite, name: &'static str, tolerance: f64) -> Self {
        Check { suite, name, tolerance, worst: 0.0, draws: 0, offending: None }
    }

    fn observe(&mut self, value: f64, draw: impl FnOnce() -> String) {
        let value = if value.is_nan() { f64::INFINITY } else { value };
        self.draws += 1;
        self.worst = self.worst.max(value);
        if value > self.tolerance && self.offending.is_none() {
            self.offending = Some(draw());
        }
    }

    fn require(&mut self, ok: bool, draw: impl FnOnce() -> String) {
        self.observe(if ok { 0.0 } else { 1.0 }, draw);
    }

    fn observe_result(&mut self, value: Result<f64>, draw: impl FnOnce() -> String) {
        match value {
            Ok(v) => self.observe(v, draw),
            Err(e) => self.observe(f64::INFINITY, || format!("{}: {e}", draw())),
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            suite: self.suite,
            name: self.name,
            passed: self.worst <= self.tolerance,
            worst: self.worst,
            tolerance: self.tolerance,
            draws: self.draws,
            offending: self.offending,
        }
    }
}

fn rel_diff(a: &P, b: &P) -> f64 {
    a.max_abs_diff(b) / (1.0 + a.max_abs().max(b.max_abs()))
}

fn random_poly(rng: &mut ChaCha8Rng, theta: f64, max_degree: u32) -> P {
    let n = rng.random_range(1..=4);
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let d = rng.random_range(0..=max_degree);
            let u = rng.random_range(0..=d);
            let v = rng.random_range(0..=d - u);
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (Monomial::new(u, v, d - u - v), c)
        })
        .collect();
    OperatorPoly::from_terms(terms, theta)
}

fn random_params(rng: &mut ChaCha8Rng, range: f64) -> DysonParams<f64> {
    let mut x = || rng.random_range(-range..range);
    let (l, r, t, th) = (x(), x(), x(), x());
    DysonParams::real(l, r, t, th)
}

fn mul(p: &P, q: &P) -> P {
    normal_order_product(p, q).expect("same theta")
}

fn comm(p: &P, q: &P) -> P {
    commutator(p, q).expect("same theta")
}

fn algebra_suite(rng: &mut ChaCha8Rng, out: &mut Vec<CheckOutcome>) {
    let s = Suite::Algebra;
    let g = |x, th| P::generator(x, th);
    let i = Complex64::new(0.0, 1.0);

    let mut c = Check::new(s, "defining relations", 1e-15);
    for th in [0.0, 1.0, -2.5, 7.0] {
        let (u, v, j) = (g(Generator::U, th), g(Generator::V, th), g(Generator::J, th));
        c.observe(comm(&u, &v).max_abs_diff(&P::scalar(i * th, th)), || format!("[U,V] at theta={th}"));
        c.observe(comm(&j, &u).max_abs_diff(&v.scale(-i)), || format!("[J,U] at theta={th}"));
        c.observe(comm(&j, &v).max_abs_diff(&u.scale(i)), || format!("[J,V] at theta={th}"));
    }
    out.push(c.finish());

    let mut c = Check::new(s, "worked expansion (U+iV)(U-iV)", 1e-15);
    let th = 1.0;
    let plus = &g(Generator::U, th) + &g(Generator::V, th).scale(i);
    let minus = &g(Generator::U, th) - &g(Generator::V, th).scale(i);
    let expected = P::from_terms(
        [(Monomial::new(2, 0, 0), 1.0.into()), (Monomial::new(0, 2, 0), 1.0.into()), (Monomial::ONE, th.into())],
        th,
    );
    c.observe(mul(&plus, &minus).max_abs_diff(&expected), || "theta = 1".into());
    out.push(c.finish());

    let mut assoc = Check::new(s, "associativity", 1e-12);
    let mut jacobi = Check::new(s, "Jacobi identity", 1e-11);
    let mut dag = Check::new(s, "dagger involution and anti-multiplicativity", 1e-12);
    let mut pt = Check::new(s, "PT3/PT4/PT5 involution and commutator homomorphism", 1e-12);
    for _ in 0..200 {
        let th = rng.random_range(-2.0..2.0);
        let (p, q, r) = (random_poly(rng, th, 3), random_poly(rng, th, 3), random_poly(rng, th, 3));
        let draw = || format!("theta={th}, p={p}, q={q}, r={r}");
        assoc.observe(rel_diff(&mul(&mul(&p, &q), &r), &mul(&p, &mul(&q, &r))), draw);
        let jac = &(&comm(&p, &comm(&q, &r)) + &comm(&q, &comm(&r, &p))) + &comm(&r, &comm(&p, &q));
        jacobi.observe(jac.max_abs() / (1.0 + p.max_abs() * q.max_abs() * r.max_abs()), draw);
        dag.observe(rel_diff(&dagger(&dagger(&p)), &p).max(rel_diff(&dagger(&mul(&p, &q)), &mul(&dagger(&q), &dagger(&p)))), draw);
        for kind in [PTKind::PT3, PTKind::PT4, PTKind::PT5] {
            let inv = rel_diff(&pt_apply(kind, &pt_apply(kind, &p)), &p);
            let hom = rel_diff(&pt_apply(kind, &comm(&p, &q)), &comm(&pt_apply(kind, &p), &pt_apply(kind, &q)));
            pt.observe(inv.max(hom), || format!("{kind}: {}", draw()));
        }
    }
    out.extend([assoc.finish(), jacobi.finish(), dag.finish(), pt.finish()]);

    let mut c = Check::new(s, "PT1/PT2 break [U,V] by 2 theta, others preserve it", 1e-14);
    for th in [0.0f64, 0.5, 3.0] {
        for kind in PTKind::ALL {
            let d = relation_defects(kind, th);
            let expected = if matches!(kind, PTKind::PT1 | PTKind::PT2) { 2.0 * th } else { 0.0 };
            c.observe((d[0] - expected).abs().max(d[1]).max(d[2]), || format!("{kind} at theta={th}: {d:?}"));
        }
    }
    out.push(c.finish());
}

fn undeformed_image(params: &DysonParams<f64>, gen: Generator) -> AdjointImage<f64> {
    let (l, r, t) = (params.lambda.re, params.rho.re, params.tau.re);
    let (s, ch) = (l.sinh(), l.cosh());
    let z = Complex64::new(0.0, 0.0);
    match gen {
        Generator::U => AdjointImage { s0: z, su: ch.into(), sv: Complex64::new(0.0, -s), sj: z },
        Generator::V => AdjointImage { s0: z, su: Complex64::new(0.0, s), sv: ch.into(), sj: z },
        Generator::J => AdjointImage {
            s0: z,
            su: Complex64::new(r * (1.0 - ch) / l, -t * s / l),
            sv: Complex64::new(t * (1.0 - ch) / l, r * s / l),
            sj: 1.0.into(),
        },
    }
}

fn adjoint_suite(rng: &mut ChaCha8Rng, faults: Faults, out: &mut Vec<CheckOutcome>) {
    let s = Suite::Adjoint;
    let mut c = Check::new(s, "adjoint closed-form vs oracle", 1e-12);
    for _ in 0..1000 {
        let p = random_params(rng, 2.0);
        for gen in Generator::ALL {
            let th = if gen == Generator::U { p.theta + faults.adjoint_theta_shift } else { p.theta };
            let d = closed_image(&p, gen, th).max_abs_diff(&adjoint_generator_oracle(&p, gen));
            c.observe(d, || format!("{gen} at lambda={}, rho={}, tau={}, theta={}", p.lambda.re, p.rho.re, p.tau.re, p.theta));
        }
    }
    out.push(c.finish());

    let mut c = Check::new(s, "undeformed reduction at theta = 0", 1e-13);
    for _ in 0..200 {
        let mut p = random_params(rng, 2.0);
        p.theta = 0.0;
        if p.lambda.re.abs() < 1e-3 {
            continue;
        }
        for gen in Generator::ALL {
            let d = closed_image(&p, gen, 0.0).max_abs_diff(&undeformed_image(&p, gen));
            c.observe(d, || format!("{gen} at lambda={}, rho={}, tau={}", p.lambda.re, p.rho.re, p.tau.re));
        }
    }
    out.push(c.finish());

    let mut hom = Check::new(s, "conjugation is an algebra homomorphism", 1e-11);
    let mut inv = Check::new(s, "inverse map undoes conjugation", 1e-11);
    let mut herm = Check::new(s, "Hermiticity transported by real maps", 1e-11);
    let mut affine = Check::new(s, "images affine in theta", 1e-10);
    for _ in 0..100 {
        let par = random_params(rng, 1.0);
        let th = par.theta;
        let (p, q) = (random_poly(rng, th, 2), random_poly(rng, th, 2));
        let draw = || format!("lambda={}, rho={}, tau={}, theta={th}, p={p}, q={q}", par.lambda.re, par.rho.re, par.tau.re);
        let ad = |x: &P| adjoint_poly(&par, x).expect("same theta");
        hom.observe(rel_diff(&ad(&mul(&p, &q)), &mul(&ad(&p), &ad(&q))), draw);
        inv.observe(rel_diff(&adjoint_poly(&par.inverse(), &ad(&p)).expect("same theta"), &p), draw);
        // eta h eta^{-1} Hermitian for Hermitian h needs the inverse adjoint on the other side
        let h = &p + &dagger(&p);
        let lhs = dagger(&ad(&h));
        let rhs = adjoint_poly(&par.inverse(), &h).expect("same theta");
        herm.observe(rel_diff(&lhs, &rhs), draw);
        for gen in Generator::ALL {
            let at = |t: f64| closed_image(&DysonParams { theta: t, ..par }, gen, t).components();
            let (a, b, m) = (at(th - 0.5), at(th + 0.5), at(th));
            let second = (0..4).map(|k| (a[k] + b[k] - m[k] * 2.0).norm()).fold(0.0, f64::max);
            affine.observe(second, || format!("{gen}: {}", draw()));
        }
    }
    out.extend([hom.finish(), inv.finish(), herm.finish(), affine.finish()]);
}

fn random_coeffs(rng: &mut ChaCha8Rng) -> HamiltonianCoeffs<f64> {
    let mut c = HamiltonianCoeffs::default();
    for k in 1..=10 {
        c.set(k, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    }
    c
}

fn constraints_suite(rng: &mut ChaCha8Rng, out: &mut Vec<CheckOutcome>) {
    let s = Suite::Constraints;
    let tol = 1e-12;
    let mut c = Check::new(s, "ten residuals vanish iff p = p dagger", 0.0);
    for k in 0..1000 {
        let th = rng.random_range(-2.0..2.0);
        let raw = random_coeffs(rng);
        let coeffs = match k % 3 {
            0 => raw,
            1 => HamiltonianCoeffs::extract(&(&build_general(&raw, th) + &dagger(&build_general(&raw, th)))).0,
            _ => {
                // only the c9/c10 pair, on or off the coupling line
                let mut c = HamiltonianCoeffs::default();
                let a9 = raw.alpha(9);
                c.set(9, a9.into());
                let off = if k % 2 == 0 { 0.0 } else { raw.beta(10) };
                c.set(10, Complex64::new(raw.alpha(10), -th * a9 / 2.0 + off));
                c
            }
        };
        let res = max_constraint_residual(&coeffs, th);
        let herm = hermiticity_residual(&build_general(&coeffs, th));
        c.require((res <= tol) == (herm <= tol), || format!("theta={th}, residual {res:e}, hermiticity {herm:e}, c={:?}", coeffs.c));
    }
    out.push(c.finish());

    let mut c = Check::new(s, "PT5 and PT4 invariant coefficient patterns", 1e-15);
    let mut all = HamiltonianCoeffs::default();
    for k in 1..=10 {
        all.set(k, Complex64::new(1.0, 1.0));
    }
    for (kind, imaginary) in [(PTKind::PT5, [4, 6, 9]), (PTKind::PT4, [3, 5, 9])] {
        let part = pt_invariant_part(kind, &all, 0.7);
        for k in 1..=10 {
            let expected = if imaginary.contains(&k) { Complex64::new(0.0, 1.0) } else { 1.0.into() };
            c.observe((part.get(k) - expected).norm(), || format!("{kind} c{k} = {}", part.get(k)));
        }
    }
    out.push(c.finish());
}

fn worked_mu() -> Mu<f64> {
    Mu::from_f64([1.0, 0.0, 1.0, 2.0, 1.0, 1.0, 0.0, 0.0, 0.0]).with_special_choice()
}

fn pt5_suite(rng: &mut ChaCha8Rng, out: &mut Vec<CheckOutcome>) {
    let s = Suite::Pt5;
    let mut c = Check::new(s, "worked point coth(lambda) = 3", 1e-14);
    let half_ln2 = 0.5 * 2f64.ln();
    c.observe_result(
        solve_pt5_special(&worked_mu(), 12.0).map(|p| {
            (p.lambda - half_ln2).norm().max((p.rho + half_ln2).norm()).max(p.tau.norm())
        }),
        || "theta = 12".into(),
    );
    out.push(c.finish());

    let mut herm = Check::new(s, "engine image of H is Hermitian (special mode)", 1e-10);
    let mut closed = Check::new(s, "engine image of H matches closed-form h", 1e-10);
    let mut admitted = 0;
    let mut attempts = 0;
    while admitted < 100 && attempts < 100_000 {
        attempts += 1;
        let mut m = [0.0f64; 9];
        for x in m.iter_mut() {
            *x = rng.random_range(-2.0..2.0);
        }
        if m[0].abs() < 0.2 {
            continue;
        }
        let th = rng.random_range(-3.0..3.0);
        let mu = Mu::from_f64(m).with_special_choice();
        let Ok(params) = solve_pt5_special::<f64>(&mu, th) else { continue };
        if !params.is_real() || params.lambda.re.abs() > 3.0 {
            continue;
        }
        admitted += 1;
        let draw = || format!("mu={m:?}, theta={th}");
        let image = adjoint_poly(&params, &mu.hamiltonian(th)).expect("same theta");
        let scale = 1.0 + image.max_abs();
        herm.observe(hermiticity_residual(&image) / scale, draw);
        closed.observe_result(hermitian_counterpart_pt5(&mu, th).map(|h| image.max_abs_diff(&h) / scale), draw);
    }
    herm.require(admitted == 100, || format!("only {admitted} admissible draws"));
    out.extend([herm.finish(), closed.finish()]);

    let mut c = Check::new(s, "numeric solver recovers closed form", 1e-6);
    let mu = worked_mu();
    let exact = solve_pt5_special(&mu, 12.0).expect("worked point");
    c.observe_result(
        solve_generic_numeric(&mu.to_coeffs(), 12.0, 42).map(|sol| {
            let d = (sol.params.lambda - exact.lambda).norm().max((sol.params.rho - exact.rho).norm()).max(sol.params.tau.norm());
            if sol.solved { d } else { f64::INFINITY }
        }),
        || "worked point at theta = 12".into(),
    );
    out.push(c.finish());
}

fn ep_suite(out: &mut Vec<CheckOutcome>) {
    let s = Suite::Ep;
    let mut c = Check::new(s, "EP at mu3 = mu4", 1e-9);
    let base = Mu::from_f64([1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let path = PhasePath::<f64>::new(base, 1.0, PathParam::Mu(3), Mode::General);
    c.observe_result(find_exceptional_point(&path, (0.5, 2.0)).map(|x| (x - 1.0).abs()), || "mu3 in [0.5, 2]".into());
    out.push(c.finish());

    let mut c = Check::new(s, "first-family EP invariant under theta", 1e-9);
    let first = |th: f64| {
        let base = Mu::from_f64([1.0, 0.3, 1.0, 2.0, 1.0, 1.0, 2.0, 0.5, 0.0]);
        let path = PhasePath::<f64>::new(base, th, PathParam::Mu(9), Mode::General).first_inequality();
        find_exceptional_point(&path, (-3.0, 0.0))
    };
    match first(0.0) {
        Ok(reference) => {
            for th in [1.0, 5.0] {
                c.observe_result(first(th).map(|x| (x - reference).abs()), || format!("theta = {th}"));
            }
        }
        Err(e) => c.observe(f64::INFINITY, || format!("theta = 0: {e}")),
    }
    out.push(c.finish());

    let mut c = Check::new(s, "worked-family EP at theta = 8", 1e-6);
    let path = PhasePath::<f64>::new(worked_mu(), 0.0, PathParam::Theta, Mode::Special);
    c.observe_result(find_exceptional_point(&path, (4.0, 12.0)).map(|x| (x - 8.0).abs()), || "theta in [4, 12]".into());
    out.push(c.finish());

    let mut c = Check::new(s, "Symmetric verdict iff real Dyson map", 0.0);
    for k in 0..200 {
        let th = -20.0 + 0.2 * k as f64 + 0.013;
        let ok = match (classify_region(&worked_mu(), th, Mode::Special), solve_pt5_special(&worked_mu(), th)) {
            (Ok(v), Ok(p)) => p.is_real() == (v.phase == Phase::Symmetric),
            _ => false,
        };
        c.require(ok, || format!("theta = {th}"));
    }
    out.push(c.finish());
}

fn j2_plus(a: Complex64, b: Complex64, theta: f64) -> P {
    P::from_terms([(Monomial::new(0, 0, 2), 1.0.into()), (Monomial::new(1, 0, 0), a), (Monomial::new(0, 1, 0), b)], theta)
}

fn spectral_suite(out: &mut Vec<CheckOutcome>) {
    let s = Suite::Spectral;
    let mut fid = Check::new(s, "representation commutator fidelity", 1e-8);
    let mut herm = Check::new(s, "generator matrices Hermitian", 1e-12);
    let reps = [
        Representation::fock(1.0, 30),
        Representation::fock(12.0, 40),
        Representation::planar(0.0, 10, 10),
        Representation::planar(-0.8, 12, 10),
        Representation::circle(0.5, 8),
    ];
    for rep in reps {
        match rep {
            Ok(rep) => {
                let label = format!("{} {:?} theta={}", rep.kind, rep.dims, rep.theta);
                fid.observe(commutator_fidelity(&rep), || label.clone());
                herm.observe(generator_hermiticity(&rep), || label);
            }
            Err(e) => fid.observe(f64::INFINITY, || e.to_string()),
        }
    }
    out.extend([fid.finish(), herm.finish()]);

    let mut c = Check::new(s, "fock spectrum concordant with phase", 0.0);
    let rep = Representation::fock(1.0, 60).expect("theta > 0");
    let sym = diagonalize_classify(&j2_plus(2.0.into(), Complex64::new(0.0, 1.0), 1.0), &rep, Some(15));
    let brk = diagonalize_classify(&j2_plus(1.0.into(), Complex64::new(0.0, 2.0), 1.0), &rep, Some(15));
    c.require(matches!(&sym, Ok(r) if r.verdict == SpectrumVerdict::AllReal), || format!("J² + 2U + iV: {:?}", sym.as_ref().map(|r| r.verdict)));
    c.require(
        matches!(&brk, Ok(r) if matches!(r.verdict, SpectrumVerdict::ConjugatePairs(n) if n >= 1)),
        || format!("J² + U + 2iV: {:?}", brk.as_ref().map(|r| r.verdict)),
    );
    out.push(c.finish());

    let th = 12.0;
    let mu = worked_mu();
    let big_h = mu.hamiltonian(th);
    let mut c = Check::new(s, "worked point H and h isospectral", 1e-5);
    let report = hermitian_counterpart_pt5(&mu, th)
        .and_then(|h| isospectral_check(&big_h, &h, &Representation::fock(th, 80)?));
    c.observe_result(
        report.map(|r| if r.verdict == SpectrumVerdict::Inconclusive { f64::INFINITY } else { r.max_mismatch }),
        || "fock N = 80".into(),
    );
    out.push(c.finish());

    let mut c = Check::new(s, "matrix Dyson map reproduces h on interior block", 1e-6);
    let value = solve_pt5_special(&mu, th).and_then(|params| {
        let h = hermitian_counterpart_pt5(&mu, th)?;
        dyson_consistency(&params, &big_h, &h, &Representation::fock(th, 60)?)
    });
    c.observe_result(value, || "worked point, fock N = 60".into());
    out.push(c.finish());

    let mut c = Check::new(s, "J acts as -m on e^{i m phi}", 1e-14);
    let rep = Representation::planar(0.9, 8, 8).expect("planar");
    let mut psi = nalgebra::DVector::<Complex64>::zeros(64);
    psi[8] = 1.0.into();
    psi[1] = Complex64::new(0.0, 1.0);
    let resid = (rep.j() * &psi - &psi * Complex64::from(J_SIGN_ON_FOURIER_MODE as f64)).norm();
    c.observe(resid, || "(a_x† + i a_y†)|0>".into());
    out.push(c.finish());
}

fn toy_suite(out: &mut Vec<CheckOutcome>) {
    let s = Suite::Toy;
    let mut c = Check::new(s, "circle spectrum of mu1 J² + eps J", 1e-12);
    for (mu1, eps, m) in [(1.0, 0.3, 3usize), (2.5, -1.1, 6), (0.7, 4.0, 10)] {
        let p = P::from_terms([(Monomial::new(0, 0, 2), mu1.into()), (Monomial::new(0, 0, 1), eps.into())], 0.0);
        let ev = Representation::circle(0.0, m).and_then(|rep| eigenvalues(&poly_to_matrix(&p, &rep)?));
        match ev {
            Ok(mut ev) => {
                let mut expected: Vec<f64> =
                    (-(m as i64)..=m as i64).map(|n| toy_spectrum(mu1, eps, n, Convention::Oracle)).collect();
                ev.sort_by(|a, b| a.re.total_cmp(&b.re));
                expected.sort_by(f64::total_cmp);
                let d = ev.iter().zip(&expected).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                c.observe(d, || format!("mu1={mu1}, eps={eps}, M={m}"));
            }
            Err(e) => c.observe(f64::INFINITY, || e.to_string()),
        }
    }
    out.push(c.finish());

    let mut c = Check::new(s, "paper convention equals oracle at 2 pi n", 1e-9);
    for n in -3i64..=3 {
        let paper = toy_spectrum(1.0, 0.3, n, Convention::Paper);
        let k = std::f64::consts::TAU * n as f64;
        c.observe((paper - (k * k - 0.3 * k)).abs(), || format!("n = {n}"));
        if n != 0 {
            let oracle = toy_spectrum(1.0, 0.3, n, Convention::Oracle);
            c.require((paper - oracle).abs() > 1.0, || format!("conventions coincide at n = {n}"));
        }
    }
    out.push(c.finish());

    let mut conj = Check::new(s, "conjugation reproduces toy h", 1e-12);
    let mut shift = Check::new(s, "toy shift from conjugation", 1e-14);
    for (m1, m4, l, th) in [(1.0, 1.0, 3f64.ln(), 0.1), (1.3, -0.7, 0.9, 2.0), (-0.8, 0.5, -1.4, 1.5)] {
        match toy_model(m1, m4, l, th) {
            Ok(t) => {
                let d = adjoint_poly(&t.params, &t.mu.hamiltonian(th)).map(|img| img.max_abs_diff(&t.h));
                conj.observe_result(d, || format!("mu1={m1}, mu4={m4}, lambda={l}, theta={th}"));
            }
            Err(e) => conj.observe(f64::INFINITY, || e.to_string()),
        }
    }
    match toy_model(1.0, 1.0, 3f64.ln(), 0.1) {
        Ok(t) => {
            shift.observe((t.shift + 0.1775).abs(), || format!("conjugation shift {}", t.shift));
            shift.observe((t.shift_published + 0.17).abs(), || format!("quoted shift {}", t.shift_published));
        }
        Err(e) => shift.observe(f64::INFINITY, || e.to_string()),
    }
    out.extend([conj.finish(), shift.finish()]);

    let mut c = Check::new(s, "toy H and h isospectral", 1e-5);
    let th = 0.1;
    let r = toy_model(1.0, 1.0, 3f64.ln(), th)
        .and_then(|t| isospectral_check(&t.mu.hamiltonian(th), &t.h, &Representation::fock(th, 60)?));
    c.observe_result(
        r.map(|r| if r.verdict == SpectrumVerdict::Inconclusive { f64::INFINITY } else { r.max_mismatch }),
        || "fock N = 60".into(),
    );
    out.push(c.finish());
}

/// Runs the selected suites in their canonical order.
pub fn run_verify(options: &VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    for suite in Suite::ALL.into_iter().filter(|s| options.suites.contains(s)) {
        // each suite gets its own stream so that filtering does not change draws
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ (suite as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        match suite {
            Suite::Algebra => algebra_suite(&mut rng, &mut checks),
            Suite::Adjoint => adjoint_suite(&mut rng, options.faults, &mut checks),
            Suite::Constraints => constraints_suite(&mut rng, &mut checks),
            Suite::Pt5 => pt5_suite(&mut rng, &mut checks),
            Suite::Ep => ep_suite(&mut checks),
            Suite::Spectral => spectral_suite(&mut checks),
            Suite::Toy => toy_suite(&mut checks),
        }
    }
    VerifyReport { checks }
}
