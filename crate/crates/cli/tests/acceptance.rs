//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use deformed_e2::algebra::{dagger, hermiticity_residual};
use deformed_e2::dyson::{adjoint_generator_closed, adjoint_generator_oracle, adjoint_poly, DysonParams};
use deformed_e2::models::{
    build_general, find_exceptional_point, hermitian_counterpart_pt5, max_constraint_residual, solve_pt5_special,
    toy_spectrum, Convention, HamiltonianCoeffs, Mode, Mu, PathParam, PhasePath,
};
use deformed_e2::spectral::{
    diagonalize_classify, eigenvalues, isospectral_check, poly_to_matrix, Representation, SpectrumVerdict,
};
use deformed_e2::{Generator, Monomial, OperatorPoly};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type P = OperatorPoly<f64>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn worked_mu() -> Mu<f64> {
    Mu::from_f64([1.0, 0.0, 1.0, 2.0, 1.0, 1.0, 0.0, 0.0, 0.0]).with_special_choice()
}

fn closed_form_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let mut r = || rng.random_range(-2.0..2.0);
        let par = DysonParams::real(r(), r(), r(), r());
        for g in Generator::ALL {
            worst = worst.max(adjoint_generator_closed(&par, g).max_abs_diff(&adjoint_generator_oracle(&par, g)));
        }
    }
    outcome(worst < 1e-12, format!("worst {worst:e} over 1000 draws"))
}

fn undeformed_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..300 {
        let (l, r, t) = (rng.random_range(-2.0..2.0f64), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        if l.abs() < 1e-3 {
            continue;
        }
        let par = DysonParams::real(l, r, t, 0.0);
        let (s, c) = (l.sinh(), l.cosh());
        let expected = [
            (Generator::U, [0.0.into(), c.into(), Complex64::new(0.0, -s), 0.0.into()]),
            (Generator::V, [0.0.into(), Complex64::new(0.0, s), c.into(), 0.0.into()]),
            (
                Generator::J,
                [
                    0.0.into(),
                    Complex64::new(r * (1.0 - c) / l, -t * s / l),
                    Complex64::new(t * (1.0 - c) / l, r * s / l),
                    1.0.into(),
                ],
            ),
        ];
        for (g, want) in expected {
            let got = adjoint_generator_closed(&par, g).components();
            for k in 0..4 {
                worst = worst.max((got[k] - want[k]).norm());
            }
        }
    }
    outcome(worst < 1e-13, format!("worst {worst:e}"))
}

fn constraint_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = 1e-12;
    let (mut hermitian, mut disagreements) = (0, 0);
    for k in 0..1000 {
        let th = rng.random_range(-2.0..2.0f64);
        let mut raw = HamiltonianCoeffs::default();
        for i in 1..=10 {
            raw.set(i, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        }
        let coeffs = match k % 3 {
            0 => raw,
            1 => {
                let p = build_general(&raw, th);
                HamiltonianCoeffs::extract(&(&p + &dagger(&p))).0
            }
            _ => {
                let mut c = HamiltonianCoeffs::default();
                let a9 = raw.alpha(9);
                c.set(9, a9.into());
                c.set(10, Complex64::new(raw.alpha(10), -th * a9 / 2.0));
                c
            }
        };
        let res = max_constraint_residual(&coeffs, th) <= tol;
        let herm = hermiticity_residual(&build_general(&coeffs, th)) <= tol;
        hermitian += herm as usize;
        disagreements += (res != herm) as usize;
    }
    outcome(disagreements == 0, format!("{disagreements} disagreements, {hermitian}/1000 Hermitian"))
}

fn pt5_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut admitted, mut worst_herm, mut worst_closed) = (0, 0.0f64, 0.0f64);
    let mut attempts = 0;
    while admitted < 100 && attempts < 100_000 {
        attempts += 1;
        let m: [f64; 9] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let th = rng.random_range(-3.0..3.0);
        if m[0].abs() < 0.2 {
            continue;
        }
        let mu = Mu::from_f64(m).with_special_choice();
        let Ok(params) = solve_pt5_special::<f64>(&mu, th) else { continue };
        if !params.is_real() || params.lambda.re.abs() > 3.0 {
            continue;
        }
        admitted += 1;
        let image = adjoint_poly(&params, &mu.hamiltonian(th)).unwrap();
        let scale = 1.0 + image.max_abs();
        worst_herm = worst_herm.max(hermiticity_residual(&image) / scale);
        let closed = hermitian_counterpart_pt5(&mu, th).map(|h| image.max_abs_diff(&h) / scale);
        worst_closed = worst_closed.max(closed.unwrap_or(f64::INFINITY));
    }
    outcome(
        admitted == 100 && worst_herm < 1e-10 && worst_closed < 1e-10,
        format!("{admitted} draws, hermiticity {worst_herm:e}, closed-form mismatch {worst_closed:e}"),
    )
}

fn exceptional_points() -> Outcome {
    let first = |th: f64| {
        let base = Mu::from_f64([1.0, 0.3, 1.0, 2.0, 1.0, 1.0, 2.0, 0.5, 0.0]);
        let path = PhasePath::<f64>::new(base, th, PathParam::Mu(9), Mode::General).first_inequality();
        find_exceptional_point(&path, (-3.0, 0.0))
    };
    let eps: Vec<_> = [0.0, 1.0, 5.0].into_iter().map(first).collect();
    let Ok(reference) = eps[0] else { return outcome(false, format!("theta = 0: {:?}", eps[0])) };
    let spread = eps.iter().map(|e| e.as_ref().map_or(f64::INFINITY, |x| (x - reference).abs())).fold(0.0, f64::max);
    let path = PhasePath::<f64>::new(worked_mu(), 0.0, PathParam::Theta, Mode::Special);
    let worked = find_exceptional_point(&path, (4.0, 12.0));
    let off = worked.as_ref().map_or(f64::INFINITY, |x| (x - 8.0).abs());
    outcome(
        spread < 1e-9 && off < 1e-6,
        format!("first family at {reference} (spread {spread:e}), worked family at {worked:?}"),
    )
}

fn j2_plus(a: Complex64, b: Complex64, theta: f64) -> P {
    P::from_terms([(Monomial::new(0, 0, 2), 1.0.into()), (Monomial::new(1, 0, 0), a), (Monomial::new(0, 1, 0), b)], theta)
}

fn phase_concordance() -> Outcome {
    let rep = Representation::fock(1.0, 60).unwrap();
    let sym = diagonalize_classify(&j2_plus(2.0.into(), Complex64::new(0.0, 1.0), 1.0), &rep, Some(15));
    let brk = diagonalize_classify(&j2_plus(1.0.into(), Complex64::new(0.0, 2.0), 1.0), &rep, Some(15));
    let (a, b) = (sym.as_ref().map(|r| r.verdict), brk.as_ref().map(|r| r.verdict));
    let ok = matches!(a, Ok(SpectrumVerdict::AllReal)) && matches!(b, Ok(SpectrumVerdict::ConjugatePairs(n)) if n >= 1);
    outcome(ok, format!("(2,1): {a:?}, (1,2): {b:?}"))
}

fn isospectrality() -> Outcome {
    let th = 12.0;
    let mu = worked_mu();
    let report = hermitian_counterpart_pt5(&mu, th)
        .and_then(|h| isospectral_check(&mu.hamiltonian(th), &h, &Representation::fock(th, 80)?));
    match report {
        Ok(r) => outcome(r.pass, format!("{} matched pairs, max mismatch {:e}", r.pairs.len(), r.max_mismatch)),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn toy_model() -> Outcome {
    let mut worst = 0.0f64;
    for (mu1, eps, m) in [(1.0, 0.3, 3usize), (2.5, -1.1, 6), (0.7, 4.0, 10)] {
        let p = P::from_terms([(Monomial::new(0, 0, 2), mu1.into()), (Monomial::new(0, 0, 1), eps.into())], 0.0);
        let mut ev = eigenvalues(&poly_to_matrix(&p, &Representation::circle(0.0, m).unwrap()).unwrap()).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        // both signs of eps m appear as n runs over -M..M
        let mut expected: Vec<f64> = (-(m as i64)..=m as i64).map(|n| mu1 * (n * n) as f64 + eps * n as f64).collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&expected) {
            worst = worst.max((a - b).norm());
        }
    }
    let mut convention = 0.0f64;
    let mut distinct = true;
    for n in -3i64..=3 {
        let paper = toy_spectrum(1.0, 0.3, n, Convention::Paper);
        let k = std::f64::consts::TAU * n as f64;
        convention = convention.max((paper - (k * k - 0.3 * k)).abs());
        if n != 0 {
            distinct &= (paper - toy_spectrum(1.0, 0.3, n, Convention::Oracle)).abs() > 1.0;
        }
    }
    let paper_one = toy_spectrum(1.0, 0.3, 1, Convention::Paper);
    let pi = std::f64::consts::PI;
    let quoted = (paper_one - (4.0 * pi * pi - 0.6 * pi)).abs() < 1e-12;
    outcome(
        worst < 1e-12 && convention < 1e-9 && distinct && quoted,
        format!("circle worst {worst:e}; paper = oracle at 2 pi n to {convention:e}; conventions differ: {distinct}"),
    )
}

fn cli_determinism() -> Outcome {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/classify_mu3.json");
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_e2pt")).args(["--threads", threads, "classify", "-c", config]).output()
    };
    let outs: Vec<_> = ["1", "4", "4"].into_iter().map(run).collect();
    let bytes: Vec<Vec<u8>> = match outs.into_iter().collect::<Result<Vec<_>, _>>() {
        Ok(v) if v.iter().all(|o| o.status.success()) => v.into_iter().map(|o| o.stdout).collect(),
        Ok(v) => return outcome(false, format!("exit {:?}", v.iter().map(|o| o.status.code()).collect::<Vec<_>>())),
        Err(e) => return outcome(false, e.to_string()),
    };
    let same = bytes.windows(2).all(|w| w[0] == w[1]);
    outcome(same && !bytes[0].is_empty(), format!("3 runs, {} bytes each, identical: {same}", bytes[0].len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 closed-form adjoint actions match the exp(ad) oracle", closed_form_vs_oracle, Duration::from_secs(1)),
        ("2 theta = 0 reduces to the undeformed images", undeformed_reduction, Duration::MAX),
        ("3 constraint residuals vanish iff p is Hermitian", constraint_equivalence, Duration::from_secs(1)),
        ("4 PT5 special-mode pipeline yields Hermitian h", pt5_pipeline, Duration::from_secs(5)),
        ("5 exceptional points: invariant family and theta = 8", exceptional_points, Duration::from_secs(1)),
        ("6 fock spectra agree with the phase inequalities", phase_concordance, Duration::from_secs(10)),
        ("7 H and h isospectral at the worked point", isospectrality, Duration::from_secs(20)),
        ("8 toy model circle spectrum and 2 pi convention", toy_model, Duration::from_secs(1)),
        ("9 classify output byte-identical across runs", cli_determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (label, run, budget) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let ok = out.ok && in_time;
        failed += !ok as usize;
        let timing = if budget == Duration::MAX {
            format!("{:.3} s", elapsed.as_secs_f64())
        } else {
            format!("{:.3} s of {} s", elapsed.as_secs_f64(), budget.as_secs())
        };
        println!("{} criterion {label}: {} ({timing})", if ok { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
