use deformed_e2::dyson::adjoint_poly;
use deformed_e2::models::{hermitian_counterpart_pt5, solve_pt5_special, toy_model, Mu};
use deformed_e2::spectral::{
    diagonalize_classify, dyson_consistency, isospectral_check, Representation, SpectrumVerdict,
};
use deformed_e2::{Monomial, OperatorPoly};
use num_complex::Complex64;

fn j2_plus(a: Complex64, b: Complex64, theta: f64) -> OperatorPoly<f64> {
    OperatorPoly::from_terms(
        [(Monomial::new(0, 0, 2), Complex64::new(1.0, 0.0)), (Monomial::new(1, 0, 0), a), (Monomial::new(0, 1, 0), b)],
        theta,
    )
}

#[test]
fn fock_spectrum_follows_phase() {
    let rep = Representation::fock(1.0, 60).unwrap();
    let symmetric = j2_plus(Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0), 1.0);
    let broken = j2_plus(Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0), 1.0);
    let a = diagonalize_classify(&symmetric, &rep, Some(15)).unwrap();
    let b = diagonalize_classify(&broken, &rep, Some(15)).unwrap();
    assert_eq!(a.verdict, SpectrumVerdict::AllReal);
    assert!(matches!(b.verdict, SpectrumVerdict::ConjugatePairs(n) if n >= 1), "{:?}", b.verdict);
    assert!(a.converged_values().len() > 20);
}

#[test]
fn worked_point_is_isospectral() {
    let th = 12.0;
    let mu = Mu::from_f64([1.0, 0.0, 1.0, 2.0, 1.0, 1.0, 0.0, 0.0, 0.0]).with_special_choice();
    let big_h = mu.hamiltonian(th);
    let h = hermitian_counterpart_pt5(&mu, th).unwrap();
    let report = isospectral_check(&big_h, &h, &Representation::fock(th, 80).unwrap()).unwrap();
    assert!(report.pass, "{report:?}");
    assert!(report.pairs.len() >= 20);

    let params = solve_pt5_special(&mu, th).unwrap();
    let err = dyson_consistency(&params, &big_h, &h, &Representation::fock(th, 60).unwrap()).unwrap();
    assert!(err < 1e-6, "{err}");
}

#[test]
fn toy_model_is_isospectral() {
    let th = 0.1;
    let t = toy_model(1.0, 1.0, 3f64.ln(), th).unwrap();
    let big_h = t.mu.hamiltonian(th);
    assert!(adjoint_poly(&t.params, &big_h).unwrap().max_abs_diff(&t.h) < 1e-12);
    let report = isospectral_check(&big_h, &t.h, &Representation::fock(th, 60).unwrap()).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn planar_angular_momentum_is_integral() {
    // J preserves the shells nx + ny = n, which fit whole inside the box for n < N
    let th = -0.4;
    let j2 = OperatorPoly::monomial(Monomial::new(0, 0, 2), Complex64::new(1.0, 0.0), th);
    let report = diagonalize_classify(&j2, &Representation::planar(th, 10, 10).unwrap(), Some(2)).unwrap();
    assert_eq!(report.verdict, SpectrumVerdict::AllReal);
    let converged = report.converged_values();
    for k in 0..10 {
        let sq = (k * k) as f64;
        assert!(converged.iter().any(|e| (e.re - sq).abs() < 1e-9), "missing {sq}");
    }
}
