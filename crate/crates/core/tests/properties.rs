use deformed_e2::algebra::{commutator, dagger, hermiticity_residual, normal_order_product, pt_apply};
use deformed_e2::dyson::{adjoint_generator_closed, adjoint_generator_oracle, adjoint_poly, DysonParams};
use deformed_e2::models::{
    build_general, hermitian_counterpart_pt5, max_constraint_residual, solve_pt5_special, HamiltonianCoeffs, Mu,
};
use deformed_e2::{Generator, Monomial, OperatorPoly, PTKind, Poly};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: &Poly, b: &Poly) -> f64 {
    a.max_abs_diff(b) / (1.0 + a.max_abs().max(b.max_abs()))
}

fn mul(p: &Poly, q: &Poly) -> Poly {
    normal_order_product(p, q).unwrap()
}

fn comm(p: &Poly, q: &Poly) -> Poly {
    commutator(p, q).unwrap()
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn monomial(max_degree: u32) -> impl Strategy<Value = Monomial> {
    (0..=max_degree, 0..=max_degree, 0..=max_degree)
        .prop_filter("degree bound", move |(u, v, j)| u + v + j <= max_degree)
        .prop_map(|(u, v, j)| Monomial::new(u, v, j))
}

fn poly(theta: f64, max_degree: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((monomial(max_degree), coeff()), 1..5)
        .prop_map(move |terms| OperatorPoly::from_terms(terms, theta))
}

fn theta_and_polys(n: usize, max_degree: u32) -> impl Strategy<Value = (f64, Vec<Poly>)> {
    (-2.0..2.0f64).prop_flat_map(move |th| (Just(th), prop::collection::vec(poly(th, max_degree), n)))
}

fn real_params(range: f64) -> impl Strategy<Value = DysonParams<f64>> {
    (-range..range, -range..range, -range..range, -range..range).prop_map(|(l, r, t, th)| DysonParams::real(l, r, t, th))
}

fn params_and_polys() -> impl Strategy<Value = (DysonParams<f64>, Poly, Poly)> {
    real_params(1.0).prop_flat_map(|par| (Just(par), poly(par.theta, 2), poly(par.theta, 2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_is_associative((_, ps) in theta_and_polys(3, 3)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        prop_assert!(rel(&mul(&mul(p, q), r), &mul(p, &mul(q, r))) < 1e-12);
    }

    #[test]
    fn jacobi_identity((_, ps) in theta_and_polys(3, 2)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        let sum = &(&comm(p, &comm(q, r)) + &comm(q, &comm(r, p))) + &comm(r, &comm(p, q));
        prop_assert!(sum.max_abs() < 1e-11);
    }

    #[test]
    fn dagger_is_antimultiplicative_involution((_, ps) in theta_and_polys(2, 3)) {
        let (p, q) = (&ps[0], &ps[1]);
        prop_assert!(rel(&dagger(&dagger(p)), p) < 1e-12);
        prop_assert!(rel(&dagger(&mul(p, q)), &mul(&dagger(q), &dagger(p))) < 1e-12);
    }

    #[test]
    fn admissible_pt_maps_respect_commutators((_, ps) in theta_and_polys(2, 2)) {
        let (p, q) = (&ps[0], &ps[1]);
        for kind in [PTKind::PT3, PTKind::PT4, PTKind::PT5] {
            prop_assert!(rel(&pt_apply(kind, &pt_apply(kind, p)), p) < 1e-12);
            let lhs = pt_apply(kind, &comm(p, q));
            let rhs = comm(&pt_apply(kind, p), &pt_apply(kind, q));
            prop_assert!(rel(&lhs, &rhs) < 1e-12, "{kind}");
        }
    }

    #[test]
    fn conjugation_is_homomorphism_with_inverse((par, p, q) in params_and_polys()) {
        let ad = |x: &Poly| adjoint_poly(&par, x).unwrap();
        prop_assert!(rel(&ad(&mul(&p, &q)), &mul(&ad(&p), &ad(&q))) < 1e-11);
        prop_assert!(rel(&adjoint_poly(&par.inverse(), &ad(&p)).unwrap(), &p) < 1e-11);
        // real maps are Hermitian, so (eta h eta^-1)† = eta^-1 h eta
        let h = &p + &dagger(&p);
        prop_assert!(rel(&dagger(&ad(&h)), &adjoint_poly(&par.inverse(), &h).unwrap()) < 1e-11);
    }

    #[test]
    fn images_are_affine_in_theta(par in real_params(2.0)) {
        for g in Generator::ALL {
            let at = |t: f64| adjoint_generator_closed(&DysonParams { theta: t, ..par }, g).components();
            let (a, m, b) = (at(par.theta - 0.25), at(par.theta), at(par.theta + 0.25));
            for k in 0..4 {
                prop_assert!((a[k] + b[k] - m[k] * 2.0).norm() < 1e-10);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_matches_oracle(par in real_params(2.0)) {
        for g in Generator::ALL {
            let d = adjoint_generator_closed(&par, g).max_abs_diff(&adjoint_generator_oracle(&par, g));
            prop_assert!(d < 1e-12, "{g}: {d}");
        }
    }

    #[test]
    fn complex_parameters_match_oracle(
        l in coeff(), r in coeff(), t in coeff(), th in -2.0..2.0f64
    ) {
        let par = DysonParams::new(l, r, t, th);
        for g in Generator::ALL {
            prop_assert!(adjoint_generator_closed(&par, g).max_abs_diff(&adjoint_generator_oracle(&par, g)) < 1e-12);
        }
    }

    #[test]
    fn single_precision_tracks_oracle(l in -1.0..1.0f32, r in -1.0..1.0f32, t in -1.0..1.0f32, th in -1.0..1.0f32) {
        let par = DysonParams::<f32>::real(l, r, t, th);
        for g in Generator::ALL {
            prop_assert!(adjoint_generator_closed(&par, g).max_abs_diff(&adjoint_generator_oracle(&par, g)) < 1e-4);
        }
    }

    #[test]
    fn residuals_vanish_iff_hermitian(
        cs in prop::collection::vec(coeff(), 10),
        th in -2.0..2.0f64,
        mode in 0..3u8,
    ) {
        let mut c = HamiltonianCoeffs::new(cs.try_into().unwrap());
        if mode == 1 {
            let p = build_general(&c, th);
            c = HamiltonianCoeffs::extract(&(&p + &dagger(&p))).0;
        } else if mode == 2 {
            let a9 = c.alpha(9);
            let mut only = HamiltonianCoeffs::default();
            only.set(9, a9.into());
            only.set(10, Complex64::new(c.alpha(10), -th * a9 / 2.0));
            c = only;
        }
        let res = max_constraint_residual(&c, th);
        let herm = hermiticity_residual(&build_general(&c, th));
        prop_assert_eq!(res <= 1e-12, herm <= 1e-12, "residual {} vs {}", res, herm);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn counterpart_is_hermitian_where_admissible(
        m in prop::array::uniform9(-2.0..2.0f64),
        th in -3.0..3.0f64,
    ) {
        prop_assume!(m[0].abs() > 0.2);
        let mu = Mu::from_f64(m).with_special_choice();
        let params = solve_pt5_special(&mu, th);
        prop_assume!(matches!(&params, Ok(p) if p.is_real() && p.lambda.re.abs() < 3.0));
        let h = hermitian_counterpart_pt5(&mu, th).unwrap();
        prop_assert!(hermiticity_residual(&h) / (1.0 + h.max_abs()) < 1e-12);
        let engine = adjoint_poly(&params.unwrap(), &mu.hamiltonian(th)).unwrap();
        prop_assert!(engine.max_abs_diff(&h) / (1.0 + h.max_abs()) < 1e-10);
    }
}
