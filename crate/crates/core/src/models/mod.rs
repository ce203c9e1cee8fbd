//! PT-invariant quadratic Hamiltonians in the deformed generators, their
//! Hermiticity constraints, Dyson-map solvers and phase classification.

mod numeric;
mod pt5;
mod region;
mod toy;

pub use numeric::{solve_generic_numeric, NumericSolution, MULTI_START, SOLVED_TOL};

pub use pt5::{
    arccoth, arccoth_real, hermitian_counterpart_pt5, mu3_deformed, rho_for_lambda, solve_pt5_special, solve_pt5_undeformed, Mu, MuAbbrev,
    Undeformed,
};
pub use region::{
    bisect_phase, classify_first_inequality, classify_region, find_exceptional_point, Criterion, Inequality, Mode, PathParam,
    Phase, PhasePath, RegionVerdict, BISECTION_TOL, BOUNDARY_TOL,
};
pub use toy::{toy_lambda_from_ratio, toy_model, toy_spectrum, Convention, ToyModel};

use crate::algebra::{Monomial, OperatorPoly, PTKind};
use crate::scalar::{Cx, Real};

/// Monomials multiplying `c1 .. c10`, in that order:
/// `c1 J² + c2 J + c3 U + c4 V + c5 UJ + c6 VJ + c7 U² + c8 V² + c9 UV + c10`.
pub const SLOTS: [Monomial; 10] = [
    Monomial::new(0, 0, 2),
    Monomial::new(0, 0, 1),
    Monomial::new(1, 0, 0),
    Monomial::new(0, 1, 0),
    Monomial::new(1, 0, 1),
    Monomial::new(0, 1, 1),
    Monomial::new(2, 0, 0),
    Monomial::new(0, 2, 0),
    Monomial::new(1, 1, 0),
    Monomial::ONE,
];

/// Coefficients `c_k = alpha_k + i beta_k` of the general quadratic Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianCoeffs<T: Real> {
    pub c: [Cx<T>; 10],
}

impl<T: Real> Default for HamiltonianCoeffs<T> {
    fn default() -> Self {
        HamiltonianCoeffs { c: [Cx::new(T::zero(), T::zero()); 10] }
    }
}

impl<T: Real> HamiltonianCoeffs<T> {
    pub fn new(c: [Cx<T>; 10]) -> Self {
        HamiltonianCoeffs { c }
    }

    /// `c_k` with the 1-based index used throughout.
    pub fn get(&self, k: usize) -> Cx<T> {
        self.c[k - 1]
    }

    pub fn set(&mut self, k: usize, v: Cx<T>) {
        self.c[k - 1] = v;
    }

    pub fn alpha(&self, k: usize) -> T {
        self.c[k - 1].re
    }

    pub fn beta(&self, k: usize) -> T {
        self.c[k - 1].im
    }

    /// Reads the coefficients of a polynomial of degree at most two. The second
    /// value is the largest coefficient outside the ten slots.
    pub fn extract(p: &OperatorPoly<T>) -> (Self, T) {
        let mut out = Self::default();
        for (k, m) in SLOTS.iter().enumerate() {
            out.c[k] = p.coeff(*m);
        }
        let leftover = p.terms().filter(|(m, _)| !SLOTS.contains(m)).map(|(_, c)| c.norm()).fold(T::zero(), T::max);
        (out, leftover)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.c.iter().zip(other.c.iter()).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max)
    }
}

/// The normal-ordered polynomial `sum_k c_k · SLOTS[k]`.
pub fn build_general<T: Real>(coeffs: &HamiltonianCoeffs<T>, theta: T) -> OperatorPoly<T> {
    OperatorPoly::from_terms(SLOTS.iter().copied().zip(coeffs.c.iter().copied()), theta)
}

/// Signed residuals of the ten Hermiticity conditions
///
/// ```text
/// beta1 = 0, beta2 = 0, beta3 = alpha6/2, beta4 = -alpha5/2, beta5..beta9 = 0,
/// beta10 = -theta alpha9/2
/// ```
///
/// in that order, each written as `lhs - rhs`.
pub fn constraint_residuals<T: Real>(coeffs: &HamiltonianCoeffs<T>, theta: T) -> [T; 10] {
    let half = T::lit(0.5);
    let mut r = [T::zero(); 10];
    for (k, slot) in r.iter_mut().enumerate() {
        *slot = coeffs.c[k].im;
    }
    r[2] = coeffs.beta(3) - half * coeffs.alpha(6);
    r[3] = coeffs.beta(4) + half * coeffs.alpha(5);
    r[9] = coeffs.beta(10) + half * theta * coeffs.alpha(9);
    r
}

pub fn max_constraint_residual<T: Real>(coeffs: &HamiltonianCoeffs<T>, theta: T) -> T {
    constraint_residuals(coeffs, theta).iter().map(|x| x.abs()).fold(T::zero(), T::max)
}

/// `(p + PT(p))/2` restricted to the ten slots: the `kind`-invariant part of a
/// general quadratic Hamiltonian.
///
/// For `PT5` this forces `c4`, `c6`, `c9` imaginary and the rest real; for
/// `PT4` it forces `c3`, `c5`, `c9` imaginary. `PT3` couples `c3 <-> c4`,
/// `c5 <-> c6`, `c7 <-> c8` and feeds `Im c9` into `c10` through `VU = UV - iθ`.
pub fn pt_invariant_part<T: Real>(kind: PTKind, coeffs: &HamiltonianCoeffs<T>, theta: T) -> HamiltonianCoeffs<T> {
    let sym = crate::algebra::pt_symmetrize(kind, &build_general(coeffs, theta));
    HamiltonianCoeffs::extract(&sym).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dagger, hermiticity_residual, pt_invariance_check};
    use crate::scalar::cx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn build_examples() {
        let zero = build_general(&HamiltonianCoeffs::<f64>::default(), 0.4);
        assert!(zero.is_zero());
        let mut c = HamiltonianCoeffs::default();
        c.set(1, cx(1.0, 0.0));
        let j2 = build_general(&c, 0.4);
        assert_eq!(j2.len(), 1);
        assert_eq!(j2.coeff(Monomial::new(0, 0, 2)), cx(1.0, 0.0));
    }

    #[test]
    fn c9_c10_coupling() {
        for th in [0.0, 0.5, 3.0] {
            let mut c = HamiltonianCoeffs::default();
            c.set(9, cx(1.7, 0.0));
            c.set(10, cx(0.0, -th * 1.7 / 2.0));
            assert!(max_constraint_residual(&c, th) < 1e-15);
            assert!(hermiticity_residual(&build_general(&c, th)) < 1e-14);
        }
    }

    #[test]
    fn single_imaginary_c3() {
        let mut c = HamiltonianCoeffs::default();
        c.set(3, cx(0.0, 1.0));
        let r = constraint_residuals(&c, 0.0);
        assert_eq!(r[2], 1.0);
        assert!(r.iter().enumerate().all(|(k, x)| k == 2 || *x == 0.0));
    }

    #[test]
    fn hermitian_polynomials_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let th = rng.random_range(-2.0..2.0);
            let mut c = HamiltonianCoeffs::default();
            for k in 1..=10 {
                c.set(k, cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            }
            let p = build_general(&c, th);
            let herm = &p + &dagger(&p);
            let (back, leftover) = HamiltonianCoeffs::extract(&herm);
            assert_eq!(leftover, 0.0);
            assert!(max_constraint_residual(&back, th) < 1e-12);
        }
    }

    #[test]
    fn invariant_part_patterns() {
        let th = 0.7;
        let mut c = HamiltonianCoeffs::default();
        for k in 1..=10 {
            c.set(k, cx(1.0, 1.0));
        }
        let p5 = pt_invariant_part(PTKind::PT5, &c, th);
        for k in 1..=10 {
            let imaginary = matches!(k, 4 | 6 | 9);
            let expected = if imaginary { cx(0.0, 1.0) } else { cx(1.0, 0.0) };
            assert!((p5.get(k) - expected).norm() < 1e-15, "PT5 c{k} = {}", p5.get(k));
        }
        let p4 = pt_invariant_part(PTKind::PT4, &c, th);
        for k in 1..=10 {
            let imaginary = matches!(k, 3 | 5 | 9);
            let expected = if imaginary { cx(0.0, 1.0) } else { cx(1.0, 0.0) };
            assert!((p4.get(k) - expected).norm() < 1e-15, "PT4 c{k} = {}", p4.get(k));
        }
        for kind in [PTKind::PT3, PTKind::PT4, PTKind::PT5] {
            let h = build_general(&pt_invariant_part(kind, &c, th), th);
            assert!(pt_invariance_check(kind, &h, 1e-13));
        }
    }
}
