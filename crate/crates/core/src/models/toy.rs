//! The fully constrained PT5 model whose Hermitian partner is a function of
//! `J` alone.
//!
//! With `mu2 = 0`, `mu5 = -2 mu4`, `mu6 = -2 mu3`, `mu8 = -mu3²/mu1` and the
//! special `mu7`, `mu9`, both sides of the `coth lambda` constraint vanish, so
//! `lambda` is free. Fixing `mu3 = mu4 coth(lambda/2)` gives
//!
//! ```text
//! h = mu1 J² + eps J + shift,    eps = theta mu4² / (mu1 sinh²(lambda/2))
//! ```

use super::pt5::{arccoth_real, Mu};
use crate::algebra::{Monomial, OperatorPoly};
use crate::dyson::DysonParams;
use crate::error::{Error, Result};
use crate::scalar::{re, Cx, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct ToyModel<T: Real> {
    /// Parameters of the non-Hermitian Hamiltonian.
    pub mu: Mu<T>,
    /// Dyson map taking `mu.hamiltonian(theta)` to `h`.
    pub params: DysonParams<T>,
    /// `mu1 J² + eps J + shift`.
    pub h: OperatorPoly<T>,
    pub epsilon: T,
    /// `eps²/(4 mu1) - (theta mu4²/mu1) coth(lambda/2)`, which is what direct
    /// conjugation produces; it completes the square in `J`.
    pub shift: T,
    /// `(theta mu4²/mu1) [eps - coth(lambda/2)]`, the form usually quoted for
    /// this model. It disagrees with conjugation whenever `theta != 0`.
    pub shift_published: T,
}

/// Builds the model for given `mu1`, `mu4`, `lambda` and `theta`.
pub fn toy_model<T: Real>(mu1: T, mu4: T, lambda: T, theta: T) -> Result<ToyModel<T>> {
    if mu1 == T::zero() {
        return Err(Error::ZeroMu1);
    }
    if lambda == T::zero() {
        return Err(Error::Singular("lambda = 0 makes coth(lambda/2) infinite".into()));
    }
    let two = T::lit(2.0);
    let half_l = lambda / two;
    let coth_half = T::one() / half_l.tanh();
    let mu3 = mu4 * coth_half;
    let z = T::zero();
    let mu = Mu::new([mu1, z, mu3, mu4, -two * mu4, -two * mu3, z, -mu3 * mu3 / mu1, z]).with_special_choice();

    // The coth(lambda) constraint is void here, so rho uses the actual coth of lambda.
    let coth = T::one() / lambda.tanh();
    let rho = lambda * (mu.m(5) - mu.m(6) * coth) / (two * mu1);
    let params = DysonParams::real(lambda, rho, z, theta);

    let sh2 = half_l.sinh().powi(2);
    let epsilon = theta * mu4 * mu4 / (mu1 * sh2);
    let prefactor = theta * mu4 * mu4 / mu1;
    let shift = epsilon * epsilon / (T::lit(4.0) * mu1) - prefactor * coth_half;
    let shift_published = prefactor * (epsilon - coth_half);
    let h = OperatorPoly::from_terms(
        [(Monomial::new(0, 0, 2), re(mu1)), (Monomial::new(0, 0, 1), re(epsilon)), (Monomial::ONE, re(shift))],
        theta,
    );
    Ok(ToyModel { mu, params, h, epsilon, shift, shift_published })
}

/// `lambda = 2 arccoth(mu3/mu4)`; complex when `|mu3/mu4| <= 1`.
pub fn toy_lambda_from_ratio<T: Real>(mu3: T, mu4: T) -> Result<Cx<T>> {
    if mu4 == T::zero() {
        return Err(Error::Singular("mu4 = 0".into()));
    }
    Ok(arccoth_real(mu3 / mu4) * re(T::lit(2.0)))
}

/// Labelling of the discrete toy spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `4 pi² mu1 n² - 2 pi eps n`: the published quantization.
    Paper,
    /// `mu1 n² - eps n` for the mode `e^{i n phi}`, as obtained by
    /// diagonalizing `mu1 J² + eps J` on Fourier modes.
    Oracle,
}

/// Energy of level `n` of `mu1 J² + eps J`, shift excluded. The paper
/// convention equals the oracle convention evaluated at `2 pi n`.
pub fn toy_spectrum<T: Real>(mu1: T, epsilon: T, n: i64, convention: Convention) -> T {
    let n = T::from_i64(n).expect("level index");
    let k = match convention {
        Convention::Paper => T::TAU() * n,
        Convention::Oracle => n,
    };
    mu1 * k * k - epsilon * k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hermiticity_residual;
    use crate::dyson::adjoint_poly;
    use std::f64::consts::PI;

    #[test]
    fn undeformed_toy_is_pure_j_squared() {
        let t = toy_model(1.5f64, 0.8, 0.9, 0.0).unwrap();
        assert_eq!(t.epsilon, 0.0);
        assert!(t.shift.abs() < 1e-15);
        assert!(t.h.max_abs_diff(&OperatorPoly::monomial(Monomial::new(0, 0, 2), re(1.5), 0.0)) < 1e-15);
    }

    #[test]
    fn ratio_two_gives_ln3() {
        let l = toy_lambda_from_ratio(2.0, 1.0).unwrap();
        assert!((l.re - 3f64.ln()).abs() < 1e-15 && l.im == 0.0);
        let t = toy_model(1.0, 1.0, l.re, 0.1).unwrap();
        assert!((t.mu.m(3) - 2.0).abs() < 1e-14);
        assert!((t.epsilon - 0.3).abs() < 1e-14);
        assert!((t.shift_published + 0.17).abs() < 1e-14);
        // 0.09/4 - 0.1·2
        assert!((t.shift + 0.1775).abs() < 1e-14);
        assert!(!toy_lambda_from_ratio(0.5, 1.0).unwrap().im.eq(&0.0));
    }

    #[test]
    fn conjugation_reproduces_h() {
        for (m1, m4, l, th) in [(1.0, 1.0, 3f64.ln(), 0.1), (1.3, -0.7, 0.9, 2.0), (-0.8, 0.5, -1.4, 1.5)] {
            let t = toy_model(m1, m4, l, th).unwrap();
            let (num, den) = t.mu.special_ratio_parts(th);
            assert!(num.abs() < 1e-12 && den.abs() < 1e-12);
            let engine = adjoint_poly(&t.params, &t.mu.hamiltonian(th)).unwrap();
            assert!(engine.max_abs_diff(&t.h) < 1e-12, "{engine} vs {}", t.h);
            assert!(hermiticity_residual(&engine) < 1e-12);
        }
    }

    #[test]
    fn spectrum_conventions() {
        assert_eq!(toy_spectrum(1.0, 0.3, 0, Convention::Paper), 0.0);
        assert_eq!(toy_spectrum(1.0, 0.3, 0, Convention::Oracle), 0.0);
        assert!((toy_spectrum(1.0f64, 0.0, 3, Convention::Paper) - 36.0 * PI * PI).abs() < 1e-12);
        assert!((toy_spectrum(1.0f64, 0.3, 1, Convention::Oracle) - 0.7).abs() < 1e-15);
        assert!((toy_spectrum(1.0, 0.3, 1, Convention::Paper) - (4.0 * PI * PI - 0.6 * PI)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(toy_model(0.0, 1.0, 1.0, 1.0), Err(Error::ZeroMu1)));
        assert!(toy_model(1.0, 1.0, 0.0, 1.0).is_err());
    }
}
