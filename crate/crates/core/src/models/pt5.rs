//! The PT5-invariant family
//!
//! ```text
//! H = mu1 J² + mu2 J + mu3 U + i mu4 V + mu5 UJ + i mu6 VJ + mu7 U² + mu8 V² + i mu9 UV
//! ```
//!
//! and its closed-form Dyson solutions with `tau = 0`.

use num_traits::{One, Zero};

use super::HamiltonianCoeffs;
use crate::algebra::{anticommutator, Generator, Monomial, OperatorPoly};
use crate::dyson::DysonParams;
use crate::error::{Error, Result};
use crate::scalar::{re, Cx, Real};

/// Principal branch `arccoth x = ½ ln((x+1)/(x-1))`.
pub fn arccoth<T: Real>(x: Cx<T>) -> Cx<T> {
    let one = Cx::new(T::one(), T::zero());
    ((x + one) / (x - one)).ln() * re(T::lit(0.5))
}

/// `arccoth` of a real argument. For `|x| < 1` the imaginary part is fixed
/// to `+pi/2`; `x = ±1` gives an infinite real part.
pub fn arccoth_real<T: Real>(x: T) -> Cx<T> {
    let half = T::lit(0.5);
    let one = T::one();
    let mag = half * ((x + one) / (x - one)).abs().ln();
    if x.abs() > one {
        Cx::new(mag, T::zero())
    } else {
        Cx::new(mag, T::FRAC_PI_2())
    }
}

/// `mu1 .. mu9`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mu<T: Real> {
    pub mu: [T; 9],
}

/// The four combinations that control the undeformed constraints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MuAbbrev<T: Real> {
    pub mu78: T,
    pub mu19: T,
    pub mu23: T,
    pub mu24: T,
}

impl<T: Real> Mu<T> {
    pub fn new(mu: [T; 9]) -> Self {
        Mu { mu }
    }

    pub fn from_f64(mu: [f64; 9]) -> Self {
        Mu { mu: mu.map(T::lit) }
    }

    /// `mu_k`, 1-based.
    #[inline]
    pub fn m(&self, k: usize) -> T {
        self.mu[k - 1]
    }

    pub fn with(mut self, k: usize, v: T) -> Self {
        self.mu[k - 1] = v;
        self
    }

    /// Replaces `mu7` and `mu9` by the values that make `mu78 = mu19 = 0`.
    pub fn with_special_choice(self) -> Self {
        let (m1, m5, m6, m8) = (self.m(1), self.m(5), self.m(6), self.m(8));
        let four = T::lit(4.0);
        let two = T::lit(2.0);
        self.with(7, (m5 * m5 + m6 * m6 + four * m1 * m8) / (four * m1)).with(9, m5 * m6 / (two * m1))
    }

    pub fn abbrev(&self) -> MuAbbrev<T> {
        let (m1, m2, m3, m4, m5, m6, m7, m8, m9) =
            (self.m(1), self.m(2), self.m(3), self.m(4), self.m(5), self.m(6), self.m(7), self.m(8), self.m(9));
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        MuAbbrev {
            mu78: (m5 * m5 + m6 * m6) / (four * m1) - m7 + m8,
            mu19: m5 * m6 / (two * m1) - m9,
            mu23: m2 * m5 / (two * m1) - m6 / two - m3,
            mu24: m2 * m6 / (two * m1) - m5 / two - m4,
        }
    }

    /// `mu6² / (4 mu1) + mu8`.
    pub fn mu68(&self) -> T {
        self.m(6) * self.m(6) / (T::lit(4.0) * self.m(1)) + self.m(8)
    }

    /// `(mu6 cosh l - mu5 sinh l) / (2 mu1 (1 + cosh l))`.
    pub fn mu56(&self, lambda: T) -> T {
        let (s, c) = (lambda.sinh(), lambda.cosh());
        (self.m(6) * c - self.m(5) * s) / (T::lit(2.0) * self.m(1) * (T::one() + c))
    }

    /// `mu5/2 - (mu6/2) tanh(l/2)`.
    pub fn mu65(&self, lambda: T) -> T {
        let half = T::lit(0.5);
        half * self.m(5) - half * self.m(6) * (half * lambda).tanh()
    }

    pub fn to_coeffs(&self) -> HamiltonianCoeffs<T> {
        let z = T::zero();
        let r = |x: T| Cx::new(x, z);
        let i = |x: T| Cx::new(z, x);
        HamiltonianCoeffs::new([
            r(self.m(1)),
            r(self.m(2)),
            r(self.m(3)),
            i(self.m(4)),
            r(self.m(5)),
            i(self.m(6)),
            r(self.m(7)),
            r(self.m(8)),
            i(self.m(9)),
            Cx::zero(),
        ])
    }

    /// The PT5-invariant Hamiltonian at deformation `theta`.
    pub fn hamiltonian(&self, theta: T) -> OperatorPoly<T> {
        super::build_general(&self.to_coeffs(), theta)
    }

    /// True when `H` is already Hermitian (`mu6 = 0` and `mu5 + 2 mu4 = 0`).
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.m(6).abs() < tol && (self.m(5) + T::lit(2.0) * self.m(4)).abs() < tol
    }

    fn check_mu1(&self) -> Result<()> {
        if self.m(1) == T::zero() {
            Err(Error::ZeroMu1)
        } else {
            Ok(())
        }
    }

    /// Ratio `(mu1 mu23 + theta mu5 mu68) / (mu1 mu24 + theta mu6 mu68)` fixing
    /// `coth lambda` once the special choice is in force, as `(num, den)`.
    pub fn special_ratio_parts(&self, theta: T) -> (T, T) {
        let a = self.abbrev();
        let m68 = self.mu68();
        (self.m(1) * a.mu23 + theta * self.m(5) * m68, self.m(1) * a.mu24 + theta * self.m(6) * m68)
    }
}

/// Result of the undeformed solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Undeformed<T: Real> {
    pub params: DysonParams<T>,
    /// `|coth 2 lambda - mu78/mu19|` for the constraint not used to fix lambda.
    pub compatibility: T,
}

fn rho_from_coth<T: Real>(mu: &Mu<T>, lambda: Cx<T>, coth: Cx<T>) -> Cx<T> {
    lambda * (re(mu.m(5)) - re(mu.m(6)) * coth) / re(T::lit(2.0) * mu.m(1))
}

/// `rho = lambda (mu5 - mu6 coth lambda)/(2 mu1)`, the companion of a given
/// `lambda` in every PT5 solution.
pub fn rho_for_lambda<T: Real>(mu: &Mu<T>, lambda: Cx<T>) -> Result<Cx<T>> {
    mu.check_mu1()?;
    if lambda.norm() == T::zero() {
        return Ok(Cx::zero());
    }
    Ok(rho_from_coth(mu, lambda, Cx::<T>::one() / lambda.tanh()))
}

/// `tau = 0`, `coth lambda = mu23/mu24`, `rho = lambda (mu5 - mu6 coth lambda)/(2 mu1)`
/// at `theta = 0`; the remaining relation `coth 2 lambda = mu78/mu19` is
/// returned as a compatibility residual.
pub fn solve_pt5_undeformed<T: Real>(mu: &Mu<T>) -> Result<Undeformed<T>> {
    mu.check_mu1()?;
    let a = mu.abbrev();
    let zero = T::zero();
    let (lambda, coth) = if a.mu24 != zero {
        let ratio = a.mu23 / a.mu24;
        (arccoth_real(ratio), re(ratio))
    } else if a.mu23 != zero {
        return Err(Error::Degenerate("mu24 = 0 with mu23 != 0 forces lambda -> 0".into()));
    } else if a.mu19 != zero {
        // coth lambda constraint absent; fall back on coth 2 lambda.
        let l = arccoth_real(a.mu78 / a.mu19) * re(T::lit(0.5));
        (l, Cx::<T>::one() / l.tanh())
    } else {
        return Err(Error::Degenerate("mu19 = mu23 = mu24 = 0 leaves lambda undetermined".into()));
    };
    let params = DysonParams::new(lambda, rho_from_coth(mu, lambda, coth), Cx::zero(), zero);
    let two_l = lambda * re(T::lit(2.0));
    let compatibility = if a.mu19 != zero {
        (Cx::<T>::one() / two_l.tanh() - re(a.mu78 / a.mu19)).norm()
    } else if a.mu78 == zero {
        zero
    } else {
        // tanh 2 lambda = mu19/mu78 = 0
        two_l.tanh().norm()
    };
    Ok(Undeformed { params, compatibility })
}

/// Value of `mu3` that keeps the deformed conjugate Hermitian:
///
/// ```text
/// mu3 = mu3^(0) + 2 theta mu56 [mu19 (½ + cosh l) - mu78 sinh l - mu68 (1 + cosh l)/sinh l]
/// mu3^(0) = -mu24 coth l + mu2 mu5/(2 mu1) - mu6/2
/// ```
///
/// `mu3` itself does not enter the right-hand side.
pub fn mu3_deformed<T: Real>(mu: &Mu<T>, lambda: T, theta: T) -> Result<T> {
    mu.check_mu1()?;
    let (s, c) = (lambda.sinh(), lambda.cosh());
    if s == T::zero() {
        return Err(Error::Singular("lambda = 0 in (1 + cosh l)/sinh l".into()));
    }
    let a = mu.abbrev();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let undeformed = -a.mu24 * c / s + mu.m(2) * mu.m(5) / (two * mu.m(1)) - mu.m(6) / two;
    let bracket = a.mu19 * (half + c) - a.mu78 * s - mu.mu68() * (T::one() + c) / s;
    Ok(undeformed + theta * two * mu.mu56(lambda) * bracket)
}

/// Dyson parameters once `mu7`, `mu9` take their special values:
/// `coth lambda = (mu1 mu23 + theta mu5 mu68)/(mu1 mu24 + theta mu6 mu68)`,
/// `rho` as in the undeformed case and `tau = 0`. `lambda` is complex when the
/// ratio has magnitude at most one.
pub fn solve_pt5_special<T: Real>(mu: &Mu<T>, theta: T) -> Result<DysonParams<T>> {
    mu.check_mu1()?;
    let (num, den) = mu.special_ratio_parts(theta);
    if den == T::zero() {
        return Err(Error::Singular("denominator of the coth lambda ratio vanishes".into()));
    }
    let ratio = num / den;
    let lambda = arccoth_real(ratio);
    Ok(DysonParams::new(lambda, rho_from_coth(mu, lambda, re(ratio)), Cx::zero(), theta))
}

/// The isospectral Hermitian Hamiltonian in closed form:
///
/// ```text
/// h = mu1 J² + (mu2 + theta mu6 mu56) J + (mu8 + mu5²/(4 mu1) + mu6 mu56) U² + mu68 V²
///   + [mu2 mu65/mu1 - mu23 cosh l + mu24 sinh l + theta mu56 (mu6 mu65/mu1 + 2 mu68 sinh l)] U
///   + mu65 {U, J}
///   - theta [mu5 mu6/(4 mu1) + mu56 (mu24 cosh l - mu23 sinh l - mu4 - mu5/2)]
///   - theta² mu56² [mu68 (1 + 2 cosh l) + mu8]
/// ```
pub fn hermitian_counterpart_pt5<T: Real>(mu: &Mu<T>, theta: T) -> Result<OperatorPoly<T>> {
    check_special_choice(mu)?;
    let params = solve_pt5_special(mu, theta)?;
    if !params.is_real() {
        return Err(Error::BrokenPhase(format!("coth lambda ratio {:?} has magnitude <= 1", mu.special_ratio_parts(theta))));
    }
    let l = params.lambda.re;
    let (s, c) = (l.sinh(), l.cosh());
    let a = mu.abbrev();
    let (m1, m2, m4, m5, m6, m8) = (mu.m(1), mu.m(2), mu.m(4), mu.m(5), mu.m(6), mu.m(8));
    let (m56, m65, m68) = (mu.mu56(l), mu.mu65(l), mu.mu68());
    let two = T::lit(2.0);
    let four = T::lit(4.0);

    let coef_u = m2 / m1 * m65 - a.mu23 * c + a.mu24 * s + theta * m56 * (m6 / m1 * m65 + two * m68 * s);
    let scalar = -theta * (m5 * m6 / (four * m1) + m56 * (a.mu24 * c - a.mu23 * s - m4 - m5 / two))
        - theta * theta * m56 * m56 * (m68 * (T::one() + two * c) + m8);
    let h = OperatorPoly::from_terms(
        [
            (Monomial::new(0, 0, 2), re(m1)),
            (Monomial::new(0, 0, 1), re(m2 + theta * m6 * m56)),
            (Monomial::new(2, 0, 0), re(m8 + m5 * m5 / (four * m1) + m6 * m56)),
            (Monomial::new(0, 2, 0), re(m68)),
            (Monomial::new(1, 0, 0), re(coef_u)),
            (Monomial::ONE, re(scalar)),
        ],
        theta,
    );
    let uj = anticommutator(&OperatorPoly::generator(Generator::U, theta), &OperatorPoly::generator(Generator::J, theta))?;
    Ok(&h + &uj.scale(re(m65)))
}

fn check_special_choice<T: Real>(mu: &Mu<T>) -> Result<()> {
    mu.check_mu1()?;
    let a = mu.abbrev();
    let scale = mu.mu.iter().fold(T::one(), |acc, x| acc.max(x.abs()));
    let tol = T::lit(1e-12) * scale * scale;
    if a.mu78.abs() > tol || a.mu19.abs() > tol {
        return Err(Error::Degenerate(format!("special choice not in force (mu78 = {}, mu19 = {})", a.mu78, a.mu19)));
    }
    Ok(())
}
