//! Conjugation by the Dyson map `eta = exp(lambda·J + rho·U + tau·V)`.
//!
//! The span `{1, U, V, J}` is invariant under `ad_A` for `A = lambda·J + rho·U + tau·V`,
//! so each generator is mapped to an affine combination of generators. Two
//! independent routes compute that image: the closed-form hyperbolic
//! expressions and a 4×4 matrix exponential of `ad_A`. Conjugation of a whole
//! polynomial is the algebra homomorphism generated by the images.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::algebra::{normal_order_product, power, Generator, Monomial, OperatorPoly};
use crate::error::{Error, Result};
use crate::scalar::{imag_unit, re, Cx, Real};

/// Below this `|lambda|` the removable singularities are evaluated by series.
pub const SMALL_LAMBDA: f64 = 1e-4;

/// Imaginary parts below this bound count as real.
pub const REALITY_TOL: f64 = 1e-10;

/// The exponent parameters of the Dyson map together with the deformation
/// they act on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DysonParams<T: Real> {
    pub lambda: Cx<T>,
    pub rho: Cx<T>,
    pub tau: Cx<T>,
    pub theta: T,
}

impl<T: Real> DysonParams<T> {
    pub fn new(lambda: Cx<T>, rho: Cx<T>, tau: Cx<T>, theta: T) -> Self {
        DysonParams { lambda, rho, tau, theta }
    }

    pub fn real(lambda: T, rho: T, tau: T, theta: T) -> Self {
        Self::new(re(lambda), re(rho), re(tau), theta)
    }

    pub fn identity(theta: T) -> Self {
        Self::real(T::zero(), T::zero(), T::zero(), theta)
    }

    /// True when all three exponents are real to [`REALITY_TOL`], i.e. `eta`
    /// is a bounded Hermitian similarity for Hermitian generators.
    pub fn is_real(&self) -> bool {
        let tol = T::lit(REALITY_TOL);
        self.lambda.im.abs() < tol && self.rho.im.abs() < tol && self.tau.im.abs() < tol
    }

    /// Parameters of `eta^{-1}`.
    pub fn inverse(&self) -> Self {
        Self::new(-self.lambda, -self.rho, -self.tau, self.theta)
    }

    /// The exponent `lambda·J + rho·U + tau·V` as a polynomial.
    pub fn exponent(&self) -> OperatorPoly<T> {
        OperatorPoly::from_terms(
            [
                (Monomial::of(Generator::J), self.lambda),
                (Monomial::of(Generator::U), self.rho),
                (Monomial::of(Generator::V), self.tau),
            ],
            self.theta,
        )
    }
}

/// `s0·1 + sU·U + sV·V + sJ·J`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointImage<T: Real> {
    pub s0: Cx<T>,
    pub su: Cx<T>,
    pub sv: Cx<T>,
    pub sj: Cx<T>,
}

impl<T: Real> AdjointImage<T> {
    pub fn of_generator(g: Generator) -> Self {
        let (z, o) = (Cx::zero(), Cx::one());
        match g {
            Generator::U => AdjointImage { s0: z, su: o, sv: z, sj: z },
            Generator::V => AdjointImage { s0: z, su: z, sv: o, sj: z },
            Generator::J => AdjointImage { s0: z, su: z, sv: z, sj: o },
        }
    }

    pub fn components(&self) -> [Cx<T>; 4] {
        [self.s0, self.su, self.sv, self.sj]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.components()
            .iter()
            .zip(other.components().iter())
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn to_poly(&self, theta: T) -> OperatorPoly<T> {
        OperatorPoly::from_terms(
            [
                (Monomial::ONE, self.s0),
                (Monomial::of(Generator::U), self.su),
                (Monomial::of(Generator::V), self.sv),
                (Monomial::of(Generator::J), self.sj),
            ],
            theta,
        )
    }
}

/// `sinh(l)/l`, `(cosh(l) - 1)/l` and `(cosh(l) - 1)/l^2`, with series for small `l`.
fn hyperbolic_ratios<T: Real>(lambda: Cx<T>) -> (Cx<T>, Cx<T>, Cx<T>) {
    if lambda.norm() < T::lit(SMALL_LAMBDA) {
        let l2 = lambda * lambda;
        let l4 = l2 * l2;
        let one = Cx::<T>::one();
        let sinc = one + l2 / re(T::lit(6.0)) + l4 / re(T::lit(120.0));
        let c2 = re(T::lit(0.5)) + l2 / re(T::lit(24.0)) + l4 / re(T::lit(720.0));
        (sinc, lambda * c2, c2)
    } else {
        // cosh(l) - 1 = 2 sinh²(l/2) avoids cancellation near the switch point
        let sh = (lambda * re(T::lit(0.5))).sinh();
        let cm1 = sh * sh * re(T::lit(2.0));
        (lambda.sinh() / lambda, cm1 / lambda, cm1 / (lambda * lambda))
    }
}

/// Closed-form image `eta g eta^{-1}`:
///
/// ```text
/// eta J eta^-1 = J + i(rho V - tau U) sinh(l)/l + [rho U + tau V + theta(rho²+tau²)/l] (1 - cosh l)/l
/// eta U eta^-1 = (U + rho theta/l) cosh l - i (V + tau theta/l) sinh l - rho theta/l
/// eta V eta^-1 = (V + tau theta/l) cosh l + i (U + rho theta/l) sinh l - tau theta/l
/// ```
pub fn adjoint_generator_closed<T: Real>(params: &DysonParams<T>, g: Generator) -> AdjointImage<T> {
    closed_image(params, g, params.theta)
}

/// Same as [`adjoint_generator_closed`] but with the deformation parameter
/// supplied separately, so a verification run can perturb it.
pub(crate) fn closed_image<T: Real>(params: &DysonParams<T>, g: Generator, theta: T) -> AdjointImage<T> {
    let i = imag_unit::<T>();
    let th = re(theta);
    let DysonParams { lambda, rho, tau, .. } = *params;
    let (sinc, cm1_l, cm1_l2) = hyperbolic_ratios(lambda);
    let (s, c) = if lambda.norm() < T::lit(SMALL_LAMBDA) {
        (lambda * sinc, Cx::<T>::one() + lambda * cm1_l)
    } else {
        (lambda.sinh(), lambda.cosh())
    };
    match g {
        Generator::U => AdjointImage { s0: rho * th * cm1_l - i * tau * th * sinc, su: c, sv: -i * s, sj: Cx::<T>::zero() },
        Generator::V => AdjointImage { s0: tau * th * cm1_l + i * rho * th * sinc, su: i * s, sv: c, sj: Cx::<T>::zero() },
        Generator::J => AdjointImage {
            s0: -th * (rho * rho + tau * tau) * cm1_l2,
            su: -i * tau * sinc - rho * cm1_l,
            sv: i * rho * sinc - tau * cm1_l,
            sj: Cx::one(),
        },
    }
}

type Mat4<T> = [[Cx<T>; 4]; 4];

fn mat_identity<T: Real>() -> Mat4<T> {
    let mut m = [[Cx::zero(); 4]; 4];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = Cx::one();
    }
    m
}

fn mat_mul<T: Real>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut out = [[Cx::zero(); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).fold(Cx::zero(), |x, y| x + y);
        }
    }
    out
}

fn mat_axpy<T: Real>(y: &mut Mat4<T>, s: T, x: &Mat4<T>) {
    for r in 0..4 {
        for c in 0..4 {
            y[r][c] += x[r][c] * s;
        }
    }
}

fn mat_norm1<T: Real>(a: &Mat4<T>) -> T {
    (0..4).map(|c| (0..4).map(|r| a[r][c].norm()).fold(T::zero(), |x, y| x + y)).fold(T::zero(), T::max)
}

/// Solves `a x = b` for a 4×4 system by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn mat_solve<T: Real>(mut a: Mat4<T>, mut b: Mat4<T>) -> Mat4<T> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap()).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / p;
            for k in col..4 {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            for k in 0..4 {
                let v = b[col][k];
                b[row][k] -= f * v;
            }
        }
    }
    for col in (0..4).rev() {
        for k in 0..4 {
            let mut acc = b[col][k];
            for j in col + 1..4 {
                acc -= a[col][j] * b[j][k];
            }
            b[col][k] = acc / a[col][col];
        }
    }
    b
}

const PADE_ORDER: usize = 8;

/// Matrix exponential by scaling and squaring with a diagonal Padé approximant.
fn mat_exp<T: Real>(a: &Mat4<T>) -> Mat4<T> {
    let norm = mat_norm1(a);
    let mut squarings = 0u32;
    let half = T::lit(0.5);
    let mut scale = T::one();
    while norm * scale > half {
        scale *= half;
        squarings += 1;
    }
    let mut x = *a;
    for row in x.iter_mut() {
        for v in row.iter_mut() {
            *v *= scale;
        }
    }

    let mut num = mat_identity::<T>();
    let mut den = mat_identity::<T>();
    let mut pow = mat_identity::<T>();
    let mut coef = T::one();
    let q = PADE_ORDER as f64;
    for k in 1..=PADE_ORDER {
        let kf = k as f64;
        coef *= T::lit((q - kf + 1.0) / (kf * (2.0 * q - kf + 1.0)));
        pow = mat_mul(&pow, &x);
        mat_axpy(&mut num, coef, &pow);
        let sign = if k % 2 == 0 { coef } else { -coef };
        mat_axpy(&mut den, sign, &pow);
    }
    let mut e = mat_solve(den, num);
    for _ in 0..squarings {
        e = mat_mul(&e, &e);
    }
    e
}

/// Matrix of `ad_A` on the basis `(1, U, V, J)`; column `k` holds the
/// coordinates of `[A, basis_k]`.
///
/// `[A,U] = -i lambda V - i tau theta`, `[A,V] = i lambda U + i rho theta`,
/// `[A,J] = i rho V - i tau U`.
pub fn ad_matrix<T: Real>(params: &DysonParams<T>) -> [[Cx<T>; 4]; 4] {
    let i = imag_unit::<T>();
    let th = re(params.theta);
    let DysonParams { lambda, rho, tau, .. } = *params;
    let z = Cx::zero();
    [
        [z, -i * tau * th, i * rho * th, z],
        [z, z, i * lambda, -i * tau],
        [z, -i * lambda, z, i * rho],
        [z, z, z, z],
    ]
}

/// Image of a generator from `exp(ad_A)` on the invariant span `{1, U, V, J}`.
pub fn adjoint_generator_oracle<T: Real>(params: &DysonParams<T>, g: Generator) -> AdjointImage<T> {
    let e = mat_exp(&ad_matrix(params));
    let col = match g {
        Generator::U => 1,
        Generator::V => 2,
        Generator::J => 3,
    };
    AdjointImage { s0: e[0][col], su: e[1][col], sv: e[2][col], sj: e[3][col] }
}

/// `eta p eta^{-1}`, using the closed-form generator images.
pub fn adjoint_poly<T: Real>(params: &DysonParams<T>, p: &OperatorPoly<T>) -> Result<OperatorPoly<T>> {
    if params.theta != p.theta() {
        return Err(Error::ThetaMismatch { left: params.theta.to_f64_lossy(), right: p.theta().to_f64_lossy() });
    }
    let images = Generator::ALL.map(|g| adjoint_generator_closed(params, g));
    Ok(conjugate_with(&images, p))
}

/// Extends generator images `[U, V, J]` multiplicatively to `p`.
pub fn conjugate_with<T: Real>(images: &[AdjointImage<T>; 3], p: &OperatorPoly<T>) -> OperatorPoly<T> {
    let theta = p.theta();
    let base = images.map(|im| im.to_poly(theta));
    let mut cache: HashMap<(usize, u32), OperatorPoly<T>> = HashMap::new();
    let mut pow = |k: usize, n: u32| cache.entry((k, n)).or_insert_with(|| power(&base[k], n)).clone();
    let mut out = OperatorPoly::zero(theta);
    for (m, c) in p.terms() {
        let prod = normal_order_product(&normal_order_product(&pow(0, m.u), &pow(1, m.v)).expect("theta"), &pow(2, m.j))
            .expect("theta");
        out = &out + &prod.scale(c);
    }
    out
}
