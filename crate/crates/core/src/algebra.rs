//! Normal-ordered polynomials in the generators `U`, `V`, `J` of the deformed
//! Euclidean algebra
//!
//! ```text
//! [U, J] = iV,   [V, J] = -iU,   [U, V] = i·theta
//! ```
//!
//! Every polynomial is kept in the Poincaré–Birkhoff–Witt basis `U^a V^b J^c`.
//! Products are rewritten with `JU = UJ - iV`, `JV = VJ + iU` and
//! `VU = UV - i·theta`. At `theta = 0` this is the undeformed algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{imag_unit, re, Cx, Real};

/// Generator tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    U,
    V,
    J,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::U, Generator::V, Generator::J];
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::U => "U",
            Generator::V => "V",
            Generator::J => "J",
        })
    }
}

/// `U^u V^v J^j`, always in canonical order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub u: u32,
    pub v: u32,
    pub j: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: 0, v: 0, j: 0 };

    pub const fn new(u: u32, v: u32, j: u32) -> Self {
        Monomial { u, v, j }
    }

    pub const fn of(g: Generator) -> Self {
        match g {
            Generator::U => Monomial::new(1, 0, 0),
            Generator::V => Monomial::new(0, 1, 0),
            Generator::J => Monomial::new(0, 0, 1),
        }
    }

    pub fn degree(&self) -> u32 {
        self.u + self.v + self.j
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for (name, p) in [("U", self.u), ("V", self.v), ("J", self.j)] {
            if p == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if p == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{p}")?;
            }
        }
        Ok(())
    }
}

/// Antilinear involutions of the (deformed) algebra.
///
/// `PT3`, `PT4` and `PT5` are automorphisms at every `theta`. `PT1` and `PT2`
/// are only compatible with the undeformed relations; see
/// [`pt_preserves_relations`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PTKind {
    PT1,
    PT2,
    PT3,
    PT4,
    PT5,
}

impl PTKind {
    pub const ALL: [PTKind; 5] = [PTKind::PT1, PTKind::PT2, PTKind::PT3, PTKind::PT4, PTKind::PT5];

    /// Image of a generator as `(sign, target generator)`.
    pub fn image(self, g: Generator) -> (i8, Generator) {
        use Generator::*;
        match (self, g) {
            (PTKind::PT1, x) => (-1, x),
            (PTKind::PT2, J) => (-1, J),
            (PTKind::PT2, x) => (1, x),
            (PTKind::PT3, U) => (1, V),
            (PTKind::PT3, V) => (1, U),
            (PTKind::PT3, J) => (1, J),
            (PTKind::PT4, U) => (-1, U),
            (PTKind::PT4, x) => (1, x),
            (PTKind::PT5, V) => (-1, V),
            (PTKind::PT5, x) => (1, x),
        }
    }
}

impl fmt::Display for PTKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for PTKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "PT1" => Ok(PTKind::PT1),
            "PT2" => Ok(PTKind::PT2),
            "PT3" => Ok(PTKind::PT3),
            "PT4" => Ok(PTKind::PT4),
            "PT5" => Ok(PTKind::PT5),
            other => Err(format!("unknown PT kind `{other}`")),
        }
    }
}

type Terms<T> = BTreeMap<Monomial, Cx<T>>;

fn accumulate<T: Real>(terms: &mut Terms<T>, m: Monomial, c: Cx<T>) {
    *terms.entry(m).or_insert_with(Cx::zero) += c;
}

fn pruned<T: Real>(mut terms: Terms<T>) -> Terms<T> {
    let tol = T::prune_tol();
    terms.retain(|_, c| c.norm() >= tol);
    terms
}

/// Normal-ordered complex polynomial in `U`, `V`, `J` at deformation `theta`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPoly<T: Real> {
    terms: Terms<T>,
    theta: T,
}

impl<T: Real> OperatorPoly<T> {
    pub fn zero(theta: T) -> Self {
        OperatorPoly { terms: Terms::new(), theta }
    }

    pub fn identity(theta: T) -> Self {
        Self::scalar(Cx::one(), theta)
    }

    pub fn scalar(c: Cx<T>, theta: T) -> Self {
        Self::monomial(Monomial::ONE, c, theta)
    }

    pub fn generator(g: Generator, theta: T) -> Self {
        Self::monomial(Monomial::of(g), Cx::one(), theta)
    }

    pub fn monomial(m: Monomial, c: Cx<T>, theta: T) -> Self {
        Self::from_terms([(m, c)], theta)
    }

    /// Builds a polynomial from already normal-ordered terms; repeated
    /// monomials are summed.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Cx<T>)>, theta: T) -> Self {
        let mut acc = Terms::new();
        for (m, c) in terms {
            accumulate(&mut acc, m, c);
        }
        OperatorPoly { terms: pruned(acc), theta }
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn coeff(&self, m: Monomial) -> Cx<T> {
        self.terms.get(&m).copied().unwrap_or_else(Cx::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Cx<T>)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> T {
        self.terms.values().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// Max-norm distance between coefficient vectors; infinite when the
    /// deformation parameters differ.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.theta != other.theta {
            return T::infinity();
        }
        let mut worst = T::zero();
        for (m, c) in &self.terms {
            worst = worst.max((*c - other.coeff(*m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::from_terms(self.terms().map(|(m, c)| (m, c * s)), self.theta)
    }

    pub fn map_coeffs(&self, f: impl Fn(Cx<T>) -> Cx<T>) -> Self {
        Self::from_terms(self.terms().map(|(m, c)| (m, f(c))), self.theta)
    }

    /// Converts the coefficient field, e.g. to re-run a computation in `f32`.
    pub fn cast<S: Real>(&self) -> OperatorPoly<S> {
        let conv = |x: T| S::lit(x.to_f64_lossy());
        OperatorPoly::from_terms(
            self.terms().map(|(m, c)| (m, Cx::new(conv(c.re), conv(c.im)))),
            conv(self.theta),
        )
    }

    fn check_theta(&self, other: &Self) -> Result<()> {
        if self.theta == other.theta {
            Ok(())
        } else {
            Err(Error::ThetaMismatch { left: self.theta.to_f64_lossy(), right: other.theta.to_f64_lossy() })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        Ok(Self::from_terms(self.terms().chain(other.terms()), self.theta))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        Ok(Self::from_terms(self.terms().chain(other.terms().map(|(m, c)| (m, -c))), self.theta))
    }
}

/// Left multiplication of `coef · m` by a single generator, accumulated into `out`.
fn left_mul_monomial<T: Real>(g: Generator, m: Monomial, coef: Cx<T>, theta: T, out: &mut Terms<T>) {
    let i = imag_unit::<T>();
    match g {
        Generator::U => accumulate(out, Monomial::new(m.u + 1, m.v, m.j), coef),
        Generator::V => {
            // V U^a = U^a V - i·theta·a·U^(a-1)
            accumulate(out, Monomial::new(m.u, m.v + 1, m.j), coef);
            if m.u > 0 {
                let shift = i * re(-theta * T::from_u32(m.u).unwrap());
                accumulate(out, Monomial::new(m.u - 1, m.v, m.j), coef * shift);
            }
        }
        Generator::J => {
            if m.u > 0 {
                // J U R = U (J R) - i V R
                let rest = Monomial::new(m.u - 1, m.v, m.j);
                let mut jr = Terms::new();
                left_mul_monomial(Generator::J, rest, coef, theta, &mut jr);
                for (mm, cc) in jr {
                    left_mul_monomial(Generator::U, mm, cc, theta, out);
                }
                left_mul_monomial(Generator::V, rest, -i * coef, theta, out);
            } else if m.v > 0 {
                // J V R = V (J R) + i U R, with R = V^(v-1) J^j
                let rest = Monomial::new(0, m.v - 1, m.j);
                let mut jr = Terms::new();
                left_mul_monomial(Generator::J, rest, coef, theta, &mut jr);
                for (mm, cc) in jr {
                    left_mul_monomial(Generator::V, mm, cc, theta, out);
                }
                left_mul_monomial(Generator::U, rest, i * coef, theta, out);
            } else {
                accumulate(out, Monomial::new(0, 0, m.j + 1), coef);
            }
        }
    }
}

fn left_mul_terms<T: Real>(g: Generator, terms: &Terms<T>, theta: T) -> Terms<T> {
    let mut out = Terms::new();
    for (m, c) in terms {
        left_mul_monomial(g, *m, *c, theta, &mut out);
    }
    out
}

/// Multiplies the word `w_0 w_1 ... w_k` (each letter a signed generator) onto
/// `seed` from the left, rightmost letter first.
fn apply_word<T: Real>(word: &[(Cx<T>, Generator)], seed: Terms<T>, theta: T) -> Terms<T> {
    let mut acc = seed;
    for (s, g) in word.iter().rev() {
        acc = left_mul_terms(*g, &acc, theta);
        if *s != Cx::one() {
            for c in acc.values_mut() {
                *c *= *s;
            }
        }
    }
    acc
}

fn word_of<T: Real>(m: Monomial, image: impl Fn(Generator) -> (Cx<T>, Generator)) -> Vec<(Cx<T>, Generator)> {
    let mut w = Vec::with_capacity(m.degree() as usize);
    w.extend(std::iter::repeat_n(image(Generator::U), m.u as usize));
    w.extend(std::iter::repeat_n(image(Generator::V), m.v as usize));
    w.extend(std::iter::repeat_n(image(Generator::J), m.j as usize));
    w
}

/// Normal-ordered product `p·q`.
pub fn normal_order_product<T: Real>(p: &OperatorPoly<T>, q: &OperatorPoly<T>) -> Result<OperatorPoly<T>> {
    p.check_theta(q)?;
    let theta = p.theta;
    let mut out = Terms::new();
    for (m, c) in p.terms() {
        let word = word_of(m, |g| (Cx::one(), g));
        let seed: Terms<T> = q.terms.iter().map(|(mm, cc)| (*mm, *cc * c)).collect();
        for (mm, cc) in apply_word(&word, seed, theta) {
            accumulate(&mut out, mm, cc);
        }
    }
    Ok(OperatorPoly { terms: pruned(out), theta })
}

/// `[p, q] = pq - qp`.
pub fn commutator<T: Real>(p: &OperatorPoly<T>, q: &OperatorPoly<T>) -> Result<OperatorPoly<T>> {
    normal_order_product(p, q)?.try_sub(&normal_order_product(q, p)?)
}

/// `{p, q} = pq + qp`.
pub fn anticommutator<T: Real>(p: &OperatorPoly<T>, q: &OperatorPoly<T>) -> Result<OperatorPoly<T>> {
    normal_order_product(p, q)?.try_add(&normal_order_product(q, p)?)
}

/// Integer power by repeated multiplication.
pub fn power<T: Real>(p: &OperatorPoly<T>, n: u32) -> OperatorPoly<T> {
    let mut acc = OperatorPoly::identity(p.theta);
    for _ in 0..n {
        acc = normal_order_product(&acc, p).expect("same theta");
    }
    acc
}

/// Hermitian conjugate, with `U`, `V`, `J` Hermitian.
pub fn dagger<T: Real>(p: &OperatorPoly<T>) -> OperatorPoly<T> {
    let theta = p.theta;
    let mut out = Terms::new();
    for (m, c) in p.terms() {
        // (U^a V^b J^c)† = J^c V^b U^a
        let mut word = Vec::with_capacity(m.degree() as usize);
        word.extend(std::iter::repeat_n((Cx::one(), Generator::J), m.j as usize));
        word.extend(std::iter::repeat_n((Cx::one(), Generator::V), m.v as usize));
        let seed: Terms<T> = [(Monomial::new(m.u, 0, 0), c.conj())].into_iter().collect();
        for (mm, cc) in apply_word(&word, seed, theta) {
            accumulate(&mut out, mm, cc);
        }
    }
    OperatorPoly { terms: pruned(out), theta }
}

/// Applies the antilinear map `kind`: coefficients are conjugated and each
/// generator replaced by its signed image.
pub fn pt_apply<T: Real>(kind: PTKind, p: &OperatorPoly<T>) -> OperatorPoly<T> {
    let theta = p.theta;
    let image = |g| {
        let (s, h) = kind.image(g);
        (re(T::lit(f64::from(s))), h)
    };
    let mut out = Terms::new();
    for (m, c) in p.terms() {
        let word = word_of(m, image);
        let seed: Terms<T> = [(Monomial::ONE, c.conj())].into_iter().collect();
        for (mm, cc) in apply_word(&word, seed, theta) {
            accumulate(&mut out, mm, cc);
        }
    }
    OperatorPoly { terms: pruned(out), theta }
}

/// Projects onto the `kind`-invariant part, `(p + PT(p)) / 2`.
pub fn pt_symmetrize<T: Real>(kind: PTKind, p: &OperatorPoly<T>) -> OperatorPoly<T> {
    let half = re(T::lit(0.5));
    (p + &pt_apply(kind, p)).scale(half)
}

/// Max-norm of the coefficients of `p - p†`.
pub fn hermiticity_residual<T: Real>(p: &OperatorPoly<T>) -> T {
    p.max_abs_diff(&dagger(p))
}

pub fn pt_invariance_check<T: Real>(kind: PTKind, p: &OperatorPoly<T>, tol: T) -> bool {
    p.max_abs_diff(&pt_apply(kind, p)) < tol
}

/// Checks that `kind` maps each defining relation `[X, Y] = R` onto a valid
/// relation, i.e. `[PT(X), PT(Y)] = PT(R)` with `PT` antilinear on `R`.
pub fn pt_preserves_relations<T: Real>(kind: PTKind, theta: T, tol: T) -> bool {
    relation_defects(kind, theta).into_iter().all(|d| d < tol)
}

/// Defects of the three relations `[U,V] = iθ`, `[U,J] = iV`, `[V,J] = -iU`
/// under `kind`, in that order.
pub fn relation_defects<T: Real>(kind: PTKind, theta: T) -> [T; 3] {
    let i = imag_unit::<T>();
    let g = |x| OperatorPoly::generator(x, theta);
    let relations = [
        (Generator::U, Generator::V, OperatorPoly::scalar(i * re(theta), theta)),
        (Generator::U, Generator::J, g(Generator::V).scale(i)),
        (Generator::V, Generator::J, g(Generator::U).scale(-i)),
    ];
    relations.map(|(x, y, rhs)| {
        let lhs = commutator(&pt_apply(kind, &g(x)), &pt_apply(kind, &g(y))).expect("same theta");
        lhs.max_abs_diff(&pt_apply(kind, &rhs))
    })
}

impl<T: Real> Add for &OperatorPoly<T> {
    type Output = OperatorPoly<T>;

    /// Panics if the deformation parameters differ; use [`OperatorPoly::try_add`]
    /// to get an error instead.
    fn add(self, rhs: Self) -> OperatorPoly<T> {
        self.try_add(rhs).expect("theta mismatch in addition")
    }
}

impl<T: Real> Sub for &OperatorPoly<T> {
    type Output = OperatorPoly<T>;

    fn sub(self, rhs: Self) -> OperatorPoly<T> {
        self.try_sub(rhs).expect("theta mismatch in subtraction")
    }
}

impl<T: Real> Mul for &OperatorPoly<T> {
    type Output = OperatorPoly<T>;

    fn mul(self, rhs: Self) -> OperatorPoly<T> {
        normal_order_product(self, rhs).expect("theta mismatch in product")
    }
}

impl<T: Real> Neg for &OperatorPoly<T> {
    type Output = OperatorPoly<T>;

    fn neg(self) -> OperatorPoly<T> {
        self.scale(-Cx::one())
    }
}

impl<T: Real> fmt::Display for OperatorPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({} {:+}i)·{}", c.re, c.im, m)?;
        }
        Ok(())
    }
}
