//! Truncated matrix representations of the deformed algebra and
//! convergence-filtered diagonalization.
//!
//! Three representations are available:
//!
//! * **fock**: `U = sqrt(θ/2)(a + a†)`, `V = -i sqrt(θ/2)(a - a†)`,
//!   `J = a†a + j0` on the levels `|0>, .., |N-1>`. Needs `θ > 0`.
//! * **planar**: the Bopp-shifted plane, `U = x - (θ/2) p_y`,
//!   `V = y + (θ/2) p_x`, `J = y p_x - x p_y`, on a product of two unit
//!   oscillators. Basis index `nx * Ny + ny`. Any `θ`.
//! * **circle**: Fourier modes on the circle, `J` only. Basis index `k` holds
//!   the `J` eigenvalue `k - M`, so `J = diag(-M, .., M)`.
//!
//! In the planar picture `J = -L_z`, so the mode `e^{i m φ}` carries
//! `J = -m` (see [`J_SIGN_ON_FOURIER_MODE`]).
//!
//! Everything here is `f64`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::algebra::{Monomial, OperatorPoly};
use crate::dyson::DysonParams;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Sign `s` with `J e^{i m φ} = s m e^{i m φ}`, fixed by the planar
/// representation.
pub const J_SIGN_ON_FOURIER_MODE: i64 = -1;

/// Relative gap below which eigenvalues at two truncations count as the same.
pub const CONVERGENCE_TOL: f64 = 1e-6;

/// Imaginary parts below this fraction of the spectral radius count as zero.
pub const REALITY_TOL: f64 = 1e-6;

/// Relative mismatch allowed between matched eigenvalues of `H` and `h`.
pub const ISOSPECTRAL_TOL: f64 = 1e-5;

/// Smallest generator matrix accepted by [`diagonalize_classify`].
pub const MIN_MATRIX_SIZE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    Fock,
    Planar,
    Circle,
}

impl std::fmt::Display for RepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RepKind::Fock => "fock",
            RepKind::Planar => "planar",
            RepKind::Circle => "circle",
        })
    }
}

impl std::str::FromStr for RepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fock" => Ok(RepKind::Fock),
            "planar" => Ok(RepKind::Planar),
            "circle" => Ok(RepKind::Circle),
            _ => Err(Error::InvalidRepresentation(format!("unknown representation kind `{s}`"))),
        }
    }
}

/// Generator matrices of one truncation.
#[derive(Clone, Debug)]
pub struct Representation {
    pub kind: RepKind,
    pub theta: f64,
    /// `[N]` for fock, `[Nx, Ny]` for planar, `[M]` for circle.
    pub dims: Vec<usize>,
    pub j0: f64,
    u: Option<CMatrix>,
    v: Option<CMatrix>,
    j: CMatrix,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Annihilation operator on `n` levels.
fn lowering(n: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = c((k as f64).sqrt(), 0.0);
    }
    a
}

fn position(n: usize) -> CMatrix {
    let a = lowering(n);
    (&a + a.adjoint()) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

fn momentum(n: usize) -> CMatrix {
    let a = lowering(n);
    (a.adjoint() - &a) * c(0.0, std::f64::consts::FRAC_1_SQRT_2)
}

/// Fock generators without the size check, so that tiny truncations can be
/// inspected.
pub fn fock_generators(theta: f64, n: usize, j0: f64) -> Result<(CMatrix, CMatrix, CMatrix)> {
    if theta.is_nan() || theta <= 0.0 || theta.is_infinite() {
        return Err(Error::InvalidRepresentation(format!("fock representation needs theta > 0, got {theta}")));
    }
    if n == 0 {
        return Err(Error::InvalidRepresentation("fock truncation must be positive".into()));
    }
    let a = lowering(n);
    let s = (theta / 2.0).sqrt();
    let u = (&a + a.adjoint()) * c(s, 0.0);
    let v = (&a - a.adjoint()) * c(0.0, -s);
    let j = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |k, _| c(k as f64 + j0, 0.0)));
    Ok((u, v, j))
}

fn planar_generators(theta: f64, nx: usize, ny: usize) -> (CMatrix, CMatrix, CMatrix) {
    let (ix, iy) = (CMatrix::identity(nx, nx), CMatrix::identity(ny, ny));
    let (x, px) = (position(nx), momentum(nx));
    let (y, py) = (position(ny), momentum(ny));
    let half = c(theta / 2.0, 0.0);
    let u = x.kronecker(&iy) - ix.kronecker(&py) * half;
    let v = ix.kronecker(&y) + px.kronecker(&iy) * half;
    let j = px.kronecker(&y) - x.kronecker(&py);
    (u, v, j)
}

fn circle_j(m: usize) -> CMatrix {
    let n = 2 * m + 1;
    CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |k, _| c(k as f64 - m as f64, 0.0)))
}

/// Builds the generator matrices. `dims` is `[N]`, `[Nx, Ny]` or `[M]`; each
/// entry must be at least 1. `j0` is only used by the fock kind.
pub fn make_representation(kind: RepKind, theta: f64, dims: &[usize], j0: f64) -> Result<Representation> {
    if !theta.is_finite() {
        return Err(Error::InvalidRepresentation(format!("theta = {theta}")));
    }
    let expected = if kind == RepKind::Planar { 2 } else { 1 };
    if dims.len() != expected || dims.contains(&0) {
        return Err(Error::InvalidRepresentation(format!("{kind} needs {expected} positive dims, got {dims:?}")));
    }
    let (u, v, j) = match kind {
        RepKind::Fock => {
            let (u, v, j) = fock_generators(theta, dims[0], j0)?;
            (Some(u), Some(v), j)
        }
        RepKind::Planar => {
            let (u, v, j) = planar_generators(theta, dims[0], dims[1]);
            (Some(u), Some(v), j)
        }
        RepKind::Circle => (None, None, circle_j(dims[0])),
    };
    let j0 = if kind == RepKind::Fock { j0 } else { 0.0 };
    Ok(Representation { kind, theta, dims: dims.to_vec(), j0, u, v, j })
}

impl Representation {
    pub fn fock(theta: f64, n: usize) -> Result<Self> {
        make_representation(RepKind::Fock, theta, &[n], 0.0)
    }

    pub fn planar(theta: f64, nx: usize, ny: usize) -> Result<Self> {
        make_representation(RepKind::Planar, theta, &[nx, ny], 0.0)
    }

    pub fn circle(theta: f64, m: usize) -> Result<Self> {
        make_representation(RepKind::Circle, theta, &[m], 0.0)
    }

    pub fn size(&self) -> usize {
        self.j.nrows()
    }

    pub fn u(&self) -> Option<&CMatrix> {
        self.u.as_ref()
    }

    pub fn v(&self) -> Option<&CMatrix> {
        self.v.as_ref()
    }

    pub fn j(&self) -> &CMatrix {
        &self.j
    }

    /// Same kind and `θ` with every dimension grown by `delta`.
    pub fn enlarged(&self, delta: usize) -> Result<Self> {
        let dims: Vec<usize> = self.dims.iter().map(|d| d + delta).collect();
        make_representation(self.kind, self.theta, &dims, self.j0)
    }

    /// Basis indices away from the truncation edge: the lower half of every
    /// oscillator (all modes for the circle, which is not truncated in a way
    /// that affects `J`).
    pub fn interior(&self) -> Vec<usize> {
        match self.kind {
            RepKind::Fock => (0..self.dims[0] / 2).collect(),
            RepKind::Planar => {
                let (nx, ny) = (self.dims[0], self.dims[1]);
                (0..nx / 2).flat_map(|a| (0..ny / 2).map(move |b| a * ny + b)).collect()
            }
            RepKind::Circle => (0..self.size()).collect(),
        }
    }
}

/// Matrix of a polynomial. Each monomial becomes the ordered product
/// `U^a V^b J^c` of truncated matrices.
pub fn poly_to_matrix(p: &OperatorPoly<f64>, rep: &Representation) -> Result<CMatrix> {
    if p.theta() != rep.theta {
        return Err(Error::ThetaMismatch { left: p.theta(), right: rep.theta });
    }
    let n = rep.size();
    let mut out = CMatrix::zeros(n, n);
    let pow = |m: &CMatrix, k: u32| {
        let mut acc = CMatrix::identity(n, n);
        for _ in 0..k {
            acc = &acc * m;
        }
        acc
    };
    for (mono, coeff) in p.terms() {
        let Monomial { u, v, j } = mono;
        let mut term = pow(&rep.j, j);
        if u + v > 0 {
            let (Some(um), Some(vm)) = (&rep.u, &rep.v) else {
                return Err(Error::UnsupportedMonomial(format!("{mono} has no {} matrix", rep.kind)));
            };
            term = pow(um, u) * pow(vm, v) * term;
        }
        out += term * coeff;
    }
    Ok(out)
}

fn sub_block(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest deviation from `[U,V] = iθ`, `[J,U] = -iV`, `[J,V] = iU` on the
/// interior block. Zero for the circle, which has no `U`, `V`.
pub fn commutator_fidelity(rep: &Representation) -> f64 {
    let (Some(u), Some(v)) = (&rep.u, &rep.v) else {
        return 0.0;
    };
    let j = &rep.j;
    let n = rep.size();
    let idx = rep.interior();
    let i = c(0.0, 1.0);
    let defects = [
        u * v - v * u - CMatrix::identity(n, n) * (i * rep.theta),
        j * u - u * j + v * i,
        j * v - v * j - u * i,
    ];
    defects.iter().map(|d| max_abs(&sub_block(d, &idx))).fold(0.0, f64::max)
}

/// Largest deviation of `U`, `V`, `J` from Hermiticity.
pub fn generator_hermiticity(rep: &Representation) -> f64 {
    [rep.u.as_ref(), rep.v.as_ref(), Some(&rep.j)]
        .into_iter()
        .flatten()
        .map(|m| max_abs(&(m - m.adjoint())))
        .fold(0.0, f64::max)
}

fn schur_diagonal(m: CMatrix) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    let (_, t) = Schur::try_new(m, f64::EPSILON, 200 * n.max(10))?.unpack();
    Some(t.diagonal().iter().copied().collect())
}

/// A fixed unitary, used to scramble matrices whose sparsity pattern stalls
/// the shifted QR iteration.
fn scrambler(n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |r, k| {
        let t = (r * 131 + k * 71 + 7) as f64;
        c((t * 0.618_033_988_749_895).fract() - 0.5, (t * 0.414_213_562_373_095).fract() - 0.5)
    });
    g.qr().q()
}

/// Eigenvalues of a complex matrix. Hermitian input goes through the
/// Hermitian eigensolver; everything else through the complex Schur form,
/// retried once after a fixed unitary similarity if the iteration stalls.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix has non-finite entries".into()));
    }
    if max_abs(&(m - m.adjoint())) <= 1e-14 * max_abs(m) {
        let h = (m + m.adjoint()) * c(0.5, 0.0);
        return Ok(h.symmetric_eigenvalues().iter().map(|l| c(*l, 0.0)).collect());
    }
    if let Some(v) = schur_diagonal(m.clone()) {
        return Ok(v);
    }
    let q = scrambler(m.nrows());
    schur_diagonal(q.adjoint() * m * &q).ok_or_else(|| Error::Eigensolver("Schur iteration did not converge".into()))
}

/// Greedy nearest-neighbour pairing: repeatedly takes the closest unused
/// pair. Returns `(index in a, index in b, distance)`.
pub fn match_nearest(a: &[Complex64], b: &[Complex64]) -> Vec<(usize, usize, f64)> {
    let mut pairs = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, k));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let (mut used_a, mut used_b) = (vec![false; a.len()], vec![false; b.len()]);
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    for (d, i, k) in pairs {
        if !used_a[i] && !used_b[k] {
            used_a[i] = true;
            used_b[k] = true;
            out.push((i, k, d));
        }
    }
    out.sort_by_key(|p| p.0);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumVerdict {
    AllReal,
    /// Number of converged eigenvalues with positive imaginary part.
    ConjugatePairs(usize),
    Inconclusive,
}

impl std::fmt::Display for SpectrumVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectrumVerdict::AllReal => f.write_str("all-real"),
            SpectrumVerdict::ConjugatePairs(n) => write!(f, "conjugate-pairs({n})"),
            SpectrumVerdict::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    /// Eigenvalues at the base truncation, sorted by real then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Parallel to `eigenvalues`: stable under the enlarged truncation.
    pub converged: Vec<bool>,
    pub verdict: SpectrumVerdict,
    pub diagnostic: Option<String>,
}

impl SpectrumReport {
    pub fn converged_values(&self) -> Vec<Complex64> {
        self.eigenvalues.iter().zip(&self.converged).filter(|(_, ok)| **ok).map(|(e, _)| *e).collect()
    }

    fn inconclusive(msg: String) -> Self {
        SpectrumReport { eigenvalues: vec![], converged: vec![], verdict: SpectrumVerdict::Inconclusive, diagnostic: Some(msg) }
    }
}

fn sort_spectrum(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Diagonalizes `p` at `rep` and at `rep` enlarged by `delta` (`None` means a
/// quarter of the first dimension), keeps the eigenvalues that agree between
/// the two, and classifies them. Eigensolver failures come back as
/// `Inconclusive` with a diagnostic; only an unrepresentable `p` is an error.
pub fn diagonalize_classify(p: &OperatorPoly<f64>, rep: &Representation, delta: Option<usize>) -> Result<SpectrumReport> {
    if rep.size() < MIN_MATRIX_SIZE {
        return Err(Error::InvalidRepresentation(format!(
            "matrix size {} below the minimum {MIN_MATRIX_SIZE}",
            rep.size()
        )));
    }
    let delta = delta.unwrap_or((rep.dims[0] / 4).max(1));
    let big = rep.enlarged(delta)?;
    let m_small = poly_to_matrix(p, rep)?;
    let m_big = poly_to_matrix(p, &big)?;
    let (mut small, large) = match (eigenvalues(&m_small), eigenvalues(&m_big)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Ok(SpectrumReport::inconclusive(e.to_string())),
    };
    sort_spectrum(&mut small);
    let mut converged = vec![false; small.len()];
    for (i, _, d) in match_nearest(&small, &large) {
        converged[i] = d < CONVERGENCE_TOL * (1.0 + small[i].norm());
    }
    let kept: Vec<Complex64> = small.iter().zip(&converged).filter(|(_, ok)| **ok).map(|(e, _)| *e).collect();
    let (verdict, diagnostic) = if kept.is_empty() {
        (SpectrumVerdict::Inconclusive, Some("no eigenvalue stable under enlargement".to_string()))
    } else {
        let radius = kept.iter().map(|e| e.norm()).fold(0.0, f64::max);
        let cut = REALITY_TOL * radius.max(1.0);
        let upper = kept.iter().filter(|e| e.im > cut).count();
        let lower = kept.iter().filter(|e| e.im < -cut).count();
        let diag = (upper != lower).then(|| format!("{upper} eigenvalues above the real axis but {lower} below"));
        (if upper + lower == 0 { SpectrumVerdict::AllReal } else { SpectrumVerdict::ConjugatePairs(upper.max(lower)) }, diag)
    };
    Ok(SpectrumReport { eigenvalues: small, converged, verdict, diagnostic })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsospectralReport {
    /// Matched converged eigenvalues `(of H, of h)`.
    pub pairs: Vec<(Complex64, Complex64)>,
    /// Largest `|E_H - E_h| / (1 + |E_H|)` over the pairs.
    pub max_mismatch: f64,
    pub pass: bool,
    pub verdict: SpectrumVerdict,
    pub diagnostic: Option<String>,
}

/// Fewest matched eigenvalues for an isospectrality verdict.
pub const MIN_MATCHED: usize = 3;

/// Compares converged spectra of `big_h` and `small_h`, each diagonalized with
/// its own convergence filter.
pub fn isospectral_check(big_h: &OperatorPoly<f64>, small_h: &OperatorPoly<f64>, rep: &Representation) -> Result<IsospectralReport> {
    if big_h.theta() != small_h.theta() {
        return Err(Error::ThetaMismatch { left: big_h.theta(), right: small_h.theta() });
    }
    let a = diagonalize_classify(big_h, rep, None)?;
    let b = diagonalize_classify(small_h, rep, None)?;
    let (ea, eb) = (a.converged_values(), b.converged_values());
    let pairs: Vec<(Complex64, Complex64)> = match_nearest(&ea, &eb).into_iter().map(|(i, k, _)| (ea[i], eb[k])).collect();
    let max_mismatch = pairs.iter().map(|(x, y)| (x - y).norm() / (1.0 + x.norm())).fold(0.0, f64::max);
    if pairs.len() < MIN_MATCHED {
        return Ok(IsospectralReport {
            pass: false,
            max_mismatch,
            verdict: SpectrumVerdict::Inconclusive,
            diagnostic: Some(format!("only {} converged eigenvalues matched", pairs.len())),
            pairs,
        });
    }
    Ok(IsospectralReport { pass: max_mismatch < ISOSPECTRAL_TOL, max_mismatch, verdict: a.verdict, diagnostic: None, pairs })
}

/// `exp(x)` of a Hermitian matrix through its eigendecomposition.
fn hermitian_exp(x: &CMatrix) -> CMatrix {
    let eig = x.clone().symmetric_eigen();
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| c(l.exp(), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// The truncated Dyson map `exp(λJ + ρU + τV)` and its inverse for real
/// parameters.
pub fn dyson_matrices(params: &DysonParams<f64>, rep: &Representation) -> Result<(CMatrix, CMatrix)> {
    if !params.is_real() {
        return Err(Error::BrokenPhase("matrix Dyson map needs real parameters".into()));
    }
    let a = poly_to_matrix(&params.exponent(), rep)?;
    let a = (&a + a.adjoint()) * c(0.5, 0.0);
    Ok((hermitian_exp(&a), hermitian_exp(&(-a))))
}

/// Largest entry of `η H η⁻¹ - h` on the interior block, relative to
/// `1 + max |h|` there.
pub fn dyson_consistency(params: &DysonParams<f64>, big_h: &OperatorPoly<f64>, small_h: &OperatorPoly<f64>, rep: &Representation) -> Result<f64> {
    let (eta, eta_inv) = dyson_matrices(params, rep)?;
    let lhs = &eta * poly_to_matrix(big_h, rep)? * &eta_inv;
    let rhs = poly_to_matrix(small_h, rep)?;
    let idx = rep.interior();
    let rhs_block = sub_block(&rhs, &idx);
    Ok(max_abs(&(sub_block(&lhs, &idx) - &rhs_block)) / (1.0 + max_abs(&rhs_block)))
}
