//! Operator algebra of the θ-deformed Euclidean algebra E2, Dyson maps for
//! PT-symmetric quadratic Hamiltonians built from it, phase classification
//! and matrix-representation oracles.
//!
//! The algebra, Dyson-map and closed-form model code is generic over the
//! coefficient scalar (`f32` or `f64`); the aliases below fix it to `f64`.
//! The eigensolver-based [`spectral`] module and the least-squares solver are
//! `f64` only.

pub mod algebra;
pub mod dyson;
pub mod error;
pub mod models;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use algebra::{Generator, Monomial, OperatorPoly, PTKind};
pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type Poly = OperatorPoly<f64>;
pub type Poly32 = OperatorPoly<f32>;
pub type Dyson = dyson::DysonParams<f64>;
pub type Dyson32 = dyson::DysonParams<f32>;
pub type Image = dyson::AdjointImage<f64>;
pub type Coeffs = models::HamiltonianCoeffs<f64>;
pub type Coeffs32 = models::HamiltonianCoeffs<f32>;
pub type Pt5Mu = models::Mu<f64>;
pub type Pt5Mu32 = models::Mu<f32>;
pub type Verdict = models::RegionVerdict<f64>;
pub type Toy = models::ToyModel<f64>;
pub type Complex = Cx<f64>;
