//! Scalar abstraction shared by the algebra, the Dyson map and the closed-form
//! PT solvers. The numeric oracles (dense eigensolvers, least squares) are
//! written against `f64` directly.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar usable as the coefficient field of an [`OperatorPoly`](crate::OperatorPoly).
pub trait Real:
    'static
    + Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
{
    /// Absolute magnitude below which stored coefficients are dropped.
    fn prune_tol() -> Self;

    /// Converts an `f64` literal. Panics only if the target type cannot
    /// represent a finite `f64`, which does not happen for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal not representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn prune_tol() -> Self {
        1e-14
    }
}

impl Real for f32 {
    #[inline]
    fn prune_tol() -> Self {
        1e-6
    }
}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

#[cfg(test)]
pub(crate) fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn imag_unit<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}
