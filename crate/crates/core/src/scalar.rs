//! Scalar abstraction shared by every geometric routine.
//!
//! All math in this crate is written against [`Real`], a thin bundle of
//! `num-traits` bounds. `f64` is the working precision for the acceptance
//! checks; `f32` compiles and runs with loosened default tolerances.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Sum
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Send
        + Sync
        + 'static
{
}

/// Complex scalar over a [`Real`] component type.
pub type Cplx<T> = Complex<T>;

#[inline]
#[allow(dead_code)]
pub(crate) fn lit<T: Real>(v: f64) -> T {
    T::lit(v)
}

/// Residual thresholds standing in for exact containment statements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T: Real = f64> {
    /// Absolute residual bound.
    pub abs_eps: T,
    /// Relative residual bound.
    pub rel_eps: T,
    /// Relative eigenvalue cutoff used for rank decisions.
    pub rank_eps: T,
}

impl<T: Real> Tolerance<T> {
    /// Builds a tolerance, rejecting non-positive or non-finite entries.
    pub fn new(abs_eps: T, rel_eps: T, rank_eps: T) -> Option<Self> {
        let ok = |v: T| v.is_finite() && v > T::zero();
        (ok(abs_eps) && ok(rel_eps) && ok(rank_eps)).then_some(Self {
            abs_eps,
            rel_eps,
            rank_eps,
        })
    }
}

impl<T: Real> Default for Tolerance<T> {
    /// `1e-9 / 1e-7 / 1e-8` in double precision. For narrower types each
    /// bound is raised to a fixed multiple of machine epsilon.
    fn default() -> Self {
        let eps = T::epsilon();
        let floor = |v: f64, m: f64| T::lit(v).max(eps * T::lit(m));
        Self {
            abs_eps: floor(1e-9, 1e3),
            rel_eps: floor(1e-7, 1e2),
            rank_eps: floor(1e-8, 1e2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerance_f64() {
        let t = Tolerance::<f64>::default();
        assert_eq!(t.abs_eps, 1e-9);
        assert_eq!(t.rel_eps, 1e-7);
        assert_eq!(t.rank_eps, 1e-8);
    }

    #[test]
    fn default_tolerance_f32_is_above_epsilon() {
        let t = Tolerance::<f32>::default();
        assert!(t.abs_eps > f32::EPSILON);
        assert!(t.rel_eps > f32::EPSILON);
    }

    #[test]
    fn tolerance_rejects_nonpositive() {
        assert!(Tolerance::new(0.0, 1e-7, 1e-8).is_none());
        assert!(Tolerance::new(1e-9, -1.0, 1e-8).is_none());
        assert!(Tolerance::new(1e-9, 1e-7, f64::NAN).is_none());
        assert!(Tolerance::new(1e-9, 1e-7, 1e-8).is_some());
    }
}
