//! The map `p ↦ 2p / (|p|² + 1)` onto the unit ball, its two inverse
//! branches, and the pullback of implicit surfaces along it.

use crate::circles::Circle3;
use crate::error::{Error, Result};
use crate::geom::{collinearity_residual, Point3};
use crate::implicit::ImplicitSurface;
use crate::poly::{MultiPoly, MAX_DEGREE};
use crate::scalar::Real;

/// Which of the two preimages to return. Off the unit sphere they have
/// radii `t` and `1/t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DarbouxBranch {
    InsideUnitBall,
    OutsideUnitBall,
}

/// Samples used by [`maps_circle_to_line`].
pub const LINE_TEST_SAMPLES: usize = 16;

pub fn darboux_map<T: Real>(p: Point3<T>) -> Point3<T> {
    p * (T::lit(2.0) / (p.norm_squared() + T::one()))
}

/// Preimage of `q` on the requested branch. Points of the unit sphere are
/// fixed by both branches.
pub fn darboux_inverse<T: Real>(q: Point3<T>, branch: DarbouxBranch) -> Result<Point3<T>> {
    let r = q.norm();
    let slack = T::epsilon() * T::lit(4.0);
    if r > T::one() + slack {
        return Err(Error::OutsideImage { norm: r.as_f64() });
    }
    if (r - T::one()).abs() <= slack {
        return Ok(q);
    }
    let root = (T::one() - r * r).sqrt();
    match branch {
        DarbouxBranch::InsideUnitBall => Ok(q / (T::one() + root)),
        DarbouxBranch::OutsideUnitBall => {
            if r == T::zero() {
                return Err(Error::NoFinitePreimage);
            }
            Ok(q * ((T::one() + root) / (r * r)))
        }
    }
}

/// Substitutes `2p/(|p|²+1)` and clears the denominator with exactly
/// `deg(s)` factors of `|p|² + 1`. The result may be non-reduced.
pub fn pullback_implicit<T: Real>(s: &ImplicitSurface<T>) -> Result<ImplicitSurface<T>> {
    let d = s.degree();
    if 2 * d > MAX_DEGREE {
        return Err(Error::DegreeCap {
            degree: 2 * d,
            cap: MAX_DEGREE,
        });
    }
    let one_plus_s = MultiPoly::from_terms([
        ([2, 0, 0], T::one()),
        ([0, 2, 0], T::one()),
        ([0, 0, 2], T::one()),
        ([0, 0, 0], T::one()),
    ])?;
    let powers: Vec<MultiPoly<T>> = (0..=d).map(|k| one_plus_s.pow(k)).collect::<Result<_>>()?;
    let mut out = MultiPoly::zero();
    for (e, c) in s.poly().terms() {
        let m = e[0] + e[1] + e[2];
        let scale = c * T::lit(2.0).powi(m as i32);
        let term = MultiPoly::monomial(scale, e).mul(&powers[(d - m) as usize])?;
        out = out + term;
    }
    let mut pulled = ImplicitSurface::new(out)?;
    pulled.name = s.name.as_ref().map(|n| format!("{n} (pullback)"));
    Ok(pulled)
}

/// Whether the circle meets the unit sphere at right angles: its plane
/// passes through the origin and `|center|² = radius² + 1`, both within
/// `rel_eps`.
pub fn orthogonal_to_unit_sphere<T: Real>(c: &Circle3<T>, rel_eps: T) -> bool {
    let ctr = c.center();
    let r2 = c.radius() * c.radius();
    let scale = T::one() + r2;
    let power_ok = (ctr.norm_squared() - r2 - T::one()).abs() <= rel_eps * scale;
    let plane_ok = c.normal().dot(ctr).abs() <= rel_eps * scale.sqrt();
    power_ok && plane_ok
}

/// Whether the images of [`LINE_TEST_SAMPLES`] circle samples are
/// collinear within `tol` relative to their extent.
pub fn maps_circle_to_line<T: Real>(c: &Circle3<T>, tol: T) -> bool {
    let imgs: Vec<Point3<T>> = c
        .samples(LINE_TEST_SAMPLES, T::zero())
        .into_iter()
        .map(darboux_map)
        .collect();
    collinearity_residual(&imgs) <= tol
}
