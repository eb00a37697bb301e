//! Homogeneous coordinates of complex projective 3-space.

use num_traits::Zero;

use crate::geom::Point3;
use crate::scalar::{Cplx, Real};

/// A point `x:y:z:w` of complex projective 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint4<T: Real = f64> {
    pub coords: [Cplx<T>; 4],
}

impl<T: Real> HPoint4<T> {
    /// `None` when all four coordinates vanish.
    pub fn new(coords: [Cplx<T>; 4]) -> Option<Self> {
        coords.iter().any(|c| !c.is_zero()).then_some(Self { coords })
    }

    pub fn real(x: T, y: T, z: T, w: T) -> Option<Self> {
        Self::new([x, y, z, w].map(|v| Cplx::new(v, T::zero())))
    }

    /// Finite point `(x, y, z, 1)`.
    pub fn affine(p: Point3<T>) -> Self {
        Self {
            coords: [p.x, p.y, p.z, T::one()].map(|v| Cplx::new(v, T::zero())),
        }
    }

    /// Point at infinity in direction `d`.
    pub fn direction(d: Point3<T>) -> Option<Self> {
        Self::real(d.x, d.y, d.z, T::zero())
    }

    pub fn norm(&self) -> T {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    /// Dehomogenizes a (numerically) real finite point.
    pub fn to_affine(&self, tol: T) -> Option<Point3<T>> {
        let n = self.norm();
        let w = self.coords[3];
        if w.norm() <= tol * n {
            return None;
        }
        let p = self.coords.map(|c| c / w);
        let imag = p[..3].iter().map(|c| c.im.abs()).fold(T::zero(), T::max);
        let scale = p[..3].iter().map(|c| c.re.abs()).fold(T::one(), T::max);
        (imag <= tol * scale).then(|| Point3::new(p[0].re, p[1].re, p[2].re))
    }

    pub fn conj(&self) -> Self {
        Self {
            coords: self.coords.map(|c| c.conj()),
        }
    }

    /// Sine of the angle between the two points as complex lines through
    /// the origin of ℂ⁴; zero exactly when they are projectively equal.
    pub fn projective_distance(&self, o: &Self) -> T {
        let (na, nb) = (self.norm(), o.norm());
        let a = self.coords.map(|c| c / na);
        let b = o.coords.map(|c| c / nb);
        let inner: Cplx<T> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.conj() * y)
            .fold(Cplx::zero(), |s, v| s + v);
        // norm of the component of b orthogonal to a
        (0..4)
            .map(|i| (b[i] - a[i] * inner).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn projectively_equal(&self, o: &Self, tol: T) -> bool {
        self.projective_distance(o) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_all_zero() {
        assert!(HPoint4::<f64>::real(0.0, 0.0, 0.0, 0.0).is_none());
    }

    #[test]
    fn projective_equality_up_to_complex_scale() {
        let a = HPoint4::affine(Point3::new(1.0, 2.0, 3.0));
        let s = Cplx::new(0.3, -2.0);
        let b = HPoint4::new(a.coords.map(|c| c * s)).unwrap();
        assert!(a.projectively_equal(&b, 1e-14));
        let c = HPoint4::affine(Point3::new(1.0, 2.0, 3.1));
        assert!(!a.projectively_equal(&c, 1e-6));
        assert_eq!(b.to_affine(1e-12).map(|p| (p - Point3::new(1.0, 2.0, 3.0)).norm() < 1e-14), Some(true));
    }
}
