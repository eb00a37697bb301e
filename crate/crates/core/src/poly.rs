//! Sparse multivariate polynomials in `x, y, z` and their homogenization.
//!
//! Bivariate and univariate polynomials reuse [`MultiPoly`]: a restriction
//! to a plane chart stores `u, v` in the `x, y` slots, a restriction to a
//! line stores `t` in the `x` slot.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::{Line3, Plane, PlaneChart, Point3, Vec3};
use crate::projective::HPoint4;
use crate::scalar::{Cplx, Real};

/// Largest total degree a [`MultiPoly`] may have.
pub const MAX_DEGREE: u32 = 8;

/// Exponent triple `(i, j, k)` of the monomial `xⁱ yʲ zᵏ`.
pub type Exponent = [u32; 3];

/// Real polynomial in `x, y, z`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MultiPoly<T: Real = f64> {
    terms: BTreeMap<Exponent, T>,
}

fn total(e: &Exponent) -> u32 {
    e[0] + e[1] + e[2]
}

impl<T: Real> MultiPoly<T> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), [1, 0, 0])
    }

    pub fn y() -> Self {
        Self::monomial(T::one(), [0, 1, 0])
    }

    pub fn z() -> Self {
        Self::monomial(T::one(), [0, 0, 1])
    }

    /// Single term; panics above [`MAX_DEGREE`].
    pub fn monomial(c: T, e: Exponent) -> Self {
        assert!(total(&e) <= MAX_DEGREE, "monomial degree above cap");
        let mut terms = BTreeMap::new();
        if c != T::zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// Sums the given terms, merging repeated exponents.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, T)>) -> Result<Self> {
        let mut p = Self::zero();
        for (e, c) in terms {
            let d = total(&e);
            if d > MAX_DEGREE {
                return Err(Error::DegreeCap {
                    degree: d,
                    cap: MAX_DEGREE,
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: T) {
        if c == T::zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(T::zero);
        *slot += c;
        if *slot == T::zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, T)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn coefficient(&self, e: Exponent) -> T {
        self.terms.get(&e).copied().unwrap_or_else(T::zero)
    }

    /// Total degree; zero for constants and for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(total).max().unwrap_or(0)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> T {
        self.terms.values().map(|&c| c * c).sum::<T>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.terms.values().map(|c| c.abs()).fold(T::zero(), T::max)
    }

    pub fn scale(&self, s: T) -> Self {
        if s == T::zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, &c)| (*e, c * s)).collect(),
        }
        .pruned()
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| *c != T::zero());
        self
    }

    /// Drops coefficients with magnitude at most `threshold`.
    pub fn truncated(&self, threshold: T) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() > threshold)
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }

    /// The part of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) == k)
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }

    /// The part of total degree at most `k`.
    pub fn truncate_degree(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) <= k)
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let degree = self.degree() + o.degree();
        if !self.is_zero() && !o.is_zero() && degree > MAX_DEGREE {
            return Err(Error::DegreeCap {
                degree,
                cap: MAX_DEGREE,
            });
        }
        let mut out = Self::zero();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &o.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::constant(T::one());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn powers(v: T, n: u32) -> Vec<T> {
        let mut out = Vec::with_capacity(n as usize + 1);
        let mut acc = T::one();
        for _ in 0..=n {
            out.push(acc);
            acc *= v;
        }
        out
    }

    pub fn eval(&self, p: Point3<T>) -> T {
        let d = self.degree();
        let (px, py, pz) = (Self::powers(p.x, d), Self::powers(p.y, d), Self::powers(p.z, d));
        self.terms
            .iter()
            .map(|(e, &c)| c * px[e[0] as usize] * py[e[1] as usize] * pz[e[2] as usize])
            .sum()
    }

    /// `Σ |c|·|monomial(p)|`, the natural size of `eval` at `p`; rounding
    /// error of `eval` is a small multiple of `ε` times this.
    pub fn eval_magnitude(&self, p: Point3<T>) -> T {
        let d = self.degree();
        let a = p.map(T::abs);
        let (px, py, pz) = (Self::powers(a.x, d), Self::powers(a.y, d), Self::powers(a.z, d));
        self.terms
            .iter()
            .map(|(e, &c)| c.abs() * px[e[0] as usize] * py[e[1] as usize] * pz[e[2] as usize])
            .sum()
    }

    /// Evaluation at `(u, v, 0)`, for bivariate chart polynomials.
    pub fn eval2(&self, u: T, v: T) -> T {
        self.eval(Point3::new(u, v, T::zero()))
    }

    /// Partial derivative along axis 0, 1 or 2.
    pub fn partial(&self, axis: usize) -> Self {
        let mut out = Self::zero();
        for (e, &c) in &self.terms {
            if e[axis] == 0 {
                continue;
            }
            let mut f = *e;
            f[axis] -= 1;
            out.add_term(f, c * T::from_u32(e[axis]).unwrap());
        }
        out
    }

    pub fn gradient(&self, p: Point3<T>) -> Vec3<T> {
        Vec3::new(
            self.partial(0).eval(p),
            self.partial(1).eval(p),
            self.partial(2).eval(p),
        )
    }

    /// Substitutes `x, y, z` by the given polynomials.
    pub fn compose(&self, subs: &[MultiPoly<T>; 3]) -> Result<Self> {
        let d = self.degree();
        let mut pw: Vec<Vec<MultiPoly<T>>> = Vec::with_capacity(3);
        for s in subs {
            let mut row = vec![Self::constant(T::one())];
            for k in 1..=d {
                let next = row[k as usize - 1].mul(s)?;
                row.push(next);
            }
            pw.push(row);
        }
        let mut out = Self::zero();
        for (e, &c) in &self.terms {
            let m = pw[0][e[0] as usize]
                .mul(&pw[1][e[1] as usize])?
                .mul(&pw[2][e[2] as usize])?;
            for (f, cm) in m.terms {
                out.add_term(f, c * cm);
            }
        }
        Ok(out)
    }

    /// Composition with an affine map `p ↦ origin + A·p` where `A` has the
    /// given columns.
    pub fn compose_affine(&self, origin: Point3<T>, cols: [Vec3<T>; 3]) -> Self {
        let lin = |i: usize| {
            let mut s = Self::constant(origin[i]);
            for (k, c) in cols.iter().enumerate() {
                let mut e = [0, 0, 0];
                e[k] = 1;
                s = s + Self::monomial(c[i], e);
            }
            s
        };
        self.compose(&[lin(0), lin(1), lin(2)])
            .expect("affine substitution preserves degree")
    }

    /// Pulls the polynomial back along the plane's orthonormal chart. The
    /// result is bivariate in `(u, v)`, stored in the `x, y` slots.
    pub fn restrict_to_plane(&self, plane: &Plane<T>) -> (Self, PlaneChart<T>) {
        let ch = plane.chart();
        let r = self.compose_affine(ch.origin, [ch.e1, ch.e2, Vec3::zero()]);
        (r, ch)
    }

    /// Coefficients (ascending in `t`) of the polynomial along `point + t·dir`.
    pub fn restrict_to_line(&self, line: &Line3<T>) -> Vec<T> {
        let r = self.compose_affine(line.point, [line.dir, Vec3::zero(), Vec3::zero()]);
        let mut coeffs = vec![T::zero(); self.degree() as usize + 1];
        for (e, c) in r.terms() {
            coeffs[e[0] as usize] = c;
        }
        coeffs
    }

    /// Degree-`deg(p)` form in `x, y, z, w` that reduces to `p` at `w = 1`.
    pub fn homogenize(&self) -> HomogeneousPoly<T> {
        let d = self.degree();
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| ([e[0], e[1], e[2], d - total(e)], Cplx::new(c, T::zero())))
            .collect();
        HomogeneousPoly { degree: d, terms }
    }

    pub fn cast<U: Real>(&self) -> MultiPoly<U> {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, U::lit(c.as_f64())))
                .filter(|(_, c)| *c != U::zero())
                .collect(),
        }
    }
}

impl<T: Real> Add for MultiPoly<T> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (e, c) in o.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<T: Real> Add for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn add(self, o: Self) -> MultiPoly<T> {
        self.clone() + o.clone()
    }
}

impl<T: Real> Neg for MultiPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<T: Real> Sub for MultiPoly<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Sub for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn sub(self, o: Self) -> MultiPoly<T> {
        self.clone() - o.clone()
    }
}

impl<T: Real> fmt::Display for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            let (sign, mag) = if c < T::zero() { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mono: Vec<String> = ["x", "y", "z"]
                .iter()
                .zip(e)
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == T::one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Homogeneous form in `x, y, z, w` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly<T: Real = f64> {
    degree: u32,
    terms: BTreeMap<[u32; 4], Cplx<T>>,
}

impl<T: Real> HomogeneousPoly<T> {
    /// Builds a form; every exponent must have total degree `degree`.
    pub fn new(degree: u32, terms: impl IntoIterator<Item = ([u32; 4], Cplx<T>)>) -> Result<Self> {
        let mut map: BTreeMap<[u32; 4], Cplx<T>> = BTreeMap::new();
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::Invalid(format!("exponent {e:?} is not of degree {degree}")));
            }
            let slot = map.entry(e).or_insert_with(Cplx::zero);
            *slot = *slot + c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { degree, terms: map })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u32; 4], Cplx<T>)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn eval(&self, p: &HPoint4<T>) -> Cplx<T> {
        self.terms
            .iter()
            .map(|(e, &c)| {
                (0..4).fold(c, |acc, i| acc * p.coords[i].powu(e[i]))
            })
            .fold(Cplx::zero(), |s, v| s + v)
    }

    /// `Σ |c|·|monomial(p)|`.
    pub fn eval_magnitude(&self, p: &HPoint4<T>) -> T {
        self.terms
            .iter()
            .map(|(e, &c)| (0..4).fold(c.norm(), |acc, i| acc * p.coords[i].norm().powi(e[i] as i32)))
            .sum()
    }

    /// `|F(p)| / Σ|c||monomial(p)|`: scale-free vanishing residual.
    pub fn relative_residual(&self, p: &HPoint4<T>) -> T {
        let m = self.eval_magnitude(p);
        if m == T::zero() {
            T::zero()
        } else {
            self.eval(p).norm() / m
        }
    }

    /// Sets `w = 1`; fails if any coefficient has a nonzero imaginary part.
    pub fn dehomogenize(&self) -> Result<MultiPoly<T>> {
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            if c.im != T::zero() {
                return Err(Error::Invalid("form has complex coefficients".into()));
            }
            out.add_term([e[0], e[1], e[2]], c.re);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere() -> MultiPoly {
        MultiPoly::from_terms([([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0), ([0, 0, 0], -1.0)])
            .unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(sphere().eval(Point3::new(1.0, 0.0, 0.0)), 0.0);
        assert_eq!(MultiPoly::<f64>::zero().eval(Point3::new(3.0, -1.0, 2.0)), 0.0);
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(sphere().gradient(Point3::new(1.0, 0.0, 0.0)), Vec3::new(2.0, 0.0, 0.0));
        assert_eq!(
            MultiPoly::constant(4.0).gradient(Point3::new(1.0, 2.0, 3.0)),
            Vec3::zero()
        );
    }

    #[test]
    fn no_zero_coefficients_after_cancellation() {
        let p = MultiPoly::<f64>::x() + MultiPoly::y();
        let q = p.clone() - MultiPoly::x();
        assert_eq!(q.len(), 1);
        assert!((p.clone() - p).is_zero());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let x5 = MultiPoly::<f64>::monomial(1.0, [5, 0, 0]);
        assert!(matches!(x5.mul(&x5), Err(Error::DegreeCap { degree: 10, cap: 8 })));
        assert!(MultiPoly::<f64>::from_terms([([3, 3, 3], 1.0)]).is_err());
    }

    #[test]
    fn restrict_sphere_to_equator_plane() {
        let (r, _) = sphere().restrict_to_plane(&Plane::axis(2, 0.0));
        let expect = MultiPoly::from_terms([([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 0], -1.0)]).unwrap();
        assert_eq!(r, expect);
        let (zr, _) = MultiPoly::<f64>::z().restrict_to_plane(&Plane::axis(2, 0.0));
        assert!(zr.is_zero());
    }

    #[test]
    fn homogenize_examples() {
        let p = MultiPoly::from_terms([([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 0], -1.0)]).unwrap();
        let h = p.homogenize();
        let terms: Vec<_> = h.terms().map(|(e, c)| (e, c.re)).collect();
        assert_eq!(terms, vec![([0, 0, 0, 2], -1.0), ([0, 2, 0, 0], 1.0), ([2, 0, 0, 0], 1.0)]);
        let hx = MultiPoly::<f64>::x().homogenize();
        assert_eq!(hx.terms().collect::<Vec<_>>(), vec![([1, 0, 0, 0], Cplx::new(1.0, 0.0))]);
        assert_eq!(h.dehomogenize().unwrap(), p);
    }

    #[test]
    fn restrict_to_line_coefficients() {
        // x² + y² − z² − 1 along (1, t, t) vanishes identically
        let h = MultiPoly::from_terms([([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], -1.0), ([0, 0, 0], -1.0)])
            .unwrap();
        let h: MultiPoly = h;
        let c = h.restrict_to_line(&Line3::new(Point3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 1.0)));
        assert!(c.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(sphere().to_string(), "x^2 + y^2 + z^2 - 1");
    }
}
