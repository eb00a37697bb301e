//! Implicit surfaces: quadric classification, cyclide recognition, plane
//! sections and curve containment.

use crate::circles::Circle3;
use crate::error::{Error, Result};
use crate::geom::{centroid, extent, Line3, Plane, Point3, Vec3};
use crate::linalg::{lstsq, svd, symmetric_eigen, Matrix};
use crate::poly::{Exponent, MultiPoly};
use crate::scalar::{Real, Tolerance};

/// Zero set of a nonzero polynomial of degree at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitSurface<T: Real = f64> {
    poly: MultiPoly<T>,
    pub name: Option<String>,
}

impl<T: Real> ImplicitSurface<T> {
    pub fn new(poly: MultiPoly<T>) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if poly.degree() == 0 {
            return Err(Error::Invalid("constant polynomial has no zero set".into()));
        }
        Ok(Self { poly, name: None })
    }

    pub fn named(poly: MultiPoly<T>, name: impl Into<String>) -> Result<Self> {
        let mut s = Self::new(poly)?;
        s.name = Some(name.into());
        Ok(s)
    }

    pub fn poly(&self) -> &MultiPoly<T> {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn eval(&self, p: Point3<T>) -> T {
        self.poly.eval(p)
    }

    /// `|f(p)|` relative to the size of its terms at `p`.
    pub fn relative_residual(&self, p: Point3<T>) -> T {
        let m = self.poly.eval_magnitude(p);
        if m == T::zero() {
            T::zero()
        } else {
            self.poly.eval(p).abs() / m
        }
    }
}

/// Real affine quadric types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadricClass {
    Plane,
    OneSheetedHyperboloid,
    QuadraticCone,
    EllipticCylinder,
    Sphere,
    Ellipsoid,
    TwoSheetedHyperboloid,
    HyperbolicParaboloid,
    EllipticParaboloid,
    HyperbolicCylinder,
    ParabolicCylinder,
    DegeneratePair,
    Other,
}

/// Classification with the eigen-data it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricReport<T: Real = f64> {
    pub class: QuadricClass,
    /// Eigenvalues of the quadratic part, ascending, after normalization.
    pub quadratic_eigenvalues: Vec<T>,
    /// Eigenvalues of the 4×4 homogeneous matrix, ascending.
    pub homogeneous_eigenvalues: Vec<T>,
    /// Set when a rank decision fell into the ambiguous band.
    pub diagnostic: Option<String>,
}

fn quadric_matrix<T: Real>(p: &MultiPoly<T>) -> Matrix<T> {
    let half = T::lit(0.5);
    let mut m = Matrix::zeros(4, 4);
    for (e, c) in p.terms() {
        let idx: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize))
            .collect();
        match idx.as_slice() {
            [i, j] if i == j => m[(*i, *i)] += c,
            [i, j] => {
                m[(*i, *j)] += c * half;
                m[(*j, *i)] += c * half;
            }
            [i] => {
                m[(*i, 3)] += c * half;
                m[(3, *i)] += c * half;
            }
            [] => m[(3, 3)] += c,
            _ => unreachable!("degree checked"),
        }
    }
    m
}

/// Counts `(positive, negative, ambiguous)` eigenvalues. Values at most
/// `rank_eps·max` are zero; values between that and `100·rank_eps·max` are
/// ambiguous.
fn signature<T: Real>(vals: &[T], rank_eps: T) -> (usize, usize, usize) {
    let max = vals.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let zero = rank_eps * max;
    let gray = zero * T::lit(100.0);
    let mut out = (0, 0, 0);
    for &v in vals {
        if v.abs() <= zero {
            continue;
        }
        if v.abs() <= gray {
            out.2 += 1;
        }
        if v > T::zero() {
            out.0 += 1;
        } else {
            out.1 += 1;
        }
    }
    out
}

/// Classifies a surface of degree at most two.
pub fn classify_quadric_report<T: Real>(s: &ImplicitSurface<T>, tol: &Tolerance<T>) -> Result<QuadricReport<T>> {
    let deg = s.degree();
    if deg > 2 {
        return Err(Error::NotAQuadric(deg));
    }
    let mut q = quadric_matrix(s.poly());
    let scale = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .fold(T::zero(), |m, (i, j)| m.max(q[(i, j)].abs()));
    for i in 0..4 {
        for j in 0..4 {
            q[(i, j)] /= scale;
        }
    }
    let mut a = Matrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            a[(i, j)] = q[(i, j)];
        }
    }
    let mut av = symmetric_eigen(&a).values;
    let mut qv = symmetric_eigen(&q).values;
    let (mut pa, mut na, ga) = signature(&av, tol.rank_eps);
    if na > pa {
        for v in av.iter_mut().chain(qv.iter_mut()) {
            *v = -*v;
        }
        av.reverse();
        qv.reverse();
        std::mem::swap(&mut pa, &mut na);
    }
    // rank of the 4×4 matrix is judged against the largest entry overall so
    // that a tiny quadratic part does not inflate it
    let qmax = qv.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let (pq, nq, gq) = signature(&qv, tol.rank_eps);
    let mut diagnostic = None;
    if ga + gq > 0 {
        diagnostic = Some(format!(
            "eigenvalue within 100·rank_eps of the cutoff (quadratic {:?}, homogeneous {:?})",
            av.iter().map(|v| v.as_f64()).collect::<Vec<_>>(),
            qv.iter().map(|v| v.as_f64()).collect::<Vec<_>>()
        ));
    }
    let r3 = pa + na;
    let r4 = pq + nq;
    use QuadricClass::*;
    let class = if diagnostic.is_some() || qmax == T::zero() {
        Other
    } else {
        match (r3, r4, (pa, na), (pq, nq)) {
            (0, _, _, _) => Plane,
            (3, 4, (3, 0), (3, 1)) => {
                let spread = av[2] - av[0];
                if spread <= tol.rel_eps * av[2].abs() {
                    Sphere
                } else {
                    Ellipsoid
                }
            }
            (3, 4, (2, 1), (2, 2)) => OneSheetedHyperboloid,
            (3, 4, (2, 1), (3, 1)) => TwoSheetedHyperboloid,
            (3, 3, (2, 1), _) => QuadraticCone,
            (2, 4, (2, 0), _) => EllipticParaboloid,
            (2, 4, (1, 1), _) => HyperbolicParaboloid,
            (2, 3, (2, 0), (2, 1)) => EllipticCylinder,
            (2, 3, (1, 1), _) => HyperbolicCylinder,
            (2, 2, (1, 1), _) => DegeneratePair,
            (1, 3, _, _) => ParabolicCylinder,
            (1, 2, _, (1, 1)) => DegeneratePair,
            (1, 1, _, _) => DegeneratePair,
            _ => Other,
        }
    };
    Ok(QuadricReport {
        class,
        quadratic_eigenvalues: av,
        homogeneous_eigenvalues: qv,
        diagnostic,
    })
}

pub fn classify_quadric<T: Real>(s: &ImplicitSurface<T>, tol: &Tolerance<T>) -> Result<QuadricClass> {
    classify_quadric_report(s, tol).map(|r| r.class)
}

/// Coefficients of `a·S² + S·(bx + cy + dz) + Q`, where `S` is
/// `x² + y² + z²` (Darboux) or `x² + y²` (isotropic).
#[derive(Debug, Clone, PartialEq)]
pub struct CyclideForm<T: Real = f64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub q: MultiPoly<T>,
    pub isotropic: bool,
}

impl<T: Real> CyclideForm<T> {
    fn s_poly(isotropic: bool) -> MultiPoly<T> {
        let mut s = MultiPoly::monomial(T::one(), [2, 0, 0]) + MultiPoly::monomial(T::one(), [0, 2, 0]);
        if !isotropic {
            s = s + MultiPoly::monomial(T::one(), [0, 0, 2]);
        }
        s
    }

    /// The polynomial the form encodes.
    pub fn reassemble(&self) -> MultiPoly<T> {
        let s = Self::s_poly(self.isotropic);
        let lin = MultiPoly::monomial(self.b, [1, 0, 0])
            + MultiPoly::monomial(self.c, [0, 1, 0])
            + MultiPoly::monomial(self.d, [0, 0, 1]);
        let quartic = s.mul(&s).expect("degree 4").scale(self.a);
        let cubic = s.mul(&lin).expect("degree 3");
        quartic + cubic + self.q.clone()
    }
}

fn dot<T: Real>(p: &MultiPoly<T>, q: &MultiPoly<T>) -> T {
    p.terms().map(|(e, c)| c * q.coefficient(e)).sum()
}

fn decompose<T: Real>(s: &ImplicitSurface<T>, tol: &Tolerance<T>, isotropic: bool) -> Result<Option<CyclideForm<T>>> {
    let deg = s.degree();
    if deg > 4 {
        return Err(Error::NotACyclideCandidate(deg));
    }
    let p = s.poly();
    let bound = tol.rel_eps * p.coeff_norm();
    let sp = CyclideForm::<T>::s_poly(isotropic);
    let s2 = sp.mul(&sp).expect("degree 4");
    let p4 = p.homogeneous_part(4);
    let a = dot(&p4, &s2) / dot(&s2, &s2);
    if (p4 - s2.scale(a)).coeff_norm() > bound {
        return Ok(None);
    }
    let p3 = p.homogeneous_part(3);
    let basis: Vec<MultiPoly<T>> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        .into_iter()
        .map(|e: Exponent| sp.mul(&MultiPoly::monomial(T::one(), e)).expect("degree 3"))
        .collect();
    // least squares over the cubic monomials
    let monos: Vec<Exponent> = cubic_monomials();
    let mut m = Matrix::zeros(monos.len(), 3);
    let mut rhs = Vec::with_capacity(monos.len());
    for (i, e) in monos.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            m[(i, j)] = b.coefficient(*e);
        }
        rhs.push(p3.coefficient(*e));
    }
    let sol = lstsq(&m, &rhs, T::epsilon() * T::lit(1e3)).expect("independent basis");
    let fitted = basis
        .iter()
        .zip(&sol)
        .fold(MultiPoly::zero(), |acc, (b, &k)| acc + b.scale(k));
    if (p3 - fitted).coeff_norm() > bound {
        return Ok(None);
    }
    let clean = |v: T| if v.abs() <= bound { T::zero() } else { v };
    Ok(Some(CyclideForm {
        a: clean(a),
        b: clean(sol[0]),
        c: clean(sol[1]),
        d: clean(sol[2]),
        q: p.truncate_degree(2),
        isotropic,
    }))
}

fn cubic_monomials() -> Vec<Exponent> {
    let mut out = Vec::new();
    for i in 0..=3u32 {
        for j in 0..=(3 - i) {
            out.push([i, j, 3 - i - j]);
        }
    }
    out
}

/// Matches the surface against `a(x²+y²+z²)² + (x²+y²+z²)(bx+cy+dz) + Q`.
pub fn is_darboux_cyclide<T: Real>(s: &ImplicitSurface<T>, tol: &Tolerance<T>) -> Result<Option<CyclideForm<T>>> {
    decompose(s, tol, false)
}

/// Matches the surface against `a(x²+y²)² + (x²+y²)(bx+cy+dz) + Q`.
pub fn is_isotropic_cyclide<T: Real>(s: &ImplicitSurface<T>, tol: &Tolerance<T>) -> Result<Option<CyclideForm<T>>> {
    decompose(s, tol, true)
}

/// Chart restriction, or [`Error::PlaneInSurface`] when it vanishes.
pub(crate) fn restrict_checked<T: Real>(
    s: &ImplicitSurface<T>,
    pl: &Plane<T>,
    tol: &Tolerance<T>,
) -> Result<(MultiPoly<T>, crate::geom::PlaneChart<T>)> {
    let (r, chart) = s.poly().restrict_to_plane(pl);
    let size = s.poly().coeff_norm() * (T::one() + pl.offset().abs()).powi(s.degree() as i32);
    if r.coeff_norm() <= tol.rel_eps * size {
        return Err(Error::PlaneInSurface);
    }
    // sampled cross-check on a small grid of the chart
    let grid = [-1.0, -0.37, 0.21, 0.8].map(T::lit);
    let vanishes = grid.iter().all(|&u| {
        grid.iter().all(|&v| {
            let p = chart.point(u, v);
            s.poly().eval(p).abs() <= tol.rel_eps * s.poly().eval_magnitude(p).max(T::min_positive_value())
        })
    });
    if vanishes {
        return Err(Error::PlaneInSurface);
    }
    Ok((r, chart))
}

/// Degree of the plane section after discarding negligible coefficients.
pub fn plane_section_degree<T: Real>(s: &ImplicitSurface<T>, pl: &Plane<T>, tol: &Tolerance<T>) -> Result<u32> {
    let (r, _) = restrict_checked(s, pl, tol)?;
    Ok(r.truncated(tol.rel_eps * r.coeff_norm()).degree())
}

/// If the real section is one closed branch lying on a circle within `tol`
/// (relative to the radius), returns that circle.
pub fn section_is_single_circle<T: Real>(
    s: &ImplicitSurface<T>,
    pl: &Plane<T>,
    tol: &Tolerance<T>,
    circle_tol: T,
) -> Result<Option<Circle3<T>>> {
    let sec = crate::section::plane_section(s, pl, tol)?;
    if sec.branches.len() != 1 || !sec.branches[0].closed {
        return Ok(None);
    }
    let pts = &sec.branches[0].points;
    let fit = match crate::circles::fit_circle(pts) {
        Ok(f) => f,
        Err(_) => return Ok(None),
    };
    let r = fit.circle.radius();
    Ok(pts
        .iter()
        .all(|&p| fit.circle.distance_to(p) <= circle_tol * r)
        .then_some(fit.circle))
}

/// Whether the line lies on the surface: every coefficient of the
/// restriction to the line is at most `tol` relative to the surface's
/// coefficients.
pub fn contains_line<T: Real>(s: &ImplicitSurface<T>, line: &Line3<T>, tol: T) -> bool {
    let Some(dir) = line.dir.normalized() else {
        return false;
    };
    let foot = line.point - dir * (line.point.dot(dir));
    let coeffs = s.poly().restrict_to_line(&Line3::new(foot, dir));
    let scale = s.poly().coeff_norm() * (T::one() + foot.norm()).powi(s.degree() as i32);
    coeffs.iter().all(|c| c.abs() <= tol * scale)
}

/// [`contains_circle_at`] starting at parameter zero.
pub fn contains_circle<T: Real>(s: &ImplicitSurface<T>, c: &Circle3<T>, tol: T) -> bool {
    contains_circle_at(s, c, tol, T::zero())
}

/// Whether the circle lies on the surface, judged from `2·deg + 1`
/// equispaced samples starting at `phase`. A trigonometric polynomial of
/// degree `deg` vanishing at that many points vanishes identically.
pub fn contains_circle_at<T: Real>(s: &ImplicitSurface<T>, c: &Circle3<T>, tol: T, phase: T) -> bool {
    let n = 2 * s.degree() as usize + 1;
    c.samples(n, phase).into_iter().all(|p| s.relative_residual(p) <= tol)
}

/// Monomial exponents of total degree at most `d`, graded.
pub fn monomials(d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for k in 0..=d {
        for i in (0..=k).rev() {
            for j in (0..=(k - i)).rev() {
                out.push([i, j, k - i - j]);
            }
        }
    }
    out
}

/// Implicit polynomial of degree `d` through a point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitFit<T: Real = f64> {
    pub poly: MultiPoly<T>,
    pub degree: u32,
    /// Smallest over largest singular value of the monomial matrix.
    pub residual: T,
    /// Second smallest over largest; small when the fit is not unique.
    pub gap: T,
}

/// Null vector of the monomial matrix of the (centred, rescaled) points.
pub fn fit_implicit<T: Real>(pts: &[Point3<T>], d: u32) -> Result<ImplicitFit<T>> {
    let monos = monomials(d);
    if pts.len() < monos.len() {
        return Err(Error::InsufficientPoints {
            needed: monos.len(),
            got: pts.len(),
        });
    }
    let m = centroid(pts);
    let scale = extent(pts);
    if scale == T::zero() {
        return Err(Error::Invalid("coincident points".into()));
    }
    let mut a = Matrix::zeros(pts.len(), monos.len());
    for (i, &p) in pts.iter().enumerate() {
        let q = (p - m) / scale;
        for (j, e) in monos.iter().enumerate() {
            a[(i, j)] = q.x.powi(e[0] as i32) * q.y.powi(e[1] as i32) * q.z.powi(e[2] as i32);
        }
    }
    let s = svd(&a);
    let n = s.values.len();
    let top = s.values[0];
    let v = s.null_vector();
    let local = MultiPoly::from_terms(monos.iter().copied().zip(v.iter().copied()))?;
    let inv = T::one() / scale;
    let poly = local.compose_affine(
        -m / scale,
        [Vec3::unit_x() * inv, Vec3::unit_y() * inv, Vec3::unit_z() * inv],
    );
    let norm = poly.max_abs_coeff();
    let poly = poly.scale(T::one() / norm);
    let poly = poly.truncated(T::epsilon() * T::lit(1e3));
    Ok(ImplicitFit {
        poly,
        degree: d,
        residual: s.values[n - 1] / top,
        gap: if n > 1 { s.values[n - 2] / top } else { T::one() },
    })
}

/// Smallest degree in `1..=max_degree` whose fit residual is at most `tol`.
pub fn fit_minimal_implicit<T: Real>(pts: &[Point3<T>], max_degree: u32, tol: T) -> Result<ImplicitFit<T>> {
    let mut best: Option<ImplicitFit<T>> = None;
    for d in 1..=max_degree {
        let fit = fit_implicit(pts, d)?;
        if fit.residual <= tol {
            return Ok(fit);
        }
        if best.as_ref().is_none_or(|b| fit.residual < b.residual) {
            best = Some(fit);
        }
    }
    Err(Error::NoAlgebraicModel {
        residual: best.map_or(f64::INFINITY, |b| b.residual.as_f64()),
    })
}
