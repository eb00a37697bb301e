//! Circles and spheres: construction, fitting, intersection, cosphericity,
//! transversality, circular points and isotropic-circle recognition.

use crate::error::{Error, Result};
use crate::geom::{canonical_normal, extent, fit_plane, frame, principal_axes, Plane, Point3, Vec3};
use crate::linalg::{lstsq, svd, Matrix};
use crate::projective::HPoint4;
use crate::scalar::{Cplx, Real};

/// Tangent directions closer than this (radians) are not transversal.
pub const TRANSVERSAL_ANGLE: f64 = 1e-4;

/// Samples per circle used by the cosphericity test.
const COSPHERICAL_SAMPLES: usize = 8;

/// Circle in ℝ³ with a sign-normalized unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle3<T: Real = f64> {
    center: Point3<T>,
    radius: T,
    normal: Vec3<T>,
}

impl<T: Real> Circle3<T> {
    /// `None` for a non-positive radius or a zero normal.
    pub fn new(center: Point3<T>, radius: T, normal: Vec3<T>) -> Option<Self> {
        let normal = canonical_normal(normal.normalized()?);
        (radius > T::zero() && radius.is_finite() && center.is_finite()).then_some(Self {
            center,
            radius,
            normal,
        })
    }

    pub fn center(&self) -> Point3<T> {
        self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn normal(&self) -> Vec3<T> {
        self.normal
    }

    pub fn plane(&self) -> Plane<T> {
        Plane::through(self.center, self.normal).expect("unit normal")
    }

    /// In-plane frame `(e1, e2)` of the parametrization.
    pub fn frame(&self) -> (Vec3<T>, Vec3<T>) {
        frame(self.normal)
    }

    /// `center + radius·(cos t·e1 + sin t·e2)`.
    pub fn point_at(&self, t: T) -> Point3<T> {
        let (e1, e2) = self.frame();
        self.center + (e1 * t.cos() + e2 * t.sin()) * self.radius
    }

    /// Derivative of [`Circle3::point_at`].
    pub fn derivative_at(&self, t: T) -> Vec3<T> {
        let (e1, e2) = self.frame();
        (e2 * t.cos() - e1 * t.sin()) * self.radius
    }

    /// Parameter of the point of the circle closest to `p`.
    pub fn param_of(&self, p: Point3<T>) -> T {
        let (e1, e2) = self.frame();
        let d = p - self.center;
        d.dot(e2).atan2(d.dot(e1))
    }

    /// `n` equispaced samples starting at parameter `phase`.
    pub fn samples(&self, n: usize, phase: T) -> Vec<Point3<T>> {
        let step = T::TAU() / T::from_usize(n).unwrap();
        (0..n)
            .map(|i| self.point_at(phase + step * T::from_usize(i).unwrap()))
            .collect()
    }

    /// Euclidean distance from `p` to the circle.
    pub fn distance_to(&self, p: Point3<T>) -> T {
        let d = p - self.center;
        let h = d.dot(self.normal);
        let rho = (d - self.normal * h).norm();
        h.hypot(rho - self.radius)
    }

    /// Unit tangent direction at the circle point nearest `p`.
    pub fn tangent_at(&self, p: Point3<T>) -> Vec3<T> {
        self.derivative_at(self.param_of(p)) / self.radius
    }

    pub fn approx_eq(&self, o: &Self, tol: T) -> bool {
        self.center.distance(o.center) <= tol
            && (self.radius - o.radius).abs() <= tol
            && self.normal.cross(o.normal).norm() <= tol
    }
}

/// Round sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere<T: Real = f64> {
    pub center: Point3<T>,
    pub radius: T,
}

impl<T: Real> Sphere<T> {
    pub fn new(center: Point3<T>, radius: T) -> Option<Self> {
        (radius > T::zero() && radius.is_finite() && center.is_finite())
            .then_some(Self { center, radius })
    }

    pub fn unit() -> Self {
        Self {
            center: Point3::zero(),
            radius: T::one(),
        }
    }

    pub fn distance_to(&self, p: Point3<T>) -> T {
        (p.distance(self.center) - self.radius).abs()
    }
}

/// A sphere, or the plane that is its limit as the radius grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spherical<T: Real = f64> {
    Sphere(Sphere<T>),
    Plane(Plane<T>),
}

impl<T: Real> Spherical<T> {
    pub fn distance_to(&self, p: Point3<T>) -> T {
        match self {
            Spherical::Sphere(s) => s.distance_to(p),
            Spherical::Plane(pl) => pl.signed_distance(p).abs(),
        }
    }
}

/// Outcome of intersecting two circles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleIntersection<T: Real = f64> {
    Empty,
    One(Point3<T>),
    Two(Point3<T>, Point3<T>),
    Coincident,
}

impl<T: Real> CircleIntersection<T> {
    pub fn points(&self) -> Vec<Point3<T>> {
        match *self {
            CircleIntersection::One(p) => vec![p],
            CircleIntersection::Two(p, q) => vec![p, q],
            _ => Vec::new(),
        }
    }

    pub fn count(&self) -> usize {
        self.points().len()
    }
}

/// Circle through three points. Fails when the points are collinear or
/// coincident at `abs_eps` relative to their spread.
pub fn circle_through<T: Real>(
    p1: Point3<T>,
    p2: Point3<T>,
    p3: Point3<T>,
    abs_eps: T,
) -> Result<Circle3<T>> {
    let a = p1 - p3;
    let b = p2 - p3;
    let axb = a.cross(b);
    let scale = a.norm_squared().max(b.norm_squared()).max((p1 - p2).norm_squared());
    if scale == T::zero() || axb.norm() <= abs_eps * scale {
        return Err(Error::DegenerateCircle);
    }
    let num = (b * a.norm_squared() - a * b.norm_squared()).cross(axb);
    let offset = num / (T::lit(2.0) * axb.norm_squared());
    let center = p3 + offset;
    Circle3::new(center, offset.norm(), axb).ok_or(Error::DegenerateCircle)
}

/// Circle fitted to a point cloud with its rms distance residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit<T: Real = f64> {
    pub circle: Circle3<T>,
    pub rms: T,
}

/// Least-squares circle: total-least-squares plane, algebraic circle fit in
/// the plane chart, then one Gauss-Newton step on geometric distances.
pub fn fit_circle<T: Real>(pts: &[Point3<T>]) -> Result<CircleFit<T>> {
    if pts.len() < 4 {
        return Err(Error::InsufficientPoints {
            needed: 4,
            got: pts.len(),
        });
    }
    let (c, vals, axes) = principal_axes(pts);
    if !(vals[1] > T::epsilon() * T::lit(1e4) * vals[2]) {
        return Err(Error::DegenerateCircle);
    }
    let normal = canonical_normal(axes[0]);
    let (e1, e2) = frame(normal);
    let scale = extent(pts);
    let uv: Vec<(T, T)> = pts
        .iter()
        .map(|&p| {
            let d = (p - c) / scale;
            (d.dot(e1), d.dot(e2))
        })
        .collect();

    let mut a = Matrix::zeros(uv.len(), 3);
    let mut rhs = Vec::with_capacity(uv.len());
    for (i, &(u, v)) in uv.iter().enumerate() {
        a[(i, 0)] = u;
        a[(i, 1)] = v;
        a[(i, 2)] = T::one();
        rhs.push(-(u * u + v * v));
    }
    let sol = lstsq(&a, &rhs, T::epsilon() * T::lit(1e3)).ok_or(Error::DegenerateCircle)?;
    let half = T::lit(0.5);
    let (mut cu, mut cv) = (-sol[0] * half, -sol[1] * half);
    let r2 = cu * cu + cv * cv - sol[2];
    if !(r2 > T::zero()) {
        return Err(Error::DegenerateCircle);
    }
    let mut r = r2.sqrt();

    let mut jac = Matrix::zeros(uv.len(), 3);
    let mut res = Vec::with_capacity(uv.len());
    for (i, &(u, v)) in uv.iter().enumerate() {
        let (du, dv) = (u - cu, v - cv);
        let rho = du.hypot(dv);
        if rho > T::zero() {
            jac[(i, 0)] = -du / rho;
            jac[(i, 1)] = -dv / rho;
        }
        jac[(i, 2)] = -T::one();
        res.push(-(rho - r));
    }
    if let Some(step) = lstsq(&jac, &res, T::epsilon() * T::lit(1e3)) {
        cu += step[0];
        cv += step[1];
        r += step[2];
    }

    let center = c + (e1 * cu + e2 * cv) * scale;
    let circle = Circle3::new(center, r * scale, normal).ok_or(Error::DegenerateCircle)?;
    let rms = (pts.iter().map(|&p| circle.distance_to(p).powi(2)).sum::<T>()
        / T::from_usize(pts.len()).unwrap())
    .sqrt();
    Ok(CircleFit { circle, rms })
}

/// Least-squares sphere through a cloud, with rms distance residual.
/// Returns a plane when the fitted radius exceeds `max_radius`.
pub fn fit_sphere<T: Real>(pts: &[Point3<T>], max_radius: T) -> Result<(Spherical<T>, T)> {
    if pts.len() < 4 {
        return Err(Error::InsufficientPoints {
            needed: 4,
            got: pts.len(),
        });
    }
    let m = crate::geom::centroid(pts);
    let s = extent(pts);
    if s == T::zero() {
        return Err(Error::Invalid("coincident points".into()));
    }
    let mut a = Matrix::zeros(pts.len(), 5);
    for (i, &p) in pts.iter().enumerate() {
        let q = (p - m) / s;
        a[(i, 0)] = q.norm_squared();
        a[(i, 1)] = q.x;
        a[(i, 2)] = q.y;
        a[(i, 3)] = q.z;
        a[(i, 4)] = T::one();
    }
    let v = svd(&a).null_vector();
    let vnorm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    let rms = |shape: &Spherical<T>| {
        (pts.iter().map(|&p| shape.distance_to(p).powi(2)).sum::<T>()
            / T::from_usize(pts.len()).unwrap())
        .sqrt()
    };
    let plane_fallback = || -> Result<(Spherical<T>, T)> {
        let (pl, _) = fit_plane(pts).ok_or(Error::Invalid("plane fit failed".into()))?;
        let shape = Spherical::Plane(pl);
        let r = rms(&shape);
        Ok((shape, r))
    };
    if v[0].abs() <= T::epsilon() * vnorm {
        return plane_fallback();
    }
    let two_a = T::lit(2.0) * v[0];
    let cq = Vec3::new(-v[1] / two_a, -v[2] / two_a, -v[3] / two_a);
    let r2 = cq.norm_squared() - v[4] / v[0];
    if !(r2 > T::zero()) {
        return Err(Error::Invalid("imaginary sphere".into()));
    }
    let radius = r2.sqrt() * s;
    if radius > max_radius {
        return plane_fallback();
    }
    let shape = Spherical::Sphere(Sphere {
        center: m + cq * s,
        radius,
    });
    let r = rms(&shape);
    Ok((shape, r))
}

fn dedupe<T: Real>(pts: Vec<Point3<T>>, tol: T) -> Vec<Point3<T>> {
    let mut out: Vec<Point3<T>> = Vec::new();
    for p in pts {
        if out.iter().all(|q| q.distance(p) > tol) {
            out.push(p);
        }
    }
    out
}

fn to_intersection<T: Real>(pts: Vec<Point3<T>>) -> CircleIntersection<T> {
    match pts.as_slice() {
        [] => CircleIntersection::Empty,
        [p] => CircleIntersection::One(*p),
        [p, q, ..] => CircleIntersection::Two(*p, *q),
    }
}

/// Common points of two circles within `tol`. A tangency is one point.
pub fn intersect_circles<T: Real>(c1: &Circle3<T>, c2: &Circle3<T>, tol: T) -> CircleIntersection<T> {
    let n1 = c1.normal;
    let n2 = c2.normal;
    let cross = n1.cross(n2);
    let scale = c1.radius.max(c2.radius);
    if cross.norm() * scale <= tol {
        if c1.plane().signed_distance(c2.center).abs() > tol {
            return CircleIntersection::Empty;
        }
        return coplanar_intersection(c1, c2, tol);
    }
    // line shared by both planes
    let (o1, o2) = (n1.dot(c1.center), n2.dot(c2.center));
    let k = n1.dot(n2);
    let denom = cross.norm_squared();
    let p0 = (n1 * (o1 - o2 * k) + n2 * (o2 - o1 * k)) / denom;
    let u = cross / cross.norm();
    let mut candidates = Vec::new();
    for c in [c1, c2] {
        let w = p0 - c.center;
        let b = u.dot(w);
        let disc = b * b - (w.norm_squared() - c.radius * c.radius);
        if disc >= T::zero() {
            let h = disc.sqrt();
            if h <= tol {
                candidates.push(p0 + u * (-b));
            } else {
                candidates.push(p0 + u * (-b - h));
                candidates.push(p0 + u * (-b + h));
            }
        } else if (-disc).sqrt() <= tol {
            candidates.push(p0 + u * (-b));
        }
    }
    let common: Vec<Point3<T>> = candidates
        .into_iter()
        .filter(|&p| c1.distance_to(p) <= tol && c2.distance_to(p) <= tol)
        .collect();
    to_intersection(dedupe(common, tol))
}

fn coplanar_intersection<T: Real>(c1: &Circle3<T>, c2: &Circle3<T>, tol: T) -> CircleIntersection<T> {
    let delta = c2.center - c1.center;
    let delta = delta - c1.normal * delta.dot(c1.normal);
    let d = delta.norm();
    let (r1, r2) = (c1.radius, c2.radius);
    if d <= tol {
        return if (r1 - r2).abs() <= tol {
            CircleIntersection::Coincident
        } else {
            CircleIntersection::Empty
        };
    }
    if d > r1 + r2 + tol || d < (r1 - r2).abs() - tol {
        return CircleIntersection::Empty;
    }
    let u = delta / d;
    let a = (d * d + r1 * r1 - r2 * r2) / (T::lit(2.0) * d);
    let h2 = r1 * r1 - a * a;
    let foot = c1.center + u * a;
    if h2 <= tol * tol {
        return CircleIntersection::One(foot);
    }
    let h = h2.sqrt();
    let side = c1.normal.cross(u);
    CircleIntersection::Two(foot + side * h, foot - side * h)
}

/// The common sphere (or plane) of two circles, if one exists within
/// `tol` relative to the larger radius. A fitted radius above
/// `max_radius` is reported as a plane.
pub fn cospherical_with<T: Real>(
    c1: &Circle3<T>,
    c2: &Circle3<T>,
    tol: T,
    max_radius: T,
) -> Option<Spherical<T>> {
    let scale = c1.radius.max(c2.radius);
    if c1.approx_eq(c2, tol * scale) {
        return Some(Spherical::Plane(c1.plane()));
    }
    let mut pts = c1.samples(COSPHERICAL_SAMPLES, T::zero());
    pts.extend(c2.samples(COSPHERICAL_SAMPLES, T::lit(0.37)));
    let (shape, rms) = fit_sphere(&pts, max_radius).ok()?;
    (rms <= tol * scale).then_some(shape)
}

/// [`cospherical_with`] using the default plane cutoff `1/rank_eps`.
pub fn cospherical<T: Real>(c1: &Circle3<T>, c2: &Circle3<T>, tol: T) -> Option<Spherical<T>> {
    let rank_eps = crate::scalar::Tolerance::<T>::default().rank_eps;
    cospherical_with(c1, c2, tol, T::one() / rank_eps)
}

/// Whether two circles cross at `p` with distinct tangent lines.
pub fn transversal_at<T: Real>(c1: &Circle3<T>, c2: &Circle3<T>, p: Point3<T>, tol: T) -> Result<bool> {
    for c in [c1, c2] {
        let d = c.distance_to(p);
        if d > tol * c.radius.max(T::one()) {
            return Err(Error::NotIncident { distance: d.as_f64() });
        }
    }
    let t1 = c1.tangent_at(p);
    let t2 = c2.tangent_at(p);
    let angle = t1.cross(t2).norm().atan2(t1.dot(t2).abs());
    Ok(angle >= T::lit(TRANSVERSAL_ANGLE))
}

/// The two points where the plane's line at infinity meets the absolute
/// conic `x² + y² + z² = 0, w = 0`. They are complex conjugates.
pub fn circular_points<T: Real>(plane: &Plane<T>) -> (HPoint4<T>, HPoint4<T>) {
    let (e1, e2) = frame(plane.normal());
    let zero = Cplx::new(T::zero(), T::zero());
    let mk = |s: T| HPoint4 {
        coords: [
            Cplx::new(e1.x, s * e2.x),
            Cplx::new(e1.y, s * e2.y),
            Cplx::new(e1.z, s * e2.z),
            zero,
        ],
    };
    (mk(T::one()), mk(-T::one()))
}

/// Isotropic-geometry type of a planar curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsotropicClass {
    /// Parabola whose axis is parallel to `Oz`.
    VerticalParabola,
    /// Ellipse whose projection to the `Oxy` plane is a circle.
    CircularProjectionEllipse,
    NotIsotropic,
}

/// Conic `A u² + B uv + C v² + D u + E v + F = 0` in a plane chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarConic<T: Real = f64> {
    pub chart: crate::geom::PlaneChart<T>,
    /// `[A, B, C, D, E, F]`, unit Euclidean norm.
    pub coeffs: [T; 6],
    /// Largest algebraic residual over the samples, relative.
    pub residual: T,
}

/// Fits a conic to planar samples. `tol` bounds both planarity (relative
/// to the cloud extent) and the conic residual.
pub fn fit_planar_conic<T: Real>(pts: &[Point3<T>], tol: T) -> Result<PlanarConic<T>> {
    if pts.len() < 6 {
        return Err(Error::InsufficientPoints {
            needed: 6,
            got: pts.len(),
        });
    }
    let scale = extent(pts);
    let (plane, worst) = fit_plane(pts).ok_or(Error::DegenerateConic)?;
    if worst > tol * scale {
        return Err(Error::NotPlanar {
            residual: (worst / scale).as_f64(),
        });
    }
    let chart = plane.chart();
    let c = crate::geom::centroid(pts);
    let (cu, cv) = chart.coords(c);
    let mut a = Matrix::zeros(pts.len(), 6);
    for (i, &p) in pts.iter().enumerate() {
        let (u, v) = chart.coords(p);
        let (u, v) = ((u - cu) / scale, (v - cv) / scale);
        let row = [u * u, u * v, v * v, u, v, T::one()];
        for (j, r) in row.into_iter().enumerate() {
            a[(i, j)] = r;
        }
    }
    let s = svd(&a);
    let sigma_max = s.values[0];
    // a second (near) null direction means the points sit on a line or a
    // line pair and the conic is not determined
    if s.values[4] <= tol * sigma_max {
        return Err(Error::DegenerateConic);
    }
    let local = s.null_vector();
    let residual = s.values[5] / sigma_max;

    // undo centering and scaling: u' = (u - cu)/s
    let [a2, b2, c2, d2, e2, f2] = [local[0], local[1], local[2], local[3], local[4], local[5]];
    let inv = T::one() / scale;
    let (qa, qb, qc) = (a2 * inv * inv, b2 * inv * inv, c2 * inv * inv);
    let (ld, le) = (d2 * inv, e2 * inv);
    let two = T::lit(2.0);
    let d = ld - two * qa * cu - qb * cv;
    let e = le - two * qc * cv - qb * cu;
    let f = f2 + qa * cu * cu + qb * cu * cv + qc * cv * cv - ld * cu - le * cv;
    let mut coeffs = [qa, qb, qc, d, e, f];
    let n = coeffs.iter().map(|&x| x * x).sum::<T>().sqrt();
    for x in &mut coeffs {
        *x /= n;
    }
    Ok(PlanarConic {
        chart,
        coeffs,
        residual,
    })
}

/// Classifies planar samples as an isotropic circle.
pub fn classify_isotropic<T: Real>(pts: &[Point3<T>], tol: T) -> Result<IsotropicClass> {
    let conic = match fit_planar_conic(pts, tol) {
        Ok(c) => c,
        Err(Error::NotPlanar { .. }) => return Ok(IsotropicClass::NotIsotropic),
        Err(e) => return Err(e),
    };
    if conic.residual > tol {
        return Ok(IsotropicClass::NotIsotropic);
    }
    let [a, b, c, d, e, f] = conic.coeffs;
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let quad = (a * a + b * b * half + c * c).sqrt();
    if quad <= tol {
        return Err(Error::DegenerateConic);
    }
    let det3 = a * (c * f - e * e / T::lit(4.0)) - b * half * (b * half * f - e * d / T::lit(4.0))
        + d * half * (b * half * e * half - c * d * half);
    if det3.abs() <= tol * quad.powi(3).max(tol) {
        return Err(Error::DegenerateConic);
    }
    let disc = b * b - T::lit(4.0) * a * c;
    let ch = conic.chart;
    if disc.abs() <= tol * quad * quad {
        // parabola: axis is the null direction of the quadratic part
        let axis_uv = if a.abs() >= c.abs() {
            (-b * half, a)
        } else {
            (c, -b * half)
        };
        let axis = (ch.e1 * axis_uv.0 + ch.e2 * axis_uv.1)
            .normalized()
            .ok_or(Error::DegenerateConic)?;
        let vertical = axis.cross(Vec3::unit_z()).norm() <= tol.sqrt();
        return Ok(if vertical {
            IsotropicClass::VerticalParabola
        } else {
            IsotropicClass::NotIsotropic
        });
    }
    if disc > T::zero() {
        return Ok(IsotropicClass::NotIsotropic);
    }
    // ellipse: push the quadratic form to the Oxy projection of the chart
    let j = [[ch.e1.x, ch.e2.x], [ch.e1.y, ch.e2.y]];
    let detj = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if detj.abs() <= tol.sqrt() {
        return Ok(IsotropicClass::NotIsotropic);
    }
    let inv = [
        [j[1][1] / detj, -j[0][1] / detj],
        [-j[1][0] / detj, j[0][0] / detj],
    ];
    let m = [[a, b * half], [b * half, c]];
    // M_xy = J⁻ᵀ M J⁻¹
    let mut mxy = [[T::zero(); 2]; 2];
    for r in 0..2 {
        for s in 0..2 {
            let mut acc = T::zero();
            for p in 0..2 {
                for q in 0..2 {
                    acc += inv[p][r] * m[p][q] * inv[q][s];
                }
            }
            mxy[r][s] = acc;
        }
    }
    let size = mxy[0][0].abs().max(mxy[1][1].abs());
    let round = (mxy[0][0] - mxy[1][1]).abs() <= tol.sqrt() * size
        && (mxy[0][1] * two).abs() <= tol.sqrt() * size;
    Ok(if round {
        IsotropicClass::CircularProjectionEllipse
    } else {
        IsotropicClass::NotIsotropic
    })
}
