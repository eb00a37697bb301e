//! Points, planes and affine lines in Euclidean 3-space.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use crate::linalg::{symmetric_eigen, Matrix};
use crate::scalar::Real;

/// A point (or free vector) of ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3<T: Real = f64> {
    pub x: T,
    pub y: T,
    pub z: T,
}

pub type Vec3<T = f64> = Point3<T>;

impl<T: Real> Point3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn max_abs(self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero() && n.is_finite()).then(|| self / n)
    }

    pub fn distance(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Angle between two nonzero vectors, in `[0, π]`.
    pub fn angle_to(self, o: Self) -> T {
        self.cross(o).norm().atan2(self.dot(o))
    }

    pub fn map(self, f: impl Fn(T) -> T) -> Self {
        Self::new(f(self.x), f(self.y), f(self.z))
    }

    pub fn cast<U: Real>(self) -> Point3<U> {
        Point3::new(U::lit(self.x.as_f64()), U::lit(self.y.as_f64()), U::lit(self.z.as_f64()))
    }
}

impl<T: Real> Index<usize> for Point3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Point3 index {i} out of range"),
        }
    }
}

impl<T: Real> Add for Point3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Point3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Point3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> SubAssign for Point3<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Point3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Point3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Div<T> for Point3<T> {
    type Output = Self;
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Flips `n` so that its z component is non-negative, breaking ties with y
/// and then x. Components within a few ulps of zero count as zero.
pub fn canonical_normal<T: Real>(n: Vec3<T>) -> Vec3<T> {
    let tiny = T::epsilon() * T::lit(64.0) * n.max_abs();
    let sign_of = |v: T| {
        if v > tiny {
            1
        } else if v < -tiny {
            -1
        } else {
            0
        }
    };
    let s = match (sign_of(n.z), sign_of(n.y), sign_of(n.x)) {
        (1, _, _) | (0, 1, _) | (0, 0, 1) => 1,
        (0, 0, 0) => 1,
        _ => -1,
    };
    if s < 0 {
        -n
    } else {
        n
    }
}

/// Deterministic orthonormal frame `(e1, e2)` completing the unit vector
/// `normal` to a right-handed basis `(e1, e2, normal)`.
///
/// `e1` is the projection of the coordinate axis least aligned with the
/// normal (the smallest index wins ties).
pub fn frame<T: Real>(normal: Vec3<T>) -> (Vec3<T>, Vec3<T>) {
    let a = [normal.x.abs(), normal.y.abs(), normal.z.abs()];
    let mut k = 0;
    for i in 1..3 {
        if a[i] < a[k] {
            k = i;
        }
    }
    let axis = match k {
        0 => Vec3::unit_x(),
        1 => Vec3::unit_y(),
        _ => Vec3::unit_z(),
    };
    let e1 = (axis - normal * axis.dot(normal))
        .normalized()
        .expect("axis least aligned with a unit normal is never parallel to it");
    let e2 = normal.cross(e1);
    (e1, e2)
}

/// The plane `normal · p = offset` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane<T: Real = f64> {
    normal: Vec3<T>,
    offset: T,
}

impl<T: Real> Plane<T> {
    /// Normalizes `normal`; `None` if it is zero or non-finite.
    pub fn new(normal: Vec3<T>, offset: T) -> Option<Self> {
        let len = normal.norm();
        (len > T::zero() && len.is_finite() && offset.is_finite()).then(|| Self {
            normal: normal / len,
            offset: offset / len,
        })
    }

    pub fn through(point: Point3<T>, normal: Vec3<T>) -> Option<Self> {
        let n = normal.normalized()?;
        Some(Self {
            normal: n,
            offset: n.dot(point),
        })
    }

    /// Coordinate plane `x = c` (axis 0), `y = c` (axis 1) or `z = c` (axis 2).
    pub fn axis(axis: usize, c: T) -> Self {
        let normal = match axis {
            0 => Vec3::unit_x(),
            1 => Vec3::unit_y(),
            _ => Vec3::unit_z(),
        };
        Self { normal, offset: c }
    }

    pub fn normal(&self) -> Vec3<T> {
        self.normal
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn signed_distance(&self, p: Point3<T>) -> T {
        self.normal.dot(p) - self.offset
    }

    pub fn project(&self, p: Point3<T>) -> Point3<T> {
        p - self.normal * self.signed_distance(p)
    }

    /// Orthonormal affine chart `(u, v) ↦ origin + u·e1 + v·e2`.
    pub fn chart(&self) -> PlaneChart<T> {
        let (e1, e2) = frame(self.normal);
        PlaneChart {
            origin: self.normal * self.offset,
            e1,
            e2,
        }
    }
}

/// Orthonormal parametrization of a plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneChart<T: Real = f64> {
    pub origin: Point3<T>,
    pub e1: Vec3<T>,
    pub e2: Vec3<T>,
}

impl<T: Real> PlaneChart<T> {
    pub fn point(&self, u: T, v: T) -> Point3<T> {
        self.origin + self.e1 * u + self.e2 * v
    }

    pub fn coords(&self, p: Point3<T>) -> (T, T) {
        let d = p - self.origin;
        (d.dot(self.e1), d.dot(self.e2))
    }
}

/// Affine line `point + t·dir`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line3<T: Real = f64> {
    pub point: Point3<T>,
    pub dir: Vec3<T>,
}

impl<T: Real> Line3<T> {
    pub fn new(point: Point3<T>, dir: Vec3<T>) -> Self {
        Self { point, dir }
    }

    pub fn through(a: Point3<T>, b: Point3<T>) -> Self {
        Self { point: a, dir: b - a }
    }

    pub fn at(&self, t: T) -> Point3<T> {
        self.point + self.dir * t
    }

    pub fn distance_to(&self, p: Point3<T>) -> T {
        let d = p - self.point;
        d.cross(self.dir).norm() / self.dir.norm()
    }

    /// Parameter of the orthogonal projection of `p`.
    pub fn project_param(&self, p: Point3<T>) -> T {
        (p - self.point).dot(self.dir) / self.dir.norm_squared()
    }
}

pub fn centroid<T: Real>(pts: &[Point3<T>]) -> Point3<T> {
    let n = T::from_usize(pts.len().max(1)).unwrap();
    pts.iter().fold(Point3::zero(), |acc, &p| acc + p) / n
}

/// Covariance eigen-decomposition of a point cloud about its centroid.
/// Eigenvalues ascend, so column 0 is the least-spread direction.
pub fn principal_axes<T: Real>(pts: &[Point3<T>]) -> (Point3<T>, [T; 3], [Vec3<T>; 3]) {
    let c = centroid(pts);
    let mut cov = Matrix::zeros(3, 3);
    for &p in pts {
        let d = p - c;
        let v = [d.x, d.y, d.z];
        for i in 0..3 {
            for j in i..3 {
                cov[(i, j)] += v[i] * v[j];
            }
        }
    }
    let e = symmetric_eigen(&cov);
    let axis = |k: usize| {
        let v = e.vector(k);
        Vec3::new(v[0], v[1], v[2])
    };
    (c, [e.values[0], e.values[1], e.values[2]], [axis(0), axis(1), axis(2)])
}

/// Largest distance from the centroid, used as the cloud's length scale.
pub fn extent<T: Real>(pts: &[Point3<T>]) -> T {
    let c = centroid(pts);
    pts.iter().map(|&p| p.distance(c)).fold(T::zero(), T::max)
}

/// Best-fit plane through the points by total least squares, with the
/// largest point-to-plane distance.
pub fn fit_plane<T: Real>(pts: &[Point3<T>]) -> Option<(Plane<T>, T)> {
    if pts.len() < 3 {
        return None;
    }
    let (c, _, axes) = principal_axes(pts);
    let plane = Plane::through(c, canonical_normal(axes[0]))?;
    let worst = pts
        .iter()
        .map(|&p| plane.signed_distance(p).abs())
        .fold(T::zero(), T::max);
    Some((plane, worst))
}

/// Largest distance of the points from their principal line, relative to
/// the cloud's extent. Zero for exactly collinear input.
pub fn collinearity_residual<T: Real>(pts: &[Point3<T>]) -> T {
    if pts.len() < 3 {
        return T::zero();
    }
    let (c, _, axes) = principal_axes(pts);
    let line = Line3::new(c, axes[2]);
    let scale = extent(pts);
    if scale == T::zero() {
        return T::zero();
    }
    pts.iter()
        .map(|&p| line.distance_to(p))
        .fold(T::zero(), T::max)
        / scale
}

/// Best-fit line through a collinear-ish cloud.
pub fn fit_line<T: Real>(pts: &[Point3<T>]) -> Option<Line3<T>> {
    if pts.len() < 2 {
        return None;
    }
    let (c, vals, axes) = principal_axes(pts);
    (vals[2] > T::zero()).then(|| Line3::new(c, axes[2]))
}
