//! Lines of projective 3-space in Plücker coordinates, and numeric solvers
//! for the lines meeting two or three curves.

use num_traits::Zero;
use rayon::prelude::*;

use crate::circles::Circle3;
use crate::error::{Error, Result};
use crate::geom::{Line3, Point3, Vec3};
use crate::projective::HPoint4;
use crate::scalar::{Cplx, Real};

/// Coordinate index pairs in storage order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Seeds per parameter axis in [`lines_meeting_three`].
pub const SEED_GRID: usize = 64;
/// Lines closer than this projective distance are merged.
pub const MERGE_DISTANCE: f64 = 1e-6;
/// Fraction of seeds above which distinct solutions signal a continuum.
pub const FAMILY_FRACTION: f64 = 0.25;
/// Relative radius of the ball around a pairwise intersection point inside
/// which lines are discarded.
pub const EXCLUSION_RADIUS: f64 = 1e-6;

const NEWTON_ITERS: usize = 60;

fn pair_index(i: usize, j: usize) -> (usize, bool) {
    let (a, b, neg) = if i < j { (i, j, false) } else { (j, i, true) };
    let k = PAIRS.iter().position(|&p| p == (a, b)).expect("distinct indices");
    (k, neg)
}

/// A line as a point of the Plücker quadric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PluckerLine<T: Real = f64> {
    pub p: [Cplx<T>; 6],
}

impl<T: Real> PluckerLine<T> {
    /// Accepts six coordinates satisfying the Plücker relation within
    /// `rel_eps`.
    pub fn new(p: [Cplx<T>; 6], rel_eps: T) -> Result<Self> {
        if p.iter().all(|c| c.is_zero()) {
            return Err(Error::DegenerateLine);
        }
        let l = Self { p };
        let r = l.relation_residual();
        if r > rel_eps {
            return Err(Error::Invalid(format!("Plücker relation residual {}", r)));
        }
        Ok(l)
    }

    pub fn from_real(p: [T; 6], rel_eps: T) -> Result<Self> {
        Self::new(p.map(|v| Cplx::new(v, T::zero())), rel_eps)
    }

    pub fn norm(&self) -> T {
        self.p.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    /// `|p0 p5 − p1 p4 + p2 p3| / ‖p‖²`.
    pub fn relation_residual(&self) -> T {
        let p = &self.p;
        let rel = p[0] * p[5] - p[1] * p[4] + p[2] * p[3];
        rel.norm() / (self.norm() * self.norm())
    }

    /// Entry `(i, j)` of the antisymmetric 4×4 matrix.
    pub fn entry(&self, i: usize, j: usize) -> Cplx<T> {
        if i == j {
            return Cplx::zero();
        }
        let (k, neg) = pair_index(i, j);
        if neg {
            -self.p[k]
        } else {
            self.p[k]
        }
    }

    /// Largest component of `L ∧ q`, relative to `‖L‖‖q‖`.
    pub fn incidence_residual(&self, q: &HPoint4<T>) -> T {
        let c = &q.coords;
        let mut worst = T::zero();
        for i in 0..4 {
            for j in i + 1..4 {
                for k in j + 1..4 {
                    let w = self.entry(i, j) * c[k] - self.entry(i, k) * c[j] + self.entry(j, k) * c[i];
                    worst = worst.max(w.norm());
                }
            }
        }
        worst / (self.norm() * q.norm())
    }

    /// Whether `q` lies on the line within `tol`.
    pub fn contains(&self, q: &HPoint4<T>, tol: T) -> bool {
        self.incidence_residual(q) <= tol
    }

    /// Two points spanning the line.
    pub fn span(&self) -> (HPoint4<T>, HPoint4<T>) {
        // columns k and l of the matrix are independent iff p_kl ≠ 0
        let (best, _) = self
            .p
            .iter()
            .enumerate()
            .fold((0, T::zero()), |(bi, bv), (i, c)| if c.norm() > bv { (i, c.norm()) } else { (bi, bv) });
        let (k, l) = PAIRS[best];
        let col = |m: usize| HPoint4 {
            coords: [0, 1, 2, 3].map(|r| self.entry(r, m)),
        };
        (col(k), col(l))
    }

    /// Real affine line, `None` for a line at infinity or a non-real line.
    pub fn to_affine(&self, tol: T) -> Option<Line3<T>> {
        let n = self.norm();
        let scale = self
            .p
            .iter()
            .fold(Cplx::zero(), |b: Cplx<T>, c| if c.norm() > b.norm() { *c } else { b });
        let p = self.p.map(|c| c / scale);
        if p.iter().any(|c| c.im.abs() > tol) {
            return None;
        }
        let r = p.map(|c| c.re);
        let d = Vec3::new(r[2], r[4], r[5]);
        if d.norm() <= tol * n / scale.norm() {
            return None;
        }
        let m = Vec3::new(r[3], -r[1], r[0]);
        let foot = m.cross(d) / d.norm_squared();
        Some(Line3::new(foot, d.normalized()?))
    }

    pub fn projective_distance(&self, o: &Self) -> T {
        let (na, nb) = (self.norm(), o.norm());
        let a = self.p.map(|c| c / na);
        let b = o.p.map(|c| c / nb);
        let inner = a.iter().zip(&b).fold(Cplx::zero(), |s: Cplx<T>, (x, y)| s + x.conj() * y);
        (0..6).map(|i| (b[i] - a[i] * inner).norm_sqr()).sum::<T>().sqrt()
    }

    pub fn projectively_equal(&self, o: &Self, tol: T) -> bool {
        self.projective_distance(o) <= tol
    }

    pub fn neg(&self) -> Self {
        Self { p: self.p.map(|c| -c) }
    }
}

/// The line through two points. Fails when they coincide projectively.
pub fn line_through<T: Real>(a: &HPoint4<T>, b: &HPoint4<T>) -> Result<PluckerLine<T>> {
    let (x, y) = (&a.coords, &b.coords);
    let p = PAIRS.map(|(i, j)| x[i] * y[j] - x[j] * y[i]);
    let l = PluckerLine { p };
    if l.norm() <= T::epsilon() * T::lit(64.0) * a.norm() * b.norm() {
        return Err(Error::DegenerateLine);
    }
    Ok(l)
}

/// Shorthand for [`PluckerLine::contains`].
pub fn point_on_line<T: Real>(l: &PluckerLine<T>, a: &HPoint4<T>, tol: T) -> bool {
    l.contains(a, tol)
}

/// A real-parametrized curve of projective 3-space with a sample count.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSampler<T: Real = f64> {
    /// A real circle, parameter `t ∈ [0, 2π)` offset by `phase`.
    Circle {
        circle: Circle3<T>,
        samples: usize,
        phase: T,
    },
    /// Polynomial homogeneous coordinates; `coords[i][k]` is the `t^k`
    /// coefficient of coordinate `i`.
    Polynomial {
        coords: [Vec<Cplx<T>>; 4],
        interval: (T, T),
        samples: usize,
    },
}

fn horner<T: Real>(coeffs: &[Cplx<T>], t: T) -> Cplx<T> {
    coeffs.iter().rev().fold(Cplx::zero(), |acc, &c| acc * t + c)
}

fn horner_derivative<T: Real>(coeffs: &[Cplx<T>], t: T) -> Cplx<T> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Cplx::zero(), |acc, (k, &c)| acc * t + c * T::from_usize(k).unwrap())
}

impl<T: Real> CurveSampler<T> {
    pub fn circle(circle: Circle3<T>, samples: usize) -> Self {
        CurveSampler::Circle {
            circle,
            samples,
            phase: T::zero(),
        }
    }

    pub fn sample_count(&self) -> usize {
        match self {
            CurveSampler::Circle { samples, .. } | CurveSampler::Polynomial { samples, .. } => *samples,
        }
    }

    pub fn as_circle(&self) -> Option<&Circle3<T>> {
        match self {
            CurveSampler::Circle { circle, .. } => Some(circle),
            CurveSampler::Polynomial { .. } => None,
        }
    }

    fn is_periodic(&self) -> bool {
        matches!(self, CurveSampler::Circle { .. })
    }

    /// Parameter range; the circle range is half-open.
    pub fn interval(&self) -> (T, T) {
        match self {
            CurveSampler::Circle { phase, .. } => (*phase, *phase + T::TAU()),
            CurveSampler::Polynomial { interval, .. } => *interval,
        }
    }

    /// Evenly spaced sample parameters (`n` of them).
    pub fn params_n(&self, n: usize) -> Vec<T> {
        let (a, b) = self.interval();
        let denom = if self.is_periodic() { n } else { n.saturating_sub(1).max(1) };
        let step = (b - a) / T::from_usize(denom).unwrap();
        (0..n).map(|i| a + step * T::from_usize(i).unwrap()).collect()
    }

    pub fn params(&self) -> Vec<T> {
        self.params_n(self.sample_count())
    }

    pub fn eval(&self, t: T) -> HPoint4<T> {
        match self {
            CurveSampler::Circle { circle, .. } => HPoint4::affine(circle.point_at(t)),
            CurveSampler::Polynomial { coords, .. } => HPoint4 {
                coords: [0, 1, 2, 3].map(|i| horner(&coords[i], t)),
            },
        }
    }

    pub fn derivative(&self, t: T) -> [Cplx<T>; 4] {
        match self {
            CurveSampler::Circle { circle, .. } => {
                let d = circle.derivative_at(t);
                [d.x, d.y, d.z, T::zero()].map(|v| Cplx::new(v, T::zero()))
            }
            CurveSampler::Polynomial { coords, .. } => [0, 1, 2, 3].map(|i| horner_derivative(&coords[i], t)),
        }
    }

    pub fn samples(&self) -> Vec<HPoint4<T>> {
        self.params().into_iter().map(|t| self.eval(t)).collect()
    }

    /// Whether every coefficient is real.
    pub fn is_real(&self) -> bool {
        match self {
            CurveSampler::Circle { .. } => true,
            CurveSampler::Polynomial { coords, .. } => coords.iter().flatten().all(|c| c.im == T::zero()),
        }
    }

    /// Relative distance from `q` to the curve: affine distance over the
    /// radius for a circle, smallest projective distance to a dense sample
    /// otherwise.
    pub fn distance_to(&self, q: &HPoint4<T>) -> T {
        match self {
            CurveSampler::Circle { circle, .. } => match q.to_affine(T::epsilon().sqrt()) {
                Some(p) => circle.distance_to(p) / circle.radius(),
                None => T::one(),
            },
            CurveSampler::Polynomial { .. } => {
                let n = self.sample_count().max(16) * 8;
                let ts = self.params_n(n);
                let (i, _) = ts.iter().enumerate().fold((0, T::infinity()), |(bi, bd), (i, &t)| {
                    let d = self.eval(t).projective_distance(q);
                    if d < bd {
                        (i, d)
                    } else {
                        (bi, bd)
                    }
                });
                // golden-section refinement around the best sample
                let lo = ts[i.saturating_sub(1)];
                let hi = ts[(i + 1).min(n - 1)];
                let f = |t: T| self.eval(t).projective_distance(q);
                let (mut a, mut b) = (lo, hi);
                let g = T::lit(0.618_033_988_749_894_9);
                for _ in 0..80 {
                    let c = b - (b - a) * g;
                    let d = a + (b - a) * g;
                    if f(c) < f(d) {
                        b = d;
                    } else {
                        a = c;
                    }
                }
                f((a + b) * T::lit(0.5))
            }
        }
    }
}

/// A line found by the solvers, with the curve parameters it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSample<T: Real = f64> {
    pub line: PluckerLine<T>,
    pub s: T,
    pub t: T,
}

fn same_curve<T: Real>(g1: &CurveSampler<T>, g2: &CurveSampler<T>, tol: T) -> bool {
    if let (Some(a), Some(b)) = (g1.as_circle(), g2.as_circle()) {
        return a.approx_eq(b, tol * a.radius().max(T::one()));
    }
    g1.samples().iter().all(|p| g2.distance_to(p) <= tol)
}

/// Points common to two curves, up to `excl` relative distance.
pub fn shared_points<T: Real>(g1: &CurveSampler<T>, g2: &CurveSampler<T>, excl: T) -> Vec<HPoint4<T>> {
    if let (Some(a), Some(b)) = (g1.as_circle(), g2.as_circle()) {
        let scale = a.radius().max(b.radius());
        return crate::circles::intersect_circles(a, b, excl * scale)
            .points()
            .into_iter()
            .map(HPoint4::affine)
            .collect();
    }
    let (g1, g2) = if g2.as_circle().is_some() { (g1, g2) } else { (g2, g1) };
    let mut out: Vec<HPoint4<T>> = Vec::new();
    for t in g1.params_n(g1.sample_count().max(16) * 8) {
        let p = g1.eval(t);
        if g2.distance_to(&p) <= excl && out.iter().all(|q| !q.projectively_equal(&p, excl.sqrt())) {
            out.push(p);
        }
    }
    out
}

fn through_any<T: Real>(line: &PluckerLine<T>, pts: &[HPoint4<T>], excl: T) -> bool {
    pts.iter().any(|p| line.incidence_residual(p) <= excl)
}

/// Lines joining a sample of `g1` to a sample of `g2`, omitting lines
/// through (a neighbourhood of) points common to both curves.
pub fn lines_meeting_two<T: Real>(
    g1: &CurveSampler<T>,
    g2: &CurveSampler<T>,
    tol: T,
) -> Result<Vec<LineSample<T>>> {
    if same_curve(g1, g2, tol) {
        return Err(Error::IdenticalCurves);
    }
    let excl = T::lit(EXCLUSION_RADIUS).max(tol);
    let shared = shared_points(g1, g2, excl);
    let s_params = g1.params();
    let b_pts: Vec<(T, HPoint4<T>)> = g2.params().into_iter().map(|t| (t, g2.eval(t))).collect();
    let out = s_params
        .par_iter()
        .flat_map_iter(|&s| {
            let a = g1.eval(s);
            let shared = &shared;
            b_pts
                .iter()
                .filter_map(move |&(t, b)| {
                    let line = line_through(&a, &b).ok()?;
                    (!through_any(&line, shared, excl)).then_some(LineSample { line, s, t })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(out)
}

/// Real quadratic form `|X_xyz − c X_w|² − r² X_w²` of a circle's sphere,
/// together with the circle's plane as a covector.
struct CircleForms<T: Real> {
    q: [[T; 4]; 4],
    plane: [T; 4],
}

impl<T: Real> CircleForms<T> {
    fn new(c: &Circle3<T>) -> Self {
        let ctr = c.center().to_array();
        let r2 = c.radius() * c.radius();
        let mut q = [[T::zero(); 4]; 4];
        for i in 0..3 {
            q[i][i] = T::one();
            q[i][3] = -ctr[i];
            q[3][i] = -ctr[i];
        }
        q[3][3] = ctr.iter().map(|&v| v * v).sum::<T>() - r2;
        let n = c.normal();
        let plane = [n.x, n.y, n.z, -n.dot(c.center())];
        Self { q, plane }
    }

    fn form(&self, x: &[T; 4], y: &[T; 4]) -> T {
        let mut s = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                s += x[i] * self.q[i][j] * y[j];
            }
        }
        s
    }

    fn pi(&self, x: &[T; 4]) -> T {
        (0..4).map(|i| self.plane[i] * x[i]).sum()
    }
}

fn re4<T: Real>(c: &[Cplx<T>; 4]) -> [T; 4] {
    c.map(|v| v.re)
}

fn norm4<T: Real>(v: &[T; 4]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// One line from the seeded Newton solve.
#[derive(Debug, Clone, Copy)]
enum Seeded<T: Real> {
    /// Root of the incidence equation.
    Root(LineSample<T>),
    /// The line lies in the plane of the third curve and crosses it.
    InPlane(LineSample<T>),
}

/// Lines meeting three curves, sampled along the solution set of
/// "the line through `g1(s)` and `g2(t)` meets `g3`". For each of the
/// [`SEED_GRID`] values of `s`, Newton's method in `t` is started from
/// [`SEED_GRID`] seeds. At least one curve must be a circle.
///
/// Reports [`Error::NonIsolatedFamily`] when the solutions fill a
/// two-parameter set, as for three coplanar circles.
pub fn lines_meeting_three<T: Real>(
    g1: &CurveSampler<T>,
    g2: &CurveSampler<T>,
    g3: &CurveSampler<T>,
    tol: T,
) -> Result<Vec<LineSample<T>>> {
    let (g1, g2, g3) = match (g1.as_circle(), g2.as_circle(), g3.as_circle()) {
        (_, _, Some(_)) => (g1, g2, g3),
        (_, Some(_), _) => (g1, g3, g2),
        (Some(_), _, _) => (g2, g3, g1),
        _ => return Err(Error::UnsupportedCurve("lines_meeting_three needs a circle")),
    };
    if !(g1.is_real() && g2.is_real()) {
        return Err(Error::UnsupportedCurve("lines_meeting_three needs real curves"));
    }
    for (a, b) in [(g1, g2), (g1, g3), (g2, g3)] {
        if same_curve(a, b, tol) {
            return Err(Error::IdenticalCurves);
        }
    }
    let circle = *g3.as_circle().expect("reordered");
    let forms = CircleForms::new(&circle);
    let excl = T::lit(EXCLUSION_RADIUS).max(tol);
    let mut shared = shared_points(g1, g2, excl);
    shared.extend(shared_points(g1, g3, excl));
    shared.extend(shared_points(g2, g3, excl));
    let shared = &shared;
    let s_params = g1.params_n(SEED_GRID);
    let t_seeds = g2.params_n(SEED_GRID);
    let (t_lo, t_hi) = g2.interval();
    let periodic = g2.is_periodic();
    let span = t_hi - t_lo;

    let raw: Vec<Option<Seeded<T>>> = s_params
        .par_iter()
        .flat_map_iter(|&s| {
            let ha = g1.eval(s);
            let a = re4(&ha.coords);
            let pa = forms.pi(&a);
            let t_seeds = &t_seeds;
            let forms = &forms;
            t_seeds
                .iter()
                .map(move |&t0| {
                    let meet = |t: T| {
                        let b = re4(&g2.eval(t).coords);
                        let db = re4(&g2.derivative(t));
                        let pb = forms.pi(&b);
                        let pdb = forms.pi(&db);
                        let x: [T; 4] = [0, 1, 2, 3].map(|i| a[i] * pb - b[i] * pa);
                        let dx: [T; 4] = [0, 1, 2, 3].map(|i| a[i] * pdb - db[i] * pa);
                        (b, x, dx)
                    };
                    let (b0, x0, _) = meet(t0);
                    let ab = norm4(&a) * norm4(&b0);
                    if norm4(&x0) <= T::lit(1e3) * T::epsilon() * ab {
                        // the whole line lies in the circle's plane
                        let line = line_through(&ha, &g2.eval(t0)).ok()?;
                        if through_any(&line, shared, excl) {
                            return None;
                        }
                        let aff = line.to_affine(T::epsilon().sqrt())?;
                        if aff.distance_to(circle.center()) <= circle.radius() {
                            return Some(Seeded::InPlane(LineSample { line, s, t: t0 }));
                        }
                        return None;
                    }
                    let mut t = t0;
                    let mut converged = false;
                    for _ in 0..NEWTON_ITERS {
                        let (_, x, dx) = meet(t);
                        let f = forms.form(&x, &x);
                        let df = T::lit(2.0) * forms.form(&x, &dx);
                        if df == T::zero() {
                            break;
                        }
                        let mut step = f / df;
                        let cap = span / T::lit(8.0);
                        if step.abs() > cap {
                            step = cap * step.signum();
                        }
                        t -= step;
                        if !periodic && (t < t_lo || t > t_hi) {
                            return None;
                        }
                        if step.abs() <= T::lit(16.0) * T::epsilon() * (T::one() + t.abs()) {
                            converged = true;
                            break;
                        }
                    }
                    if periodic {
                        let u = (t - t_lo) / span;
                        t = t_lo + (u - u.floor()) * span;
                    }
                    let (_, x, _) = meet(t);
                    if !converged {
                        let f = forms.form(&x, &x);
                        if f.abs() > tol * norm4(&x) * norm4(&x) {
                            return None;
                        }
                    }
                    let hx = HPoint4::real(x[0], x[1], x[2], x[3])?;
                    let p = hx.to_affine(T::epsilon().sqrt())?;
                    if circle.distance_to(p) > tol * circle.radius() {
                        return None;
                    }
                    let line = line_through(&ha, &g2.eval(t)).ok()?;
                    if through_any(&line, shared, excl) {
                        return None;
                    }
                    Some(Seeded::Root(LineSample { line, s, t }))
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let seeds = raw.len();
    let mut in_plane = Vec::new();
    let mut roots = Vec::new();
    for r in raw.into_iter().flatten() {
        match r {
            Seeded::InPlane(l) => in_plane.push(l),
            Seeded::Root(l) => roots.push(l),
        }
    }
    let merge = T::lit(MERGE_DISTANCE);
    let all: Vec<LineSample<T>> = roots.into_iter().chain(in_plane).collect();
    let distinct = merge_lines(&all, merge);
    if distinct.len() as f64 > FAMILY_FRACTION * seeds as f64 && chains(&distinct) {
        return Err(Error::NonIsolatedFamily {
            distinct: distinct.len(),
            seeds,
        });
    }
    Ok(distinct)
}

/// Drops lines within `merge` of an earlier survivor. Candidates are swept
/// in order of `|p0|/‖p‖`, which moves by at most the projective distance;
/// survivors keep their input order.
pub fn merge_lines<T: Real>(lines: &[LineSample<T>], merge: T) -> Vec<LineSample<T>> {
    let key = |l: &LineSample<T>| l.line.p[0].norm() / l.line.norm();
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&a, &b| key(&lines[a]).partial_cmp(&key(&lines[b])).unwrap().then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    let window = merge * T::lit(2.0);
    for &i in &order {
        let ki = key(&lines[i]);
        let dup = kept
            .iter()
            .rev()
            .take_while(|&&j| ki - key(&lines[j]) <= window)
            .any(|&j| lines[j].line.projectively_equal(&lines[i].line, merge));
        if !dup {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter().map(|i| lines[i]).collect()
}

/// Nearest-neighbour chain test: most solutions have a neighbour much closer
/// than the diameter of the whole set.
fn chains<T: Real>(sols: &[LineSample<T>]) -> bool {
    if sols.len() < 3 {
        return false;
    }
    let stride = (sols.len() / 48).max(1);
    let probe: Vec<&LineSample<T>> = sols.iter().step_by(stride).collect();
    let mut diam = T::zero();
    let mut nn = Vec::with_capacity(probe.len());
    for a in &probe {
        let mut best = T::infinity();
        for b in sols {
            let d = a.line.projective_distance(&b.line);
            diam = diam.max(d);
            if d > T::zero() && d < best {
                best = d;
            }
        }
        nn.push(best);
    }
    nn.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nn[nn.len() / 2] <= diam * T::lit(0.25)
}

/// Points of an affine line as a homogeneous pair, for incidence checks.
pub fn affine_line<T: Real>(a: Point3<T>, b: Point3<T>) -> Result<PluckerLine<T>> {
    line_through(&HPoint4::affine(a), &HPoint4::affine(b))
}
