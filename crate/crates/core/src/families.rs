//! Curve families on surfaces, mod-2 homology on tori, and the pipelines
//! that turn circle and line families into surface classifications.

use rayon::prelude::*;

use crate::circles::{cospherical, fit_circle, intersect_circles, transversal_at, Circle3, CircleIntersection, Sphere, Spherical, TRANSVERSAL_ANGLE};
use crate::error::{Error, Result};
use crate::geom::{collinearity_residual, fit_line, Line3, Point3};
use crate::implicit::{
    classify_quadric, fit_minimal_implicit, is_darboux_cyclide, plane_section_degree, section_is_single_circle, ImplicitSurface,
    QuadricClass,
};
use crate::scalar::{Real, Tolerance};

/// Minimum number of circle families for the sphere pipeline.
pub const TAKEUCHI_FAMILIES: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Lines,
    Circles,
}

/// One sampled member of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCurve<T: Real = f64> {
    pub param: T,
    pub points: Vec<Point3<T>>,
}

/// Curves depending on one real parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFamily<T: Real = f64> {
    pub kind: FamilyKind,
    pub curves: Vec<FamilyCurve<T>>,
}

impl<T: Real> CurveFamily<T> {
    pub fn new(kind: FamilyKind, curves: Vec<FamilyCurve<T>>) -> Result<Self> {
        if curves.is_empty() {
            return Err(Error::Empty("family has no curves"));
        }
        Ok(Self { kind, curves })
    }

    /// Samples each circle at `samples` points.
    pub fn from_circles(circles: &[(T, Circle3<T>)], samples: usize) -> Result<Self> {
        Self::new(
            FamilyKind::Circles,
            circles
                .iter()
                .map(|&(param, c)| FamilyCurve {
                    param,
                    points: c.samples(samples, T::zero()),
                })
                .collect(),
        )
    }

    /// Samples each line on `t ∈ [-half, half]` at `samples` points.
    pub fn from_lines(lines: &[(T, Line3<T>)], half: T, samples: usize) -> Result<Self> {
        let n = T::from_usize(samples.max(2) - 1).unwrap();
        Self::new(
            FamilyKind::Lines,
            lines
                .iter()
                .map(|&(param, l)| FamilyCurve {
                    param,
                    points: (0..samples.max(2))
                        .map(|k| l.at(-half + half * T::lit(2.0) * T::from_usize(k).unwrap() / n))
                        .collect(),
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Point3<T>> + '_ {
        self.curves.iter().flat_map(|c| c.points.iter().copied())
    }

    fn expect(&self, kind: FamilyKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongFamilyKind {
                expected: match kind {
                    FamilyKind::Lines => "Lines",
                    FamilyKind::Circles => "Circles",
                },
            });
        }
        Ok(())
    }

    /// Fits every member as a circle; the rms residual relative to the
    /// radius must be at most `tol`.
    pub fn fit_circles(&self, tol: T) -> Result<Vec<Circle3<T>>> {
        self.expect(FamilyKind::Circles)?;
        self.curves
            .par_iter()
            .enumerate()
            .map(|(index, c)| {
                let fail = |residual: f64| Error::NotACircleFamily { index, residual };
                let fit = fit_circle(&c.points).map_err(|_| fail(f64::INFINITY))?;
                let rel = fit.rms / fit.circle.radius();
                if rel > tol {
                    return Err(fail(rel.as_f64()));
                }
                Ok(fit.circle)
            })
            .collect()
    }

    /// Fits every member as a line; the largest sample distance relative to
    /// the extent must be at most `tol`.
    pub fn fit_lines(&self, tol: T) -> Result<Vec<Line3<T>>> {
        self.expect(FamilyKind::Lines)?;
        self.curves
            .iter()
            .enumerate()
            .map(|(index, c)| {
                let fail = |residual: f64| Error::NotALineFamily { index, residual };
                if c.points.len() < 2 {
                    return Err(fail(f64::INFINITY));
                }
                let rel = collinearity_residual(&c.points);
                if rel > tol {
                    return Err(fail(rel.as_f64()));
                }
                fit_line(&c.points).ok_or(fail(f64::INFINITY))
            })
            .collect()
    }
}

/// Whether all fitted circle normals agree within the angle `tol`.
pub fn planes_parallel<T: Real>(f: &CurveFamily<T>, tol: T) -> Result<bool> {
    if f.len() < 2 {
        return Err(Error::Invalid("need at least two curves".into()));
    }
    let circles = f.fit_circles(tol)?;
    let n0 = circles[0].normal();
    Ok(circles.iter().all(|c| c.normal().cross(n0).norm() <= tol))
}

/// Mod-2 homology class of a loop on a torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusClass {
    pub p: u8,
    pub q: u8,
}

impl TorusClass {
    pub fn new(p: i64, q: i64) -> Self {
        Self {
            p: p.rem_euclid(2) as u8,
            q: q.rem_euclid(2) as u8,
        }
    }

    pub const ZERO: TorusClass = TorusClass { p: 0, q: 0 };
}

/// Angle chart of the torus of revolution about `Oz` with core radius `R`:
/// `u` is the longitude, `v` the angle around the core circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusChart<T: Real = f64> {
    pub major_radius: T,
}

impl<T: Real> TorusChart<T> {
    pub fn chart(&self, p: Point3<T>) -> (T, T) {
        let rho = p.x.hypot(p.y);
        (p.y.atan2(p.x), p.z.atan2(rho - self.major_radius))
    }
}

fn wrap<T: Real>(d: T) -> T {
    let pi = T::PI();
    let mut d = d;
    while d > pi {
        d -= T::TAU();
    }
    while d <= -pi {
        d += T::TAU();
    }
    d
}

/// Winding numbers of a closed sampled loop through an angle chart,
/// reduced mod 2. The closing step from the last sample back to the first
/// is included.
pub fn homology_class_mod2<T: Real>(pts: &[Point3<T>], chart: impl Fn(Point3<T>) -> (T, T), tol: T) -> Result<TorusClass> {
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: pts.len(),
        });
    }
    let n = pts.len();
    let max_step = pts.windows(2).map(|w| w[0].distance(w[1])).fold(T::zero(), T::max);
    let gap = pts[n - 1].distance(pts[0]);
    if gap > max_step * T::lit(2.0) + tol {
        return Err(Error::OpenCurve { gap: gap.as_f64() });
    }
    let uv: Vec<(T, T)> = pts.iter().map(|&p| chart(p)).collect();
    let limit = T::PI() * T::lit(0.999);
    let (mut su, mut sv) = (T::zero(), T::zero());
    for k in 0..n {
        let (a, b) = (uv[k], uv[(k + 1) % n]);
        let (du, dv) = (wrap(b.0 - a.0), wrap(b.1 - a.1));
        if du.abs() >= limit || dv.abs() >= limit {
            return Err(Error::UndersampledLoop {
                index: k,
                step: du.abs().max(dv.abs()).as_f64(),
            });
        }
        su += du;
        sv += dv;
    }
    let turns = |s: T| (s / T::TAU()).round().to_i64().unwrap_or(0);
    Ok(TorusClass::new(turns(su), turns(sv)))
}

/// The mod-2 intersection form.
pub fn intersection_parity(a: TorusClass, b: TorusClass) -> u8 {
    (a.p * b.q + a.q * b.p) % 2
}

/// Indices of the largest of the three subgroups `{0, ξ}`, `{0, η}`,
/// `{0, ξ+η}`; members pair evenly and it holds at least `⌈n/3⌉` indices.
pub fn select_even_subfamily(classes: &[TorusClass]) -> Vec<usize> {
    let groups = [TorusClass { p: 1, q: 0 }, TorusClass { p: 0, q: 1 }, TorusClass { p: 1, q: 1 }];
    let members = |g: TorusClass| -> Vec<usize> {
        classes
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == TorusClass::ZERO || c == g)
            .map(|(i, _)| i)
            .collect()
    };
    groups
        .iter()
        .map(|&g| members(g))
        .fold(Vec::new(), |best, m| if m.len() > best.len() { m } else { best })
}

/// Whether every pair of fitted circles from the two families is
/// cospherical.
pub fn cospherical_families<T: Real>(fa: &CurveFamily<T>, fb: &CurveFamily<T>, tol: T) -> Result<bool> {
    let a = fa.fit_circles(tol)?;
    let b = fb.fit_circles(tol)?;
    Ok(a.par_iter().all(|ca| b.iter().all(|cb| cospherical(ca, cb, tol).is_some())))
}

/// A named pass/fail step of a pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Residuals gathered by [`classify_line_circle_surface`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals<T: Real = f64> {
    /// Singular-value ratio of the implicit fit.
    pub implicit_fit: T,
    /// Largest relative rms circle-fit residual.
    pub circle_fit: T,
    /// Largest relative line-fit residual.
    pub line_fit: T,
}

/// Outcome of the line-and-circle pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport<T: Real = f64> {
    pub planes_parallel: bool,
    /// `None` when the surface is a plane and no section is taken.
    pub single_circle_section: Option<bool>,
    pub surface_degree: u32,
    pub section_degree: Option<u32>,
    pub quadric_class: Option<QuadricClass>,
    /// All checks passed and the class is a plane, a one-sheeted
    /// hyperboloid, a quadratic cone or an elliptic cylinder.
    pub consistent: bool,
    pub fitted: ImplicitSurface<T>,
    pub residuals: Residuals<T>,
    pub checks: Vec<Check>,
}

/// A point where a line crosses a circle at a nonzero angle.
fn line_circle_transversal<T: Real>(l: &Line3<T>, c: &Circle3<T>, tol: T) -> Option<Point3<T>> {
    let n = c.normal();
    let dir = l.dir.normalized()?;
    let denom = n.dot(dir);
    let mut candidates = Vec::new();
    if denom.abs() > T::lit(TRANSVERSAL_ANGLE) {
        let t = n.dot(c.center() - l.point) / denom;
        candidates.push(l.point + dir * t);
    } else {
        // line in (or parallel to) the circle's plane
        let w = l.point - c.center();
        let b = dir.dot(w);
        let disc = b * b - (w.norm_squared() - c.radius() * c.radius());
        if disc > T::zero() {
            let h = disc.sqrt();
            candidates.push(l.point + dir * (-b - h));
            candidates.push(l.point + dir * (-b + h));
        }
    }
    candidates.into_iter().find(|&p| {
        c.distance_to(p) <= tol * c.radius().max(T::one()) && {
            let tan = c.tangent_at(p);
            tan.cross(dir).norm() >= T::lit(TRANSVERSAL_ANGLE)
        }
    })
}

/// Runs the line-and-circle pipeline: parallel circle planes, a minimal
/// degree implicit fit of `surface_samples`, the section by the first
/// circle's plane (single circle, degree equal to the surface degree) and,
/// for degree two, the quadric class.
pub fn classify_line_circle_surface<T: Real>(
    lines: &CurveFamily<T>,
    circles: &CurveFamily<T>,
    surface_samples: &[Point3<T>],
    tol: T,
) -> Result<ClassificationReport<T>> {
    lines.expect(FamilyKind::Lines)?;
    circles.expect(FamilyKind::Circles)?;
    let fitted_lines = lines.fit_lines(tol)?;
    let fitted_circles = circles.fit_circles(tol)?;
    let incidence = fitted_lines
        .iter()
        .find_map(|l| fitted_circles.iter().find_map(|c| line_circle_transversal(l, c, tol)))
        .ok_or(Error::NoTransversalIncidence)?;

    let line_fit = lines
        .curves
        .iter()
        .map(|c| collinearity_residual(&c.points))
        .fold(T::zero(), T::max);
    let circle_fit = circles
        .curves
        .iter()
        .filter_map(|c| fit_circle(&c.points).ok())
        .map(|f| f.rms / f.circle.radius())
        .fold(T::zero(), T::max);

    let mut checks = vec![Check {
        id: "transversal_incidence",
        passed: true,
        detail: format!("{:?}", incidence.to_array().map(|v| v.as_f64())),
    }];
    let parallel = if fitted_circles.len() >= 2 {
        let n0 = fitted_circles[0].normal();
        fitted_circles.iter().all(|c| c.normal().cross(n0).norm() <= tol)
    } else {
        true
    };
    checks.push(Check {
        id: "parallel_planes",
        passed: parallel,
        detail: format!("{} circles", fitted_circles.len()),
    });

    let fit = fit_minimal_implicit(surface_samples, 4, tol)?;
    let surface = ImplicitSurface::new(fit.poly.clone())?;
    let d = fit.degree;
    checks.push(Check {
        id: "implicit_fit",
        passed: true,
        detail: format!("degree {d}, residual {:e}", fit.residual.as_f64()),
    });

    let rank = Tolerance::default();
    let (single, section_degree) = if d == 1 {
        (None, None)
    } else {
        let plane = fitted_circles[0].plane();
        let circle_tol = tol.sqrt().max(T::lit(1e-6));
        let single = matches!(section_is_single_circle(&surface, &plane, &rank, circle_tol), Ok(Some(_)));
        let sd = plane_section_degree(&surface, &plane, &rank).ok();
        (Some(single), sd)
    };
    if let Some(s) = single {
        checks.push(Check {
            id: "single_circle_section",
            passed: s,
            detail: String::new(),
        });
    }
    if d > 1 {
        checks.push(Check {
            id: "section_degree",
            passed: section_degree == Some(d),
            detail: format!("{section_degree:?} vs surface degree {d}"),
        });
    }
    let class = match d {
        1 => Some(QuadricClass::Plane),
        2 => Some(classify_quadric(&surface, &rank)?),
        _ => None,
    };
    let expected = matches!(
        class,
        Some(QuadricClass::Plane | QuadricClass::OneSheetedHyperboloid | QuadricClass::QuadraticCone | QuadricClass::EllipticCylinder)
    );
    let consistent = checks.iter().all(|c| c.passed) && expected;
    Ok(ClassificationReport {
        planes_parallel: parallel,
        single_circle_section: single,
        surface_degree: d,
        section_degree,
        quadric_class: class,
        consistent,
        fitted: surface,
        residuals: Residuals {
            implicit_fit: fit.residual,
            circle_fit,
            line_fit,
        },
        checks,
    })
}

/// Topological type of the surface carrying the families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Genus<T: Real = f64> {
    /// Sphere-like: every two closed curves meet evenly.
    Zero,
    /// Torus of revolution about `Oz` with the given core radius.
    One { major_radius: T },
}

fn family_classes<T: Real>(families: &[CurveFamily<T>], genus: Genus<T>, tol: T) -> Result<Vec<TorusClass>> {
    match genus {
        Genus::Zero => Ok(vec![TorusClass::ZERO; families.len()]),
        Genus::One { major_radius } => {
            let chart = TorusChart { major_radius };
            families
                .iter()
                .map(|f| homology_class_mod2(&f.curves[0].points, |p| chart.chart(p), tol))
                .collect()
        }
    }
}

/// Two circles of the given families meeting at two points, transversally
/// at the first of them.
fn transversal_pair<T: Real>(a: &[Circle3<T>], b: &[Circle3<T>], tol: T) -> Option<(Circle3<T>, Circle3<T>, Point3<T>)> {
    a.iter().find_map(|ca| {
        b.iter().find_map(|cb| match intersect_circles(ca, cb, tol * ca.radius().max(cb.radius())) {
            CircleIntersection::Two(p, _) if transversal_at(ca, cb, p, tol.sqrt()).unwrap_or(false) => Some((*ca, *cb, p)),
            _ => None,
        })
    })
}

/// Outcome of [`takeuchi_pipeline`].
#[derive(Debug, Clone, PartialEq)]
pub enum TakeuchiVerdict<T: Real = f64> {
    Sphere(Sphere<T>),
    InsufficientFamilies { found: usize },
    OffSphere { max_distance: T },
    /// The two transversal circles span a plane rather than a sphere.
    Planar,
}

/// With at least seven circle families, picks three that pair evenly,
/// builds the sphere through two transversal circles of different families
/// and checks every surface sample against it.
pub fn takeuchi_pipeline<T: Real>(
    families: &[CurveFamily<T>],
    genus: Genus<T>,
    surface_samples: &[Point3<T>],
    tol: T,
) -> Result<TakeuchiVerdict<T>> {
    if families.len() < TAKEUCHI_FAMILIES {
        return Ok(TakeuchiVerdict::InsufficientFamilies { found: families.len() });
    }
    let fitted: Vec<Vec<Circle3<T>>> = families.iter().map(|f| f.fit_circles(tol)).collect::<Result<_>>()?;
    let classes = family_classes(families, genus, tol)?;
    let chosen: Vec<usize> = select_even_subfamily(&classes).into_iter().take(3).collect();
    let mut found = None;
    'outer: for (k, &i) in chosen.iter().enumerate() {
        for &j in &chosen[k + 1..] {
            if let Some(pair) = transversal_pair(&fitted[i], &fitted[j], tol) {
                found = Some(pair);
                break 'outer;
            }
        }
    }
    let (a, b, _) = found.ok_or(Error::NoGenericPoint)?;
    let sphere = match cospherical(&a, &b, tol) {
        Some(Spherical::Sphere(s)) => s,
        Some(Spherical::Plane(_)) => return Ok(TakeuchiVerdict::Planar),
        None => return Err(Error::NoGenericPoint),
    };
    let max_distance = surface_samples
        .par_iter()
        .map(|&p| sphere.distance_to(p))
        .reduce(T::zero, T::max);
    if max_distance > tol * sphere.radius {
        return Ok(TakeuchiVerdict::OffSphere { max_distance });
    }
    Ok(TakeuchiVerdict::Sphere(sphere))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FourFamiliesVerdict {
    CyclideConfirmed,
    CosphericalPairFound,
    Inconclusive,
}

/// Outcome of [`four_families_pipeline`] with its evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct FourFamiliesReport<T: Real = f64> {
    pub verdict: FourFamiliesVerdict,
    /// Families whose circles were found cospherical.
    pub pair: Option<(usize, usize)>,
    pub common: Option<Spherical<T>>,
    pub reason: String,
}

/// Looks for two evenly pairing families with cospherical circles through
/// a transversal point, then confirms with the cyclide recognizer when a
/// polynomial is supplied.
pub fn four_families_pipeline<T: Real>(
    families: &[CurveFamily<T>],
    genus: Genus<T>,
    surface: Option<&ImplicitSurface<T>>,
    tol: T,
) -> Result<FourFamiliesReport<T>> {
    if families.len() < 4 {
        return Err(Error::Invalid(format!("need 4 circle families, got {}", families.len())));
    }
    let fitted: Vec<Vec<Circle3<T>>> = families.iter().map(|f| f.fit_circles(tol)).collect::<Result<_>>()?;
    let classes = family_classes(families, genus, tol)?;
    let mut hit = None;
    'outer: for i in 0..families.len() {
        for j in i + 1..families.len() {
            if intersection_parity(classes[i], classes[j]) != 0 {
                continue;
            }
            if let Some((a, b, _)) = transversal_pair(&fitted[i], &fitted[j], tol) {
                if let Some(s) = cospherical(&a, &b, tol) {
                    hit = Some(((i, j), s));
                    break 'outer;
                }
            }
        }
    }
    let Some((pair, common)) = hit else {
        return Ok(FourFamiliesReport {
            verdict: FourFamiliesVerdict::Inconclusive,
            pair: None,
            common: None,
            reason: "no evenly pairing families with cospherical transversal circles".into(),
        });
    };
    let (verdict, reason) = match surface {
        None => (FourFamiliesVerdict::CosphericalPairFound, "no polynomial supplied".to_string()),
        Some(s) => match is_darboux_cyclide(s, &Tolerance::default()) {
            Ok(Some(_)) => (FourFamiliesVerdict::CyclideConfirmed, "polynomial matches the cyclide form".to_string()),
            Ok(None) => (FourFamiliesVerdict::Inconclusive, "polynomial is not of the cyclide form".to_string()),
            Err(e) => (FourFamiliesVerdict::Inconclusive, e.to_string()),
        },
    };
    Ok(FourFamiliesReport {
        verdict,
        pair: Some(pair),
        common: Some(common),
        reason,
    })
}
