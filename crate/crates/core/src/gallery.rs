//! Canonical surfaces with their circle and line families, and verifiers
//! that re-check each advertised property. Double precision only.

use std::f64::consts::{PI, TAU};

use crate::circles::{classify_isotropic, Circle3, IsotropicClass};
use crate::error::{Error, Result};
use crate::families::{homology_class_mod2, planes_parallel, Check, CurveFamily, FamilyCurve, FamilyKind, TorusChart, TorusClass};
use crate::geom::{Line3, Plane, Point3, Vec3};
use crate::mesh::Mesh;
use crate::implicit::{
    contains_circle, contains_line, is_darboux_cyclide, is_isotropic_cyclide, section_is_single_circle, ImplicitSurface, QuadricClass,
};
use crate::pluecker::{line_through, PluckerLine};
use crate::poly::{HomogeneousPoly, MultiPoly};
use crate::projective::HPoint4;
use crate::scalar::{Cplx, Tolerance};
use crate::section::plane_section;

/// Samples per circle in gallery families.
pub const CIRCLE_SAMPLES: usize = 48;
/// Samples per line segment in gallery families.
pub const LINE_SAMPLES: usize = 17;

/// Names accepted by [`entry`], in listing order.
pub const NAMES: [&str; 11] = [
    "example1",
    "example4",
    "example5",
    "example6",
    "torus",
    "hyperboloid",
    "cone",
    "cylinder",
    "elliptic-cylinder",
    "plane",
    "sphere",
];

/// Sampled planar curves in a family that is neither lines nor circles.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    pub name: String,
    pub curves: Vec<FamilyCurve>,
}

/// A rational complex parametrization `(s, t) ↦ x:y:z:w` with its implicit
/// equation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSurface {
    pub implicit: HomogeneousPoly,
}

impl ComplexSurface {
    /// `(t²−1 : i(t²−1−2st) : s(t²+1) : s(t²−1)+4t)`.
    pub fn eval(&self, s: f64, t: f64) -> HPoint4 {
        let re = |v: f64| Cplx::new(v, 0.0);
        HPoint4 {
            coords: [
                re(t * t - 1.0),
                Cplx::new(0.0, t * t - 1.0 - 2.0 * s * t),
                re(s * (t * t + 1.0)),
                re(s * (t * t - 1.0) + 4.0 * t),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntryKind {
    Example1,
    Example4,
    Example5,
    Example6,
    Torus { major: f64, minor: f64 },
    Quadric(QuadricClass),
    /// Unit sphere with seven families of great circles.
    GreatCircles,
}

/// A surface with its families and the verdicts its verifier expects.
#[derive(Debug, Clone, PartialEq)]
pub struct GalleryEntry {
    pub name: String,
    pub description: String,
    pub kind: EntryKind,
    pub surface: Option<ImplicitSurface>,
    pub complex: Option<ComplexSurface>,
    pub families: Vec<(String, CurveFamily)>,
    pub isotropic: Vec<CurveSet>,
    /// Distinguished lines on the surface.
    pub lines: Vec<Line3>,
    /// Distinguished circles (for the torus: the four through one point).
    pub circles: Vec<Circle3>,
    pub expected: Vec<String>,
}

impl GalleryEntry {
    fn new(name: &str, description: &str, kind: EntryKind) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            kind,
            surface: None,
            complex: None,
            families: Vec::new(),
            isotropic: Vec::new(),
            lines: Vec::new(),
            circles: Vec::new(),
            expected: Vec::new(),
        }
    }

    pub fn family(&self, name: &str) -> Option<&CurveFamily> {
        self.families.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// All family sample points.
    pub fn samples(&self) -> Vec<Point3> {
        self.families.iter().flat_map(|(_, f)| f.points()).collect()
    }

    /// Triangulated patch of the real surface; `None` for the complex
    /// example.
    pub fn mesh(&self) -> Option<Mesh> {
        let ladder = |name: &str| self.family(name).and_then(|f| Mesh::ladder(f, f.kind == FamilyKind::Circles));
        match self.kind {
            EntryKind::Example1 => None,
            EntryKind::Example4 => ladder("y-sections+"),
            EntryKind::Example5 => ladder("z-sections"),
            EntryKind::Example6 => {
                let g = linspace(-1.5, 1.5, 31);
                Some(Mesh::grid(31, 31, false, false, |i, j| example6_point(g[i], g[j])))
            }
            EntryKind::Torus { major, minor } => {
                let (u, v) = (angles(64), angles(32));
                Some(Mesh::grid(64, 32, true, true, |i, j| torus_point(major, minor, u[i], v[j])))
            }
            EntryKind::GreatCircles => {
                let (lat, lon) = (linspace(-PI / 2.0, PI / 2.0, 17), angles(32));
                Some(Mesh::grid(17, 32, false, true, |i, j| {
                    Point3::new(lat[i].cos() * lon[j].cos(), lat[i].cos() * lon[j].sin(), lat[i].sin())
                }))
            }
            EntryKind::Quadric(_) => ladder("rulings").or_else(|| ladder("lines")),
        }
    }

    /// Runs the entry's checks.
    pub fn verify(&self) -> Vec<Check> {
        match self.kind {
            EntryKind::Example1 => verify_example1(self),
            EntryKind::Example4 => verify_example4(self),
            EntryKind::Example5 => verify_example5(self),
            EntryKind::Example6 => verify_example6(self),
            EntryKind::Torus { .. } => verify_torus(self),
            EntryKind::Quadric(class) => verify_quadric(self, class),
            EntryKind::GreatCircles => verify_great_circles(self),
        }
    }
}

/// Looks up an entry by name; the torus uses `R = 2, r = 1`.
pub fn entry(name: &str) -> Option<GalleryEntry> {
    Some(match name {
        "example1" => example1(),
        "example4" => example4(),
        "example5" => example5(),
        "example6" => example6(),
        "torus" => torus_entry(2.0, 1.0).ok()?,
        "hyperboloid" => hyperboloid(),
        "cone" => cone(),
        "cylinder" => cylinder(),
        "elliptic-cylinder" => elliptic_cylinder(),
        "plane" => plane(),
        "sphere" => sphere_great_circles(),
        _ => return None,
    })
}

fn poly(terms: &[([u32; 3], f64)]) -> MultiPoly {
    MultiPoly::from_terms(terms.iter().copied()).expect("gallery degrees are small")
}

fn circle(center: [f64; 3], radius: f64, normal: [f64; 3]) -> Circle3 {
    Circle3::new(Point3::from_array(center), radius, Vec3::from_array(normal)).expect("gallery circle")
}

fn check(id: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        id,
        passed,
        detail: detail.into(),
    }
}

fn circle_family(members: Vec<(f64, Circle3)>) -> CurveFamily {
    CurveFamily::from_circles(&members, CIRCLE_SAMPLES).expect("non-empty")
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

fn sphere_poly() -> MultiPoly {
    poly(&[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0)])
}

// ---------------------------------------------------------------- example 1

/// Complex surface `(x²+y²+z²)² + ((x+iy)² − z²)w² = 0`, covered by complex
/// lines `t = const` and complex conics `s = const`.
pub fn example1() -> GalleryEntry {
    let r = |v: f64| Cplx::new(v, 0.0);
    let terms = vec![
        ([4, 0, 0, 0], r(1.0)),
        ([0, 4, 0, 0], r(1.0)),
        ([0, 0, 4, 0], r(1.0)),
        ([2, 2, 0, 0], r(2.0)),
        ([2, 0, 2, 0], r(2.0)),
        ([0, 2, 2, 0], r(2.0)),
        ([2, 0, 0, 2], r(1.0)),
        ([1, 1, 0, 2], Cplx::new(0.0, 2.0)),
        ([0, 2, 0, 2], r(-1.0)),
        ([0, 0, 2, 2], r(-1.0)),
    ];
    let implicit = HomogeneousPoly::new(4, terms).expect("quartic");
    let mut e = GalleryEntry::new(
        "example1",
        "complex quartic (x²+y²+z²)² + ((x+iy)² − z²)w² with lines t=const and conics s=const",
        EntryKind::Example1,
    );
    e.complex = Some(ComplexSurface { implicit });
    e.expected = vec![
        "implicit residual ≤ 1e-10 on a 10×10 grid".into(),
        "t = const curves are lines".into(),
        "s = const curves are planar".into(),
    ];
    e
}

/// Largest relative deviation of `pts[3..]` from the plane of `pts[..3]`.
fn coplanarity_residual(pts: &[HPoint4]) -> f64 {
    // plane covector = generalized cross product of the first three points
    let m: Vec<[Cplx<f64>; 4]> = pts[..3].iter().map(|p| p.coords).collect();
    let minor = |cols: [usize; 3]| {
        let a = |r: usize, c: usize| m[r][cols[c]];
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    };
    let plane = [
        minor([1, 2, 3]),
        -minor([0, 2, 3]),
        minor([0, 1, 3]),
        -minor([0, 1, 2]),
    ];
    let pn = plane.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    pts[3..]
        .iter()
        .map(|p| {
            let d: Cplx<f64> = (0..4).map(|i| plane[i] * p.coords[i]).sum();
            d.norm() / (pn * p.norm())
        })
        .fold(0.0, f64::max)
}

fn verify_example1(e: &GalleryEntry) -> Vec<Check> {
    let Some(cs) = &e.complex else {
        return vec![check("parametrization", false, "missing")];
    };
    let grid = linspace(-2.0, 2.0, 10);
    let worst = grid
        .iter()
        .flat_map(|&s| grid.iter().map(move |&t| (s, t)))
        .map(|(s, t)| cs.implicit.relative_residual(&cs.eval(s, t)))
        .fold(0.0, f64::max);
    let mut out = vec![check("implicit_on_grid", worst <= 1e-10, format!("max residual {worst:e}"))];

    let mut line_worst: f64 = 0.0;
    for &t in &grid {
        let pts: Vec<HPoint4> = [0.0, 1.0, 2.0].iter().map(|&s| cs.eval(s, t)).collect();
        let r = line_through(&pts[0], &pts[1]).map_or(f64::INFINITY, |l| l.incidence_residual(&pts[2]));
        line_worst = line_worst.max(r);
    }
    out.push(check("t_curves_are_lines", line_worst <= 1e-10, format!("max rank residual {line_worst:e}")));

    let mut plane_worst: f64 = 0.0;
    for &s in &grid {
        let pts: Vec<HPoint4> = [-1.5, -0.5, 0.3, 1.1, 2.0].iter().map(|&t| cs.eval(s, t)).collect();
        plane_worst = plane_worst.max(coplanarity_residual(&pts));
    }
    out.push(check("s_curves_are_planar", plane_worst <= 1e-10, format!("max coplanarity residual {plane_worst:e}")));
    out
}

// ---------------------------------------------------------------- example 4

pub fn example4_poly() -> MultiPoly {
    let s3 = sphere_poly() + MultiPoly::constant(3.0);
    s3.mul(&s3).expect("quartic") - poly(&[([0, 2, 2], 4.0), ([2, 0, 0], 16.0), ([0, 2, 0], 12.0)])
}

/// The circle of the `y = c` section centred at `x = sign·√(4−c²)`.
pub fn example4_y_circle(c: f64, sign: f64) -> Circle3 {
    circle([sign * (4.0 - c * c).sqrt(), c, 0.0], 1.0, [0.0, 1.0, 0.0])
}

/// The circle of the `z = c` section centred at `x = sign·√(1−c²)`.
pub fn example4_z_circle(c: f64, sign: f64) -> Circle3 {
    circle([sign * (1.0 - c * c).sqrt(), 0.0, c], 2.0, [0.0, 0.0, 1.0])
}

/// Quartic `(x²+y²+z²+3)² − 4y²z² − 16x² − 12y² = 0`, covered by two
/// families of circles (in the planes `y = const` and `z = const`) without
/// being a cyclide.
pub fn example4() -> GalleryEntry {
    let mut e = GalleryEntry::new(
        "example4",
        "quartic with two circle families (y=const, z=const) that is not a cyclide",
        EntryKind::Example4,
    );
    e.surface = Some(ImplicitSurface::named(example4_poly(), "example4").expect("nonzero"));
    let ys = linspace(-1.5, 1.5, 13);
    let zs = linspace(-0.9, 0.9, 13);
    for (name, sign) in [("y-sections+", 1.0), ("y-sections-", -1.0)] {
        e.families.push((name.into(), circle_family(ys.iter().map(|&c| (c, example4_y_circle(c, sign))).collect())));
    }
    for (name, sign) in [("z-sections+", 1.0), ("z-sections-", -1.0)] {
        e.families.push((name.into(), circle_family(zs.iter().map(|&c| (c, example4_z_circle(c, sign))).collect())));
    }
    e.expected = vec![
        "y=const and z=const sections are pairs of circles".into(),
        "not a Darboux cyclide".into(),
        "degree 4".into(),
    ];
    e
}

/// Fits the branches of a sampled section against known circles. Points
/// within `margin` of two circles are dropped.
fn match_section_circles(
    s: &ImplicitSurface,
    pl: &Plane,
    expected: &[Circle3],
    margin: f64,
) -> Result<f64> {
    let sec = plane_section(s, pl, &Tolerance::default())?;
    let mut groups: Vec<Vec<Point3>> = vec![Vec::new(); expected.len()];
    for p in sec.points() {
        let d: Vec<f64> = expected.iter().map(|c| c.distance_to(p)).collect();
        let (k, best) = d.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &v)| if v < b.1 { (i, v) } else { b });
        let ambiguous = d.iter().enumerate().any(|(i, &v)| i != k && v < margin);
        if !ambiguous && best < margin {
            groups[k].push(p);
        }
    }
    let mut worst: f64 = 0.0;
    for (g, c) in groups.iter().zip(expected) {
        let fit = crate::circles::fit_circle(g)?;
        let err = fit
            .circle
            .center()
            .distance(c.center())
            .max((fit.circle.radius() - c.radius()).abs())
            .max(fit.circle.normal().cross(c.normal()).norm());
        worst = worst.max(err);
    }
    Ok(worst)
}

fn verify_example4(e: &GalleryEntry) -> Vec<Check> {
    let s = e.surface.as_ref().expect("surface");
    let tol = Tolerance::default();
    let mut out = vec![check("degree", s.degree() == 4, format!("{}", s.degree()))];
    let mut worst: f64 = 0.0;
    let mut failure = None;
    for c in [0.0, 0.9, -1.3] {
        let want = [example4_y_circle(c, 1.0), example4_y_circle(c, -1.0)];
        match match_section_circles(s, &Plane::axis(1, c), &want, 0.05) {
            Ok(w) => worst = worst.max(w),
            Err(err) => failure = Some(err.to_string()),
        }
    }
    for c in [0.0, 0.5, -0.7] {
        let want = [example4_z_circle(c, 1.0), example4_z_circle(c, -1.0)];
        match match_section_circles(s, &Plane::axis(2, c), &want, 0.05) {
            Ok(w) => worst = worst.max(w),
            Err(err) => failure = Some(err.to_string()),
        }
    }
    out.push(check(
        "section_circle_fits",
        failure.is_none() && worst <= 1e-6,
        failure.unwrap_or_else(|| format!("max deviation {worst:e}")),
    ));
    let all_on = e
        .families
        .iter()
        .all(|(_, f)| f.fit_circles(1e-9).is_ok_and(|cs| cs.iter().all(|c| contains_circle(s, c, 1e-10))));
    out.push(check("family_circles_on_surface", all_on, ""));
    let not_cyclide = matches!(is_darboux_cyclide(s, &tol), Ok(None));
    out.push(check("not_a_cyclide", not_cyclide, ""));
    out
}

// ---------------------------------------------------------------- example 5

pub fn example5_poly() -> MultiPoly {
    let a = poly(&[([2, 0, 0], 1.0), ([0, 0, 2], -1.0)]).mul(&poly(&[([0, 0, 1], 3.0), ([0, 0, 0], -2.0)]));
    let b = poly(&[([0, 1, 0], 1.0), ([0, 0, 1], -1.0)]).mul(&poly(&[([0, 1, 1], 3.0), ([0, 1, 0], -2.0), ([0, 0, 1], -4.0), ([0, 0, 0], 2.0)]));
    a.expect("cubic") + b.expect("cubic")
}

/// The four lines `(t,t,t)`, `(−t,t,t)`, `(t,1−t,2t)`, `(−t,1−t,2t)`.
pub fn example5_lines() -> [Line3; 4] {
    [
        Line3::new(Point3::zero(), Vec3::new(1.0, 1.0, 1.0)),
        Line3::new(Point3::zero(), Vec3::new(-1.0, 1.0, 1.0)),
        Line3::new(Point3::new(0.0, 1.0, 0.0), Vec3::new(1.0, -1.0, 2.0)),
        Line3::new(Point3::new(0.0, 1.0, 0.0), Vec3::new(-1.0, -1.0, 2.0)),
    ]
}

/// Circle of the `z = c` section, `c ≠ 2/3`:
/// `(3c−2)(x²+y²) + (2−2c−3c²)y + 4c² − 2c − c²(3c−2) = 0`.
pub fn example5_circle(c: f64) -> Option<Circle3> {
    let a = 3.0 * c - 2.0;
    let b = 2.0 - 2.0 * c - 3.0 * c * c;
    let k = 4.0 * c * c - 2.0 * c - c * c * a;
    if a.abs() < 1e-12 {
        return None;
    }
    let cy = -b / (2.0 * a);
    let r2 = cy * cy - k / a;
    (r2 > 0.0).then(|| circle([0.0, cy, c], r2.sqrt(), [0.0, 0.0, 1.0]))
}

/// Heights of the gallery's `z = const` circles on the cubic.
pub const EXAMPLE5_HEIGHTS: [f64; 6] = [-0.5, 0.0, 0.25, 0.5, 1.0, 1.5];

/// Cubic `(x²−z²)(3z−2) + (y−z)(3yz−2y−4z+2) = 0`: one family of circles in
/// the planes `z = const` and exactly four lines.
pub fn example5() -> GalleryEntry {
    let mut e = GalleryEntry::new(
        "example5",
        "cubic with one family of circles (z=const) and four lines",
        EntryKind::Example5,
    );
    e.surface = Some(ImplicitSurface::named(example5_poly(), "example5").expect("nonzero"));
    let members = EXAMPLE5_HEIGHTS.iter().map(|&c| (c, example5_circle(c).expect("real circle"))).collect();
    e.families.push(("z-sections".into(), circle_family(members)));
    e.lines = example5_lines().to_vec();
    e.expected = vec![
        "contains l1..l4".into(),
        "z=const circle planes are parallel".into(),
        "z=1/2 section is a single circle".into(),
        "degree 3".into(),
    ];
    e
}

fn verify_example5(e: &GalleryEntry) -> Vec<Check> {
    let s = e.surface.as_ref().expect("surface");
    let mut out = vec![check("degree", s.degree() == 3, format!("{}", s.degree()))];
    for (k, l) in e.lines.iter().enumerate() {
        out.push(check("contains_line", contains_line(s, l, 1e-12), format!("l{}", k + 1)));
    }
    let fam = e.family("z-sections").expect("family");
    out.push(check("parallel_planes", planes_parallel(fam, 1e-9).unwrap_or(false), ""));
    let sec = section_is_single_circle(s, &Plane::axis(2, 0.5), &Tolerance::default(), 1e-6);
    let detail;
    let ok = match sec {
        Ok(Some(c)) => {
            let want = example5_circle(0.5).expect("circle");
            let residual = c.samples(64, 0.0).iter().map(|&p| s.relative_residual(p)).fold(0.0, f64::max);
            detail = format!("radius {:.12}, containment residual {residual:e}", c.radius());
            residual <= 1e-9 && c.approx_eq(&want, 1e-9)
        }
        other => {
            detail = format!("{other:?}");
            false
        }
    };
    out.push(check("single_circle_section", ok, detail));
    out
}

// ---------------------------------------------------------------- example 6

pub fn example6_poly() -> MultiPoly {
    poly(&[([0, 0, 1], 1.0), ([1, 2, 0], -1.0), ([2, 1, 0], 1.0)])
}

/// Graph of `z = xy(y−x)` over the given `(x, y)` points.
fn example6_point(x: f64, y: f64) -> Point3 {
    Point3::new(x, y, x * y * (y - x))
}

/// Section of `z = xy(y−x)` by `x = c`, `y = c` or `y − x = c`, sampled.
pub fn example6_section(which: usize, c: f64, n: usize) -> Vec<Point3> {
    linspace(-1.5, 1.5, n)
        .into_iter()
        .map(|s| match which {
            0 => example6_point(c, s),
            1 => example6_point(s, c),
            _ => example6_point(s, s + c),
        })
        .collect()
}

/// Cubic graph `z = xy(y−x)`, covered by three families of isotropic
/// circles (vertical parabolas) without being an isotropic cyclide.
pub fn example6() -> GalleryEntry {
    let mut e = GalleryEntry::new(
        "example6",
        "cubic graph z = xy(y−x) with three families of isotropic circles",
        EntryKind::Example6,
    );
    e.surface = Some(ImplicitSurface::named(example6_poly(), "example6").expect("nonzero"));
    let params = [-1.0, -0.5, 0.0, 0.5, 1.0];
    for (k, name) in ["x=const", "y=const", "y-x=const"].into_iter().enumerate() {
        e.isotropic.push(CurveSet {
            name: name.into(),
            curves: params
                .iter()
                .map(|&c| FamilyCurve {
                    param: c,
                    points: example6_section(k, c, 15),
                })
                .collect(),
        });
    }
    e.expected = vec![
        "every nonzero section is a vertical parabola".into(),
        "the zero member is a line (degenerate)".into(),
        "not an isotropic cyclide".into(),
    ];
    e
}

fn verify_example6(e: &GalleryEntry) -> Vec<Check> {
    let s = e.surface.as_ref().expect("surface");
    let on = e
        .isotropic
        .iter()
        .flat_map(|set| set.curves.iter().flat_map(|c| c.points.iter()))
        .map(|&p| s.eval(p).abs())
        .fold(0.0, f64::max);
    let mut out = vec![check("sections_on_surface", on <= 1e-12, format!("max |f| {on:e}"))];
    for set in &e.isotropic {
        for c in &set.curves {
            let got = classify_isotropic(&c.points, 1e-9);
            let ok = if c.param == 0.0 {
                got == Err(Error::DegenerateConic)
            } else {
                got == Ok(IsotropicClass::VerticalParabola)
            };
            out.push(check("isotropic_section", ok, format!("{} c={}: {got:?}", set.name, c.param)));
        }
    }
    out.push(check(
        "not_an_isotropic_cyclide",
        matches!(is_isotropic_cyclide(s, &Tolerance::default()), Ok(None)),
        "",
    ));
    out
}

// ---------------------------------------------------------------- torus

pub fn torus_poly(big: f64, small: f64) -> MultiPoly {
    let s = sphere_poly() + MultiPoly::constant(big * big - small * small);
    s.mul(&s).expect("quartic") - poly(&[([2, 0, 0], 4.0 * big * big), ([0, 2, 0], 4.0 * big * big)])
}

/// Torus point at longitude `u` and tube angle `v`.
pub fn torus_point(big: f64, small: f64, u: f64, v: f64) -> Point3 {
    let rho = big + small * v.cos();
    Point3::new(rho * u.cos(), rho * u.sin(), small * v.sin())
}

pub fn torus_parallel(big: f64, small: f64, v: f64) -> Circle3 {
    circle([0.0, 0.0, small * v.sin()], big + small * v.cos(), [0.0, 0.0, 1.0])
}

pub fn torus_meridian(big: f64, small: f64, u: f64) -> Circle3 {
    circle([big * u.cos(), big * u.sin(), 0.0], small, [-u.sin(), u.cos(), 0.0])
}

fn rotate_z(p: Vec3, a: f64) -> Vec3 {
    Vec3::new(p.x * a.cos() - p.y * a.sin(), p.x * a.sin() + p.y * a.cos(), p.z)
}

/// Villarceau circle of the first (`side = 1`) or mirrored (`side = -1`)
/// family, rotated by `angle` about `Oz`. Unrotated: centre `(0, side·r, 0)`,
/// radius `R`, normal `(−r/R, 0, √(R²−r²)/R)`.
pub fn torus_villarceau(big: f64, small: f64, side: f64, angle: f64) -> Circle3 {
    let c = rotate_z(Vec3::new(0.0, side * small, 0.0), angle);
    let n = rotate_z(Vec3::new(-small / big, 0.0, (big * big - small * small).sqrt() / big), angle);
    Circle3::new(c, big, n).expect("villarceau")
}

/// Rotation angle placing a Villarceau circle through `p`.
fn villarceau_through(big: f64, small: f64, side: f64, p: Point3) -> f64 {
    let chart = TorusChart { major_radius: big };
    let (up, vp) = chart.chart(p);
    let base = torus_villarceau(big, small, side, 0.0);
    let f = |t: f64| {
        let d = chart.chart(base.point_at(t)).1 - vp;
        (d + PI).rem_euclid(TAU) - PI
    };
    // v winds once along the circle, so f has a sign change of small size
    let n = 720;
    let mut hit = 0.0;
    for k in 0..n {
        let (a, b) = (TAU * k as f64 / n as f64, TAU * (k + 1) as f64 / n as f64);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            hit = a;
            break;
        }
        if fa.signum() != fb.signum() && (fa - fb).abs() < 1.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if f(lo).signum() == f(mid).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hit = 0.5 * (lo + hi);
            break;
        }
    }
    up - chart.chart(base.point_at(hit)).0
}

/// Parameters of the generic point used by [`torus_entry`].
pub const TORUS_GENERIC_UV: (f64, f64) = (0.3, 0.7);

/// Torus of revolution with core radius `R` and tube radius `r`, its four
/// circle families, and the four circles through one generic point.
pub fn torus_entry(big: f64, small: f64) -> Result<GalleryEntry> {
    if !(big > small && small > 0.0) {
        return Err(Error::SelfIntersectingTorus { major: big, minor: small });
    }
    let mut e = GalleryEntry::new("torus", "torus of revolution: parallels, meridians and two Villarceau families", EntryKind::Torus { major: big, minor: small });
    e.name = if (big, small) == (2.0, 1.0) { "torus".into() } else { format!("torus(R={big},r={small})") };
    e.surface = Some(ImplicitSurface::named(torus_poly(big, small), e.name.clone())?);
    let k = angles(12);
    e.families.push(("parallels".into(), circle_family(k.iter().map(|&v| (v, torus_parallel(big, small, v))).collect())));
    e.families.push(("meridians".into(), circle_family(k.iter().map(|&u| (u, torus_meridian(big, small, u))).collect())));
    e.families.push(("villarceau+".into(), circle_family(k.iter().map(|&a| (a, torus_villarceau(big, small, 1.0, a))).collect())));
    e.families.push(("villarceau-".into(), circle_family(k.iter().map(|&a| (a, torus_villarceau(big, small, -1.0, a))).collect())));
    let (u, v) = TORUS_GENERIC_UV;
    let p = torus_point(big, small, u, v);
    e.circles = vec![
        torus_meridian(big, small, u),
        torus_parallel(big, small, v),
        torus_villarceau(big, small, 1.0, villarceau_through(big, small, 1.0, p)),
        torus_villarceau(big, small, -1.0, villarceau_through(big, small, -1.0, p)),
    ];
    e.expected = vec![
        "four distinct circles through a generic point, all on the surface".into(),
        "homology classes (0,1), (1,0), (1,1), (1,1)".into(),
        "Darboux cyclide with a = 1".into(),
    ];
    Ok(e)
}

fn verify_torus(e: &GalleryEntry) -> Vec<Check> {
    let EntryKind::Torus { major, minor } = e.kind else { unreachable!() };
    let s = e.surface.as_ref().expect("surface");
    let (u, v) = TORUS_GENERIC_UV;
    let p = torus_point(major, minor, u, v);
    let chart = TorusChart { major_radius: major };
    let mut out = Vec::new();
    let through = e.circles.iter().all(|c| c.distance_to(p) <= 1e-9);
    out.push(check("circles_through_generic_point", through, format!("{:?}", p.to_array())));
    let on = e.circles.iter().all(|c| contains_circle(s, c, 1e-10));
    out.push(check("circles_on_surface", on, ""));
    let distinct = (0..4).all(|i| (i + 1..4).all(|j| !e.circles[i].approx_eq(&e.circles[j], 1e-6)));
    out.push(check("four_distinct_circles", distinct && e.circles.len() == 4, format!("{}", e.circles.len())));
    let want = [TorusClass::new(0, 1), TorusClass::new(1, 0), TorusClass::new(1, 1), TorusClass::new(1, 1)];
    let classes: Vec<_> = e
        .circles
        .iter()
        .map(|c| homology_class_mod2(&c.samples(200, 0.0), |q| chart.chart(q), 1e-9))
        .collect();
    let ok = classes.iter().zip(&want).all(|(g, w)| g.as_ref() == Ok(w));
    out.push(check("homology_classes", ok, format!("{classes:?}")));
    let form = is_darboux_cyclide(s, &Tolerance::default());
    out.push(check("darboux_cyclide", matches!(&form, Ok(Some(f)) if f.a == 1.0), ""));
    out
}

// ---------------------------------------------------------------- quadrics

fn quadric_entry(name: &str, description: &str, class: QuadricClass, p: MultiPoly) -> GalleryEntry {
    let mut e = GalleryEntry::new(name, description, EntryKind::Quadric(class));
    e.surface = Some(ImplicitSurface::named(p, name).expect("nonzero"));
    e.expected = vec![format!("classified as {class:?}")];
    e
}

/// `x² + y² − z² = 1` with both ruling families and `z = const` circles.
pub fn hyperboloid() -> GalleryEntry {
    let mut e = quadric_entry(
        "hyperboloid",
        "one-sheeted hyperboloid x²+y²−z²=1 with rulings and z=const circles",
        QuadricClass::OneSheetedHyperboloid,
        poly(&[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], -1.0), ([0, 0, 0], -1.0)]),
    );
    let ruling = |th: f64, side: f64| Line3::new(Point3::new(th.cos(), th.sin(), 0.0), Vec3::new(-side * th.sin(), side * th.cos(), 1.0));
    let k = angles(16);
    let lines: Vec<(f64, Line3)> = k.iter().map(|&t| (t, ruling(t, 1.0))).collect();
    e.families.push(("rulings".into(), CurveFamily::from_lines(&lines, 1.5, LINE_SAMPLES).expect("lines")));
    let other: Vec<(f64, Line3)> = k.iter().map(|&t| (t, ruling(t, -1.0))).collect();
    e.families.push(("rulings-other".into(), CurveFamily::from_lines(&other, 1.5, LINE_SAMPLES).expect("lines")));
    let zs = linspace(-1.5, 1.5, 7);
    e.families.push(("z-circles".into(), circle_family(zs.iter().map(|&c| (c, circle([0.0, 0.0, c], (1.0 + c * c).sqrt(), [0.0, 0.0, 1.0]))).collect())));
    e
}

/// Cone `x² + y² = z²` with rulings and `z = const` circles.
pub fn cone() -> GalleryEntry {
    let mut e = quadric_entry(
        "cone",
        "circular cone x²+y²=z² with rulings and z=const circles",
        QuadricClass::QuadraticCone,
        poly(&[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], -1.0)]),
    );
    let lines: Vec<(f64, Line3)> = angles(16)
        .into_iter()
        .map(|t| (t, Line3::new(Point3::zero(), Vec3::new(t.cos(), t.sin(), 1.0))))
        .collect();
    e.families.push(("rulings".into(), CurveFamily::from_lines(&lines, 1.5, LINE_SAMPLES).expect("lines")));
    let zs = [-1.5, -1.0, -0.5, 0.5, 1.0, 1.5];
    e.families.push(("z-circles".into(), circle_family(zs.iter().map(|&c| (c, circle([0.0, 0.0, c], c.abs(), [0.0, 0.0, 1.0]))).collect())));
    e
}

/// Circular cylinder `x² + y² = 1` with vertical lines and circles.
pub fn cylinder() -> GalleryEntry {
    let mut e = quadric_entry(
        "cylinder",
        "circular cylinder x²+y²=1 with vertical lines and z=const circles",
        QuadricClass::EllipticCylinder,
        poly(&[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 0], -1.0)]),
    );
    let lines: Vec<(f64, Line3)> = angles(16)
        .into_iter()
        .map(|t| (t, Line3::new(Point3::new(t.cos(), t.sin(), 0.0), Vec3::unit_z())))
        .collect();
    e.families.push(("rulings".into(), CurveFamily::from_lines(&lines, 1.5, LINE_SAMPLES).expect("lines")));
    let zs = linspace(-1.5, 1.5, 7);
    e.families.push(("z-circles".into(), circle_family(zs.iter().map(|&c| (c, circle([0.0, 0.0, c], 1.0, [0.0, 0.0, 1.0]))).collect())));
    e
}

/// Elliptic cylinder `x² + 2y² = 1`; its horizontal sections are ellipses,
/// so the "circle" family is deliberately not one.
pub fn elliptic_cylinder() -> GalleryEntry {
    let mut e = quadric_entry(
        "elliptic-cylinder",
        "elliptic cylinder x²+2y²=1; z=const sections are ellipses, not circles",
        QuadricClass::EllipticCylinder,
        poly(&[([2, 0, 0], 1.0), ([0, 2, 0], 2.0), ([0, 0, 0], -1.0)]),
    );
    let sq = 0.5f64.sqrt();
    let lines: Vec<(f64, Line3)> = angles(16)
        .into_iter()
        .map(|t| (t, Line3::new(Point3::new(t.cos(), sq * t.sin(), 0.0), Vec3::unit_z())))
        .collect();
    e.families.push(("rulings".into(), CurveFamily::from_lines(&lines, 1.5, LINE_SAMPLES).expect("lines")));
    let curves = linspace(-1.5, 1.5, 7)
        .into_iter()
        .map(|c| FamilyCurve {
            param: c,
            points: angles(CIRCLE_SAMPLES).into_iter().map(|t| Point3::new(t.cos(), sq * t.sin(), c)).collect(),
        })
        .collect();
    e.families.push(("z-ellipses".into(), CurveFamily::new(FamilyKind::Circles, curves).expect("curves")));
    e.expected.push("z=const family fails the circle fit".into());
    e
}

/// The plane `z = 0` with a pencil of lines and concentric circles.
pub fn plane() -> GalleryEntry {
    let mut e = quadric_entry("plane", "the plane z=0 with lines and circles", QuadricClass::Plane, poly(&[([0, 0, 1], 1.0)]));
    let lines: Vec<(f64, Line3)> = linspace(-1.0, 1.0, 9)
        .into_iter()
        .map(|c| (c, Line3::new(Point3::new(c, 0.0, 0.0), Vec3::unit_y())))
        .collect();
    e.families.push(("lines".into(), CurveFamily::from_lines(&lines, 1.5, LINE_SAMPLES).expect("lines")));
    e.families.push(("circles".into(), circle_family([0.5, 1.0, 1.5].iter().map(|&r| (r, circle([0.0, 0.0, 0.0], r, [0.0, 0.0, 1.0]))).collect())));
    e
}

/// Unit vectors used as the seven rotation axes of [`sphere_great_circles`].
pub fn great_circle_axes() -> [Vec3; 7] {
    let n = |x: f64, y: f64, z: f64| Vec3::new(x, y, z).normalized().expect("nonzero");
    [
        n(1.0, 0.0, 0.0),
        n(0.0, 1.0, 0.0),
        n(0.0, 0.0, 1.0),
        n(1.0, 1.0, 1.0),
        n(1.0, -1.0, 0.5),
        n(-0.3, 1.0, 2.0),
        n(2.0, 0.7, -1.0),
    ]
}

/// Great circles through `±axis`, parametrized by the rotation angle of
/// their plane about the axis.
pub fn great_circle_family(axis: Vec3, members: usize) -> CurveFamily {
    let (e1, e2) = crate::geom::frame(axis);
    let cs = (0..members)
        .map(|k| {
            let a = PI * k as f64 / members as f64;
            let normal = e1 * a.cos() + e2 * a.sin();
            (a, Circle3::new(Point3::zero(), 1.0, normal).expect("unit normal"))
        })
        .collect();
    circle_family(cs)
}

/// Unit sphere carrying seven families of great circles.
pub fn sphere_great_circles() -> GalleryEntry {
    let mut e = quadric_entry(
        "sphere",
        "unit sphere with seven families of great circles",
        QuadricClass::Sphere,
        sphere_poly() - MultiPoly::constant(1.0),
    );
    e.kind = EntryKind::GreatCircles;
    for (k, a) in great_circle_axes().into_iter().enumerate() {
        e.families.push((format!("great-circles-{k}"), great_circle_family(a, 6)));
    }
    e.expected.push("seven circle families recover the unit sphere".into());
    e
}

fn verify_quadric(e: &GalleryEntry, class: QuadricClass) -> Vec<Check> {
    let s = e.surface.as_ref().expect("surface");
    let mut out = Vec::new();
    let got = crate::implicit::classify_quadric(s, &Tolerance::default());
    out.push(check("quadric_class", got == Ok(class), format!("{got:?}")));
    for (name, f) in &e.families {
        let on = match f.kind {
            FamilyKind::Lines => f.fit_lines(1e-9).is_ok_and(|ls| ls.iter().all(|l| contains_line(s, l, 1e-10))),
            FamilyKind::Circles => match f.fit_circles(1e-9) {
                Ok(cs) => cs.iter().all(|c| contains_circle(s, c, 1e-10)),
                // the elliptic cylinder's sections are meant to fail
                Err(_) => name == "z-ellipses",
            },
        };
        out.push(check("family_on_surface", on, name.clone()));
    }
    out
}

fn verify_great_circles(e: &GalleryEntry) -> Vec<Check> {
    let mut out = verify_quadric(e, QuadricClass::Sphere);
    let samples = e.samples();
    let r = crate::families::takeuchi_pipeline(
        &e.families.iter().map(|(_, f)| f.clone()).collect::<Vec<_>>(),
        crate::families::Genus::Zero,
        &samples,
        1e-9,
    );
    let ok = matches!(&r, Ok(crate::families::TakeuchiVerdict::Sphere(s)) if s.center.norm() <= 1e-9 && (s.radius - 1.0).abs() <= 1e-9);
    out.push(check("sphere_from_seven_families", ok, format!("{r:?}")));
    out
}

/// Plücker coordinates of a real affine line.
pub fn plucker_of(l: &Line3) -> PluckerLine {
    line_through(&HPoint4::affine(l.point), &HPoint4::affine(l.at(1.0))).expect("nonzero direction")
}
