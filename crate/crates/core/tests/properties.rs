use std::f64::consts::TAU;

use proptest::prelude::*;

use cyclide_kit::circles::*;
use cyclide_kit::darboux::*;
use cyclide_kit::families::*;
use cyclide_kit::geom::{frame, Plane, Point3, Vec3};
use cyclide_kit::implicit::*;
use cyclide_kit::pluecker::*;
use cyclide_kit::poly::MultiPoly;
use cyclide_kit::projective::HPoint4;
use cyclide_kit::scalar::Tolerance;

fn coord() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

fn point() -> impl Strategy<Value = Point3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Vec3> {
    (0.0..TAU, -1.0..1.0f64).prop_map(|(phi, z)| {
        let r = (1.0 - z * z).sqrt();
        Vec3::new(r * phi.cos(), r * phi.sin(), z)
    })
}

fn poly(max_degree: u32) -> impl Strategy<Value = MultiPoly> {
    let exps: Vec<[u32; 3]> = (0..=max_degree).flat_map(monomials).collect();
    prop::collection::vec(-1.0..1.0f64, exps.len()).prop_map(move |cs| {
        MultiPoly::from_terms(exps.iter().copied().zip(cs)).unwrap()
    })
}

/// Rotation taking `e_z` to `n`, as columns.
fn rotation(n: Vec3, spin: f64) -> [Vec3; 3] {
    let (a, b) = frame(n);
    let (u, v) = (a * spin.cos() + b * spin.sin(), b * spin.cos() - a * spin.sin());
    [u, v, n]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_matches_finite_differences(p in poly(4), at in point()) {
        let g = p.gradient(at);
        let h = 1e-5;
        for i in 0..3 {
            let mut e = Vec3::zero();
            e = match i { 0 => Vec3::new(h, 0.0, 0.0), 1 => Vec3::new(0.0, h, 0.0), _ => Vec3::new(0.0, 0.0, h) } + e;
            let fd = (p.eval(at + e) - p.eval(at - e)) / (2.0 * h);
            prop_assert!((fd - g[i]).abs() <= 1e-6f64.max(1e-4 * g.norm()));
        }
    }

    #[test]
    fn homogenize_round_trip(p in poly(4)) {
        prop_assert_eq!(p.homogenize().dehomogenize().unwrap(), p);
    }

    #[test]
    fn restriction_does_not_raise_degree(p in poly(3), n in unit(), off in coord()) {
        let pl = Plane::new(n, off).unwrap();
        let (r, _) = p.restrict_to_plane(&pl);
        prop_assert!(r.degree() <= p.degree());
    }

    #[test]
    fn plucker_relation_and_swap(a in point(), b in point()) {
        prop_assume!(a.distance(b) > 1e-3);
        let (ha, hb) = (HPoint4::affine(a), HPoint4::affine(b));
        let l = line_through(&ha, &hb).unwrap();
        prop_assert!(l.relation_residual() <= 1e-12 * l.norm() * l.norm());
        let m = line_through(&hb, &ha).unwrap();
        for k in 0..6 {
            prop_assert_eq!(m.p[k], -l.p[k]);
        }
        prop_assert!(l.projectively_equal(&m, 1e-12));
    }

    #[test]
    fn circle_through_then_fit(c in point(), n in unit(), r in 0.2..3.0f64, t in prop::array::uniform3(0.0..TAU)) {
        let circle = Circle3::new(c, r, n).unwrap();
        let mut ts = t;
        ts.sort_by(f64::total_cmp);
        prop_assume!(ts[1] - ts[0] > 0.3 && ts[2] - ts[1] > 0.3 && TAU - ts[2] + ts[0] > 0.3);
        let [p1, p2, p3] = ts.map(|s| circle.point_at(s));
        let got = circle_through(p1, p2, p3, 1e-12).unwrap();
        let fit = fit_circle(&got.samples(32, 0.0)).unwrap();
        prop_assert!(fit.circle.approx_eq(&circle, 1e-10 * r.max(1.0)));
    }

    #[test]
    fn two_point_intersections_are_cospherical(c in point(), r in 0.5..2.0f64, n1 in unit(), n2 in unit()) {
        prop_assume!(n1.cross(n2).norm() > 0.1);
        // two circles on the sphere (c, r) by planes through c + small offsets
        let sphere = Sphere::new(c, r).unwrap();
        let mk = |n: Vec3, h: f64| Circle3::new(c + n * h, (r * r - h * h).sqrt(), n).unwrap();
        let (a, b) = (mk(n1, 0.1 * r), mk(n2, -0.2 * r));
        if intersect_circles(&a, &b, 1e-9).count() == 2 {
            match cospherical(&a, &b, 1e-9) {
                Some(Spherical::Sphere(s)) => {
                    prop_assert!(s.center.distance(sphere.center) <= 1e-7);
                    prop_assert!((s.radius - r).abs() <= 1e-7);
                }
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }

    #[test]
    fn circular_points_are_conjugate_and_absolute(n in unit(), off in coord()) {
        let pl = Plane::new(n, off).unwrap();
        let (i, j) = circular_points(&pl);
        prop_assert_eq!(i.conj(), j);
        let q: num_complex::Complex<f64> = i.coords[..3].iter().map(|c| c * c).sum();
        prop_assert!(q.norm() <= 1e-15);
        prop_assert_eq!(i.coords[3].norm(), 0.0);
        let along: num_complex::Complex<f64> = (0..3).map(|k| i.coords[k] * n[k]).sum();
        prop_assert!(along.norm() <= 1e-15);
    }

    #[test]
    fn quadric_class_is_rigid_and_scale_invariant(which in 0usize..6, n in unit(), spin in 0.0..TAU, shift in point(), k in 0.1..10.0f64) {
        let canon = [
            ("x² + y² + z² − 1", QuadricClass::Sphere, [1.0, 1.0, 1.0, -1.0]),
            ("x² + 2y² + 3z² − 1", QuadricClass::Ellipsoid, [1.0, 2.0, 3.0, -1.0]),
            ("x² + y² − z² − 1", QuadricClass::OneSheetedHyperboloid, [1.0, 1.0, -1.0, -1.0]),
            ("x² + y² − z² + 1", QuadricClass::TwoSheetedHyperboloid, [1.0, 1.0, -1.0, 1.0]),
            ("x² + y² − z²", QuadricClass::QuadraticCone, [1.0, 1.0, -1.0, 0.0]),
            ("x² + 2y² − 1", QuadricClass::EllipticCylinder, [1.0, 2.0, 0.0, -1.0]),
        ];
        let (_, class, c) = canon[which];
        let p = MultiPoly::from_terms([([2, 0, 0], c[0]), ([0, 2, 0], c[1]), ([0, 0, 2], c[2]), ([0, 0, 0], c[3])]).unwrap();
        let moved = p.compose_affine(shift, rotation(n, spin)).scale(k);
        let s = ImplicitSurface::new(moved.truncated(1e-14)).unwrap();
        prop_assert_eq!(classify_quadric(&s, &Tolerance::default()), Ok(class));
    }

    #[test]
    fn quadrics_are_trivial_cyclides(p in poly(2)) {
        prop_assume!(p.degree() == 2);
        let s = ImplicitSurface::new(p.clone()).unwrap();
        for form in [is_darboux_cyclide(&s, &Tolerance::default()), is_isotropic_cyclide(&s, &Tolerance::default())] {
            let f = form.unwrap().unwrap();
            prop_assert_eq!((f.a, f.b, f.c, f.d), (0.0, 0.0, 0.0, 0.0));
            prop_assert!((f.reassemble() - p.clone()).coeff_norm() <= 1e-7 * p.coeff_norm());
        }
    }

    #[test]
    fn pullback_of_quadric_is_a_cyclide(p in poly(2)) {
        prop_assume!(p.degree() == 2);
        let s = ImplicitSurface::new(p).unwrap();
        let pulled = pullback_implicit(&s).unwrap();
        let f = is_darboux_cyclide(&pulled, &Tolerance::default()).unwrap().unwrap();
        prop_assert!((f.reassemble() - pulled.poly().clone()).coeff_norm() <= 1e-9 * pulled.poly().coeff_norm());
    }

    #[test]
    fn circle_containment_ignores_phase(phase in 0.0..TAU, c in prop::sample::select(vec![0.0, 0.7, 2.1])) {
        let torus = ImplicitSurface::new(cyclide_kit::gallery::torus_poly(2.0, 1.0)).unwrap();
        let circ = cyclide_kit::gallery::torus_villarceau(2.0, 1.0, 1.0, c);
        prop_assert!(contains_circle_at(&torus, &circ, 1e-10, phase));
        let off = Circle3::new(circ.center(), 2.05, circ.normal()).unwrap();
        prop_assert!(!contains_circle_at(&torus, &off, 1e-10, phase));
    }

    #[test]
    fn darboux_fixes_unit_sphere(n in unit()) {
        // n is unit only to rounding, so equality is up to a few ulps
        prop_assert!(darboux_map(n).distance(n) <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn darboux_two_to_one(p in point()) {
        let r2 = p.norm_squared();
        prop_assume!(r2 > 1e-2);
        let q = darboux_map(p);
        let q2 = darboux_map(p / r2);
        prop_assert!(q.distance(q2) <= 1e-13 * q.norm().max(1.0));
    }

    #[test]
    fn orthogonal_circles_map_to_lines(n in unit(), d in unit(), t in 0.2..3.0f64) {
        // circle in a plane through the origin, centre at distance t·… with |c|² = r² + 1
        let dir = n.cross(d);
        prop_assume!(dir.norm() > 0.1);
        let dir = dir.normalized().unwrap();
        let (r, dist) = (t, (t * t + 1.0).sqrt());
        let c = Circle3::new(dir * dist, r, n).unwrap();
        prop_assert!(orthogonal_to_unit_sphere(&c, 1e-9));
        prop_assert!(maps_circle_to_line(&c, 1e-9));
    }

    #[test]
    fn parity_symmetric_bilinear(a in (0i64..2, 0i64..2), b in (0i64..2, 0i64..2), c in (0i64..2, 0i64..2)) {
        let (a, b, c) = (TorusClass::new(a.0, a.1), TorusClass::new(b.0, b.1), TorusClass::new(c.0, c.1));
        prop_assert_eq!(intersection_parity(a, b), intersection_parity(b, a));
        let sum = TorusClass::new((a.p + b.p) as i64, (a.q + b.q) as i64);
        prop_assert_eq!(intersection_parity(sum, c), (intersection_parity(a, c) + intersection_parity(b, c)) % 2);
    }

    #[test]
    fn even_subfamily_bounds(raw in prop::collection::vec((0i64..4, 0i64..4), 1..13)) {
        let classes: Vec<TorusClass> = raw.iter().map(|&(p, q)| TorusClass::new(p, q)).collect();
        let sel = select_even_subfamily(&classes);
        prop_assert!(sel.len() >= classes.len().div_ceil(3));
        for &i in &sel {
            for &j in &sel {
                prop_assert_eq!(intersection_parity(classes[i], classes[j]), 0);
            }
        }
    }

    #[test]
    fn homology_class_reparametrization_invariant(u0 in 0.0..TAU, shift in 0usize..64, phase in 0.0..TAU, which in 0usize..4) {
        let circ = match which {
            0 => cyclide_kit::gallery::torus_meridian(2.0, 1.0, u0),
            1 => cyclide_kit::gallery::torus_parallel(2.0, 1.0, u0),
            2 => cyclide_kit::gallery::torus_villarceau(2.0, 1.0, 1.0, u0),
            _ => cyclide_kit::gallery::torus_villarceau(2.0, 1.0, -1.0, u0),
        };
        let chart = TorusChart { major_radius: 2.0 };
        let base = homology_class_mod2(&circ.samples(64, 0.0), |p| chart.chart(p), 1e-9).unwrap();
        let mut pts = circ.samples(64, phase);
        pts.rotate_left(shift);
        prop_assert_eq!(homology_class_mod2(&pts, |p| chart.chart(p), 1e-9).unwrap(), base);
        pts.reverse();
        prop_assert_eq!(homology_class_mod2(&pts, |p| chart.chart(p), 1e-9).unwrap(), base);
    }
}

#[test]
fn darboux_fixes_exact_unit_vectors() {
    for p in [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.6, 0.8], [0.36, 0.48, 0.8]] {
        let p = Point3::from_array(p);
        assert_eq!(darboux_map(p), p);
    }
}

#[test]
fn lines_on_hyperboloid_meet_every_parallel_circle() {
    let circle = |z: f64| CurveSampler::circle(Circle3::new(Point3::new(0.0, 0.0, z), (1.0 + z * z).sqrt(), Vec3::unit_z()).unwrap(), 64);
    let lines = lines_meeting_three(&circle(-1.0), &circle(0.0), &circle(1.0), 1e-10).unwrap();
    assert!(!lines.is_empty());
    for z in [-2.0f64, -0.5, 0.3, 1.7] {
        let c = Circle3::new(Point3::new(0.0, 0.0, z), (1.0 + z * z).sqrt(), Vec3::unit_z()).unwrap();
        for l in &lines {
            let a = l.line.to_affine(1e-12).unwrap();
            let t = (z - a.point.z) / a.dir.z;
            assert!(c.distance_to(a.at(t)) <= 1e-8);
        }
    }
}
