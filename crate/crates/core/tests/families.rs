use cyclide_kit::error::Error;
use cyclide_kit::families::*;
use cyclide_kit::gallery;
use cyclide_kit::implicit::QuadricClass;

fn classify(name: &str) -> ClassificationReport {
    let e = gallery::entry(name).unwrap();
    let lines = e.families.iter().find(|(_, f)| f.kind == FamilyKind::Lines).unwrap().1.clone();
    let circles = e.families.iter().find(|(_, f)| f.kind == FamilyKind::Circles).unwrap().1.clone();
    classify_line_circle_surface(&lines, &circles, &e.samples(), 1e-9).unwrap()
}

#[test]
fn line_circle_pipeline_on_the_four_outcomes() {
    for (name, class, degree) in [
        ("hyperboloid", QuadricClass::OneSheetedHyperboloid, 2),
        ("cone", QuadricClass::QuadraticCone, 2),
        ("cylinder", QuadricClass::EllipticCylinder, 2),
        ("plane", QuadricClass::Plane, 1),
    ] {
        let r = classify(name);
        assert!(r.consistent, "{name}: {:?}", r.checks);
        assert_eq!(r.quadric_class, Some(class), "{name}");
        assert_eq!(r.surface_degree, degree, "{name}");
        assert!(r.planes_parallel);
        if degree == 2 {
            assert_eq!(r.single_circle_section, Some(true), "{name}");
            assert_eq!(r.section_degree, Some(2));
        }
    }
}

#[test]
fn ellipses_are_not_a_circle_family() {
    let e = gallery::elliptic_cylinder();
    let f = e.family("z-ellipses").unwrap();
    assert!(matches!(f.fit_circles(1e-9), Err(Error::NotACircleFamily { .. })));
    let lines = e.family("rulings").unwrap();
    assert!(matches!(
        classify_line_circle_surface(lines, f, &e.samples(), 1e-9),
        Err(Error::NotACircleFamily { .. })
    ));
}

#[test]
fn torus_family_classes() {
    let e = gallery::torus_entry(2.0, 1.0).unwrap();
    let chart = TorusChart { major_radius: 2.0 };
    let class_of = |name: &str| {
        let f = e.family(name).unwrap();
        homology_class_mod2(&f.curves[3].points, |p| chart.chart(p), 1e-9).unwrap()
    };
    assert_eq!(class_of("parallels"), TorusClass::new(1, 0));
    assert_eq!(class_of("meridians"), TorusClass::new(0, 1));
    assert_eq!(class_of("villarceau+"), TorusClass::new(1, 1));
    assert_eq!(class_of("villarceau-"), TorusClass::new(1, 1));
}

#[test]
fn undersampled_and_open_loops() {
    let c = gallery::torus_meridian(2.0, 1.0, 0.0);
    let chart = TorusChart { major_radius: 2.0 };
    let few: Vec<_> = [0.0, 0.05, 0.1, std::f64::consts::PI + 0.1].iter().map(|&t| c.point_at(t)).collect();
    assert!(matches!(homology_class_mod2(&few, |p| chart.chart(p), 1e-9), Err(Error::UndersampledLoop { .. })));
    let mut arc = c.samples(64, 0.0);
    arc.truncate(40);
    assert!(matches!(homology_class_mod2(&arc, |p| chart.chart(p), 1e-9), Err(Error::OpenCurve { .. })));
}

#[test]
fn villarceau_families_are_cospherical_meridian_parallel_are_not() {
    let e = gallery::torus_entry(2.0, 1.0).unwrap();
    let va = e.family("villarceau+").unwrap();
    let vb = e.family("villarceau-").unwrap();
    assert!(cospherical_families(va, vb, 1e-9).unwrap());
    let m = e.family("meridians").unwrap();
    let p = e.family("parallels").unwrap();
    assert!(!cospherical_families(m, p, 1e-9).unwrap());
}

#[test]
fn takeuchi_on_great_circles() {
    let e = gallery::sphere_great_circles();
    let fams: Vec<CurveFamily> = e.families.iter().map(|(_, f)| f.clone()).collect();
    match takeuchi_pipeline(&fams, Genus::Zero, &e.samples(), 1e-9).unwrap() {
        TakeuchiVerdict::Sphere(s) => {
            assert!(s.center.norm() <= 1e-9);
            assert!((s.radius - 1.0).abs() <= 1e-9);
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn takeuchi_needs_seven_families() {
    let e = gallery::torus_entry(2.0, 1.0).unwrap();
    let fams: Vec<CurveFamily> = e.families.iter().map(|(_, f)| f.clone()).collect();
    let v = takeuchi_pipeline(&fams, Genus::One { major_radius: 2.0 }, &e.samples(), 1e-9).unwrap();
    assert_eq!(v, TakeuchiVerdict::InsufficientFamilies { found: 4 });
}

#[test]
fn takeuchi_rejects_points_off_the_sphere() {
    let e = gallery::sphere_great_circles();
    let fams: Vec<CurveFamily> = e.families.iter().map(|(_, f)| f.clone()).collect();
    let mut samples = e.samples();
    samples.push(cyclide_kit::geom::Point3::new(0.0, 0.0, 1.5));
    let v = takeuchi_pipeline(&fams, Genus::Zero, &samples, 1e-9).unwrap();
    assert!(matches!(v, TakeuchiVerdict::OffSphere { max_distance } if (max_distance - 0.5).abs() < 1e-9));
}

#[test]
fn four_families_confirms_the_torus() {
    let e = gallery::torus_entry(2.0, 1.0).unwrap();
    let fams: Vec<CurveFamily> = e.families.iter().map(|(_, f)| f.clone()).collect();
    let genus = Genus::One { major_radius: 2.0 };
    let r = four_families_pipeline(&fams, genus, e.surface.as_ref(), 1e-9).unwrap();
    assert_eq!(r.verdict, FourFamiliesVerdict::CyclideConfirmed, "{}", r.reason);
    assert_eq!(r.pair, Some((2, 3)));
    let r = four_families_pipeline(&fams, genus, None, 1e-9).unwrap();
    assert_eq!(r.verdict, FourFamiliesVerdict::CosphericalPairFound);
}

#[test]
fn four_families_without_even_cospherical_pair() {
    let e = gallery::torus_entry(2.0, 1.0).unwrap();
    let fams: Vec<CurveFamily> = ["parallels", "meridians", "villarceau+", "parallels"]
        .iter()
        .map(|n| e.family(n).unwrap().clone())
        .collect();
    let r = four_families_pipeline(&fams, Genus::One { major_radius: 2.0 }, e.surface.as_ref(), 1e-9).unwrap();
    assert_eq!(r.verdict, FourFamiliesVerdict::Inconclusive);
}

#[test]
fn parity_table() {
    let z = TorusClass::ZERO;
    let (a, b, c) = (TorusClass::new(1, 0), TorusClass::new(0, 1), TorusClass::new(1, 1));
    assert_eq!(intersection_parity(a, b), 1);
    assert_eq!(intersection_parity(a, a), 0);
    assert_eq!(intersection_parity(c, c), 0);
    assert_eq!(intersection_parity(a, c), 1);
    assert_eq!(intersection_parity(z, c), 0);
    assert_eq!(select_even_subfamily(&[a, b, c, c, z]), vec![2, 3, 4]);
}
