//! JSON and CSV interchange for surfaces, circles, families and lines.
//!
//! Surface: `{"name": "...", "terms": [{"coef": c, "pow": [i, j, k]}]}`.
//! Circle: `{"center": [x,y,z], "radius": r, "normal": [x,y,z]}`.
//! Family: `{"kind": "lines"|"circles", "curves": [{"param": t, "points": [[x,y,z], ...]}]}`.
//! Families file: a bare array of families or `{"families": [...]}`.
//! Plücker line: six reals or six `[re, im]` pairs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::circles::{Circle3, Sphere, Spherical};
use crate::error::{Error, Result};
use crate::families::{Check, ClassificationReport, CurveFamily, FamilyCurve, FamilyKind, FourFamiliesReport, TakeuchiVerdict};
use crate::geom::{Line3, Point3, Vec3};
use crate::implicit::ImplicitSurface;
use crate::pluecker::{LineSample, PluckerLine};
use crate::poly::MultiPoly;
use crate::scalar::Cplx;

#[derive(Debug, Serialize, Deserialize)]
struct TermJson {
    coef: f64,
    pow: [u32; 3],
}

#[derive(Debug, Serialize, Deserialize)]
struct SurfaceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    terms: Vec<TermJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CircleJson {
    center: [f64; 3],
    radius: f64,
    normal: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveJson {
    param: f64,
    points: Vec<[f64; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindJson {
    Lines,
    Circles,
}

#[derive(Debug, Serialize, Deserialize)]
struct FamilyJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    kind: KindJson,
    curves: Vec<CurveJson>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FamiliesFile {
    Bare(Vec<FamilyJson>),
    Wrapped { families: Vec<FamilyJson> },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CoordJson {
    Real(f64),
    Complex([f64; 2]),
}

fn bad(e: impl std::fmt::Display) -> Error {
    Error::Invalid(e.to_string())
}

fn finite3(a: [f64; 3]) -> Result<[f64; 3]> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(a)
    } else {
        Err(Error::Invalid("non-finite coordinate".into()))
    }
}

pub fn poly_to_json(p: &MultiPoly) -> Value {
    let terms: Vec<TermJson> = p.terms().map(|(e, c)| TermJson { coef: c, pow: e }).collect();
    serde_json::to_value(terms).expect("serializable")
}

pub fn surface_to_json(s: &ImplicitSurface) -> Value {
    let mut v = json!({ "terms": poly_to_json(s.poly()) });
    if let Some(n) = &s.name {
        v["name"] = json!(n);
    }
    v
}

pub fn surface_from_json(text: &str) -> Result<ImplicitSurface> {
    let raw: SurfaceJson = serde_json::from_str(text).map_err(bad)?;
    if raw.terms.iter().any(|t| !t.coef.is_finite()) {
        return Err(Error::Invalid("non-finite coefficient".into()));
    }
    let p = MultiPoly::from_terms(raw.terms.into_iter().map(|t| (t.pow, t.coef)))?;
    match raw.name {
        Some(n) => ImplicitSurface::named(p, n),
        None => ImplicitSurface::new(p),
    }
}

pub fn circle_to_json(c: &Circle3) -> Value {
    json!({
        "center": c.center().to_array(),
        "radius": c.radius(),
        "normal": c.normal().to_array(),
    })
}

pub fn circle_from_json(text: &str) -> Result<Circle3> {
    let raw: CircleJson = serde_json::from_str(text).map_err(bad)?;
    circle_from_raw(raw)
}

fn circle_from_raw(raw: CircleJson) -> Result<Circle3> {
    let center = Point3::from_array(finite3(raw.center)?);
    let normal = Vec3::from_array(finite3(raw.normal)?);
    Circle3::new(center, raw.radius, normal).ok_or(Error::Invalid("circle needs a positive radius and nonzero normal".into()))
}

pub fn sphere_to_json(s: &Sphere) -> Value {
    json!({ "center": s.center.to_array(), "radius": s.radius })
}

pub fn spherical_to_json(s: &Spherical) -> Value {
    match s {
        Spherical::Sphere(s) => json!({ "sphere": sphere_to_json(s) }),
        Spherical::Plane(p) => json!({ "plane": { "normal": p.normal().to_array(), "offset": p.offset() } }),
    }
}

pub fn family_to_json(name: Option<&str>, f: &CurveFamily) -> Value {
    let raw = FamilyJson {
        name: name.map(str::to_owned),
        kind: match f.kind {
            FamilyKind::Lines => KindJson::Lines,
            FamilyKind::Circles => KindJson::Circles,
        },
        curves: f
            .curves
            .iter()
            .map(|c| CurveJson {
                param: c.param,
                points: c.points.iter().map(|p| p.to_array()).collect(),
            })
            .collect(),
    };
    serde_json::to_value(raw).expect("serializable")
}

pub fn families_to_json(fs: &[(String, CurveFamily)]) -> Value {
    json!({ "families": fs.iter().map(|(n, f)| family_to_json(Some(n), f)).collect::<Vec<_>>() })
}

/// Parses a families file into named families; unnamed ones get their index.
pub fn families_from_json(text: &str) -> Result<Vec<(String, CurveFamily)>> {
    let raw: FamiliesFile = serde_json::from_str(text).map_err(bad)?;
    let list = match raw {
        FamiliesFile::Bare(v) | FamiliesFile::Wrapped { families: v } => v,
    };
    list.into_iter()
        .enumerate()
        .map(|(i, f)| {
            let curves = f
                .curves
                .into_iter()
                .map(|c| {
                    let points = c.points.into_iter().map(|p| finite3(p).map(Point3::from_array)).collect::<Result<_>>()?;
                    Ok(FamilyCurve { param: c.param, points })
                })
                .collect::<Result<Vec<_>>>()?;
            let kind = match f.kind {
                KindJson::Lines => FamilyKind::Lines,
                KindJson::Circles => FamilyKind::Circles,
            };
            Ok((f.name.unwrap_or_else(|| i.to_string()), CurveFamily::new(kind, curves)?))
        })
        .collect()
}

pub fn plucker_to_json(l: &PluckerLine) -> Value {
    if l.p.iter().all(|c| c.im == 0.0) {
        json!(l.p.iter().map(|c| c.re).collect::<Vec<_>>())
    } else {
        json!(l.p.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
    }
}

pub fn plucker_from_json(text: &str) -> Result<PluckerLine> {
    let raw: Vec<CoordJson> = serde_json::from_str(text).map_err(bad)?;
    if raw.len() != 6 {
        return Err(Error::Invalid(format!("expected 6 Plücker coordinates, got {}", raw.len())));
    }
    let mut p = [Cplx::new(0.0, 0.0); 6];
    for (slot, c) in p.iter_mut().zip(raw) {
        *slot = match c {
            CoordJson::Real(r) => Cplx::new(r, 0.0),
            CoordJson::Complex([re, im]) => Cplx::new(re, im),
        };
    }
    PluckerLine::new(p, 1e-12)
}

pub fn line3_to_json(l: &Line3) -> Value {
    json!({ "point": l.point.to_array(), "dir": l.dir.to_array() })
}

pub fn line_samples_to_json(lines: &[LineSample]) -> Value {
    json!(lines
        .iter()
        .map(|s| json!({
            "plucker": plucker_to_json(&s.line),
            "affine": s.line.to_affine(1e-12).map(|l| line3_to_json(&l)),
            "s": s.s,
            "t": s.t,
        }))
        .collect::<Vec<_>>())
}

pub fn checks_to_json(checks: &[Check]) -> Value {
    json!(checks
        .iter()
        .map(|c| json!({ "id": c.id, "passed": c.passed, "detail": c.detail }))
        .collect::<Vec<_>>())
}

pub fn classification_to_json(r: &ClassificationReport) -> Value {
    json!({
        "consistent": r.consistent,
        "class": r.quadric_class.map(|c| format!("{c:?}")),
        "planes_parallel": r.planes_parallel,
        "single_circle_section": r.single_circle_section,
        "surface_degree": r.surface_degree,
        "section_degree": r.section_degree,
        "fitted": surface_to_json(&r.fitted),
        "residuals": {
            "implicit_fit": r.residuals.implicit_fit,
            "circle_fit": r.residuals.circle_fit,
            "line_fit": r.residuals.line_fit,
        },
        "checks": checks_to_json(&r.checks),
    })
}

pub fn takeuchi_to_json(v: &TakeuchiVerdict) -> Value {
    match v {
        TakeuchiVerdict::Sphere(s) => json!({ "verdict": "Sphere", "sphere": sphere_to_json(s) }),
        TakeuchiVerdict::InsufficientFamilies { found } => json!({ "verdict": "InsufficientFamilies", "found": found }),
        TakeuchiVerdict::OffSphere { max_distance } => json!({ "verdict": "OffSphere", "max_distance": max_distance }),
        TakeuchiVerdict::Planar => json!({ "verdict": "Planar" }),
    }
}

pub fn four_families_to_json(r: &FourFamiliesReport) -> Value {
    json!({
        "verdict": format!("{:?}", r.verdict),
        "pair": r.pair,
        "common": r.common.as_ref().map(spherical_to_json),
        "reason": r.reason,
    })
}

/// `x,y,z` rows with a header.
pub fn points_to_csv(pts: &[Point3]) -> String {
    let mut s = String::from("x,y,z\n");
    for p in pts {
        let _ = writeln!(s, "{},{},{}", p.x, p.y, p.z);
    }
    s
}

/// Reads `x,y,z` rows; a non-numeric first line is taken as the header.
pub fn points_from_csv(text: &str) -> Result<Vec<Point3>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == 3 && v.iter().all(|x| x.is_finite()) => out.push(Point3::new(v[0], v[1], v[2])),
            None if k == 0 => continue,
            _ => return Err(Error::Invalid(format!("line {}: expected x,y,z", k + 1))),
        }
    }
    Ok(out)
}
