use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cyclide(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclide"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(p: impl AsRef<Path>) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn write_circle(dir: &Path, name: &str, center: [f64; 3], radius: f64, normal: [f64; 3]) -> String {
    let p = dir.join(name);
    fs::write(&p, serde_json::json!({ "center": center, "radius": radius, "normal": normal }).to_string()).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn analyze_hyperboloid_fixtures() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&cyclide(d.path(), &["gallery", "hyperboloid"])), 0);
    let s = d.path().join("surface.json");
    let f = d.path().join("families.json");
    let o = cyclide(d.path(), &["analyze", s.to_str().unwrap(), f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(d.path().join("report.json"));
    assert_eq!(r["class"], "OneSheetedHyperboloid");
    assert_eq!(r["consistent"], true);
}

#[test]
fn analyze_example4_has_no_line_family() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&cyclide(d.path(), &["gallery", "example4"])), 0);
    let s = d.path().join("surface.json");
    let f = d.path().join("families.json");
    let o = cyclide(d.path(), &["analyze", s.to_str().unwrap(), f.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(d.path().join("report.json"))["reason"], "NoLineFamily");
}

#[test]
fn analyze_truncated_json() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("bad.json");
    fs::write(&p, "{\"terms\": [{\"coef\": 1").unwrap();
    let o = cyclide(d.path(), &["analyze", p.to_str().unwrap(), p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn analyze_is_byte_deterministic_with_noise() {
    let d = tempfile::tempdir().unwrap();
    cyclide(d.path(), &["gallery", "cylinder"]);
    let s = d.path().join("surface.json");
    let f = d.path().join("families.json");
    let run = || {
        cyclide(d.path(), &["analyze", s.to_str().unwrap(), f.to_str().unwrap(), "--noise", "1e-13", "--seed", "7", "--abs-tol", "1e-8"]);
        fs::read(d.path().join("report.json")).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn gallery_example5_and_torus() {
    let d = tempfile::tempdir().unwrap();
    let o = cyclide(d.path(), &["gallery", "example5"]);
    assert_eq!(code(&o), 0);
    let r = json(d.path().join("report.json"));
    let lines = r["checks"].as_array().unwrap().iter().filter(|c| c["id"] == "contains_line" && c["passed"] == true).count();
    assert_eq!(lines, 4);
    for f in ["surface.json", "families.json", "mesh.obj"] {
        assert!(d.path().join(f).exists(), "{f}");
    }

    let t = tempfile::tempdir().unwrap();
    assert_eq!(code(&cyclide(t.path(), &["gallery", "torus", "--R", "2", "--r", "1"])), 0);
    let r = json(t.path().join("report.json"));
    assert_eq!(r["circles"].as_array().unwrap().len(), 4);
    assert_eq!(r["all_pass"], true);
    assert_eq!(code(&cyclide(t.path(), &["gallery", "torus", "--R", "1", "--r", "1"])), 2);
}

#[test]
fn gallery_unknown_and_list() {
    let d = tempfile::tempdir().unwrap();
    let o = cyclide(d.path(), &["gallery", "nosuch"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("example5"));
    let o = cyclide(d.path(), &["gallery", "list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 11);
}

#[test]
fn darboux_surface_and_points() {
    let d = tempfile::tempdir().unwrap();
    let s = d.path().join("q.json");
    fs::write(&s, r#"{"terms":[{"coef":1,"pow":[2,0,0]},{"coef":1,"pow":[0,2,0]},{"coef":-1,"pow":[0,0,2]},{"coef":-1,"pow":[0,0,0]}]}"#).unwrap();
    let o = cyclide(d.path(), &["darboux", s.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(d.path().join("darboux.json"))["cyclide"], "yes");

    let p = d.path().join("p.csv");
    fs::write(&p, "x,y,z\n0,0,3\n").unwrap();
    let o = cyclide(d.path(), &["darboux", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mapped = fs::read_to_string(d.path().join("mapped.csv")).unwrap();
    let row: Vec<f64> = mapped.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[..2], [0.0, 0.0]);
    assert!((row[2] - 0.6).abs() < 1e-15);

    assert_eq!(code(&cyclide(d.path(), &["darboux", p.to_str().unwrap(), "--inverse"])), 2);
    let q = d.path().join("q.csv");
    fs::write(&q, "x,y,z\n0,0,0.6\n").unwrap();
    assert_eq!(code(&cyclide(d.path(), &["darboux", q.to_str().unwrap(), "--inverse", "--branch", "outside"])), 0);
    let back = fs::read_to_string(d.path().join("mapped.csv")).unwrap();
    let z: f64 = back.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((z - 3.0).abs() < 1e-12);
}

#[test]
fn lines_meeting_hyperboloid_circles() {
    let d = tempfile::tempdir().unwrap();
    let s2 = 2f64.sqrt();
    let a = write_circle(d.path(), "a.json", [0.0, 0.0, -1.0], s2, [0.0, 0.0, 1.0]);
    let b = write_circle(d.path(), "b.json", [0.0, 0.0, 0.0], 1.0, [0.0, 0.0, 1.0]);
    let c = write_circle(d.path(), "c.json", [0.0, 0.0, 1.0], s2, [0.0, 0.0, 1.0]);
    let o = cyclide(d.path(), &["lines-meeting", &a, &b, &c]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(d.path().join("lines.json"));
    assert_eq!(r["isolated"], true);
    for l in r["lines"].as_array().unwrap() {
        let p: Vec<f64> = l["affine"]["point"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        let v: Vec<f64> = l["affine"]["dir"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        for t in [-1.0, 0.5, 2.0] {
            let q: Vec<f64> = (0..3).map(|k| p[k] + t * v[k]).collect();
            let f = q[0] * q[0] + q[1] * q[1] - q[2] * q[2] - 1.0;
            assert!(f.abs() <= 1e-8 * (1.0 + q.iter().map(|x| x * x).sum::<f64>()));
        }
    }
}

#[test]
fn lines_meeting_coplanar_and_identical() {
    let d = tempfile::tempdir().unwrap();
    let a = write_circle(d.path(), "a.json", [0.0, 0.0, 0.0], 1.0, [0.0, 0.0, 1.0]);
    let b = write_circle(d.path(), "b.json", [0.0, 0.0, 0.0], 2.0, [0.0, 0.0, 1.0]);
    let c = write_circle(d.path(), "c.json", [0.0, 0.0, 0.0], 3.0, [0.0, 0.0, 1.0]);
    let o = cyclide(d.path(), &["lines-meeting", &a, &b, &c]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(d.path().join("lines.json"))["notice"], "NonIsolatedFamily");
    assert_eq!(code(&cyclide(d.path(), &["lines-meeting", &a, &a, &c])), 2);
}

#[test]
fn takeuchi_commands() {
    let d = tempfile::tempdir().unwrap();
    cyclide(d.path(), &["gallery", "sphere"]);
    let f = d.path().join("families.json");
    let o = cyclide(d.path(), &["takeuchi", f.to_str().unwrap(), "--genus", "0"]);
    assert_eq!(code(&o), 0);
    let v = json(d.path().join("verdict.json"));
    assert_eq!(v["verdict"], "Sphere");
    assert!((v["sphere"]["radius"].as_f64().unwrap() - 1.0).abs() <= 1e-9);

    let t = tempfile::tempdir().unwrap();
    cyclide(t.path(), &["gallery", "torus"]);
    let tf = t.path().join("families.json");
    let o = cyclide(t.path(), &["takeuchi", tf.to_str().unwrap(), "--genus", "1", "--major-radius", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(t.path().join("verdict.json"))["verdict"], "InsufficientFamilies");
    let ts = t.path().join("surface.json");
    let o = cyclide(t.path(), &["four-families", tf.to_str().unwrap(), "--genus", "1", "--major-radius", "2", "--surface", ts.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(t.path().join("verdict.json"))["verdict"], "CyclideConfirmed");

    let e = t.path().join("empty.json");
    fs::write(&e, "[]").unwrap();
    assert_eq!(code(&cyclide(t.path(), &["takeuchi", e.to_str().unwrap(), "--genus", "0"])), 2);
}

#[test]
fn config_validation() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&cyclide(d.path(), &["gallery", "plane", "--samples", "4"])), 2);
    assert_eq!(code(&cyclide(d.path(), &["gallery", "plane", "--abs-tol", "-1"])), 2);
    assert_eq!(code(&cyclide(d.path(), &["nosuchcommand"])), 2);
}
