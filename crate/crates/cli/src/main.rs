//! `cyclide`: batch front end over cyclide-kit.
//!
//! Exit codes: 0 confirmed, 1 checks failed, 2 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cyclide_kit::circles::Circle3;
use cyclide_kit::darboux::{darboux_inverse, darboux_map, pullback_implicit, DarbouxBranch};
use cyclide_kit::error::Error;
use cyclide_kit::families::{
    classify_line_circle_surface, four_families_pipeline, takeuchi_pipeline, CurveFamily, FamilyKind, Genus, TakeuchiVerdict,
};
use cyclide_kit::geom::Point3;
use cyclide_kit::implicit::is_darboux_cyclide;
use cyclide_kit::mesh::Mesh;
use cyclide_kit::pluecker::{lines_meeting_three, CurveSampler};
use cyclide_kit::scalar::Tolerance;
use cyclide_kit::{gallery, io};

#[derive(Parser, Debug)]
#[command(name = "cyclide", version, about = "Line and circle geometry on algebraic surfaces")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Absolute residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    abs_tol: f64,
    /// Relative residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-7)]
    rel_tol: f64,
    /// Samples per curve (at least 8).
    #[arg(long, global = true, default_value_t = 64)]
    samples: usize,
    /// Seed for every random perturbation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Also write an OBJ mesh.
    #[arg(long, global = true)]
    mesh: bool,
    /// Also write sampled points as CSV.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a surface carrying a line family and a circle family.
    Analyze {
        surface: PathBuf,
        families: PathBuf,
        /// Uniform noise amplitude added to the samples.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Write a gallery entry and its verification report; `list` names them.
    Gallery {
        name: String,
        /// Torus core radius.
        #[arg(long = "R", default_value_t = 2.0)]
        major: f64,
        /// Torus tube radius.
        #[arg(long = "r", default_value_t = 1.0)]
        minor: f64,
    },
    /// Darboux transform of a surface (JSON) or of points (CSV).
    Darboux {
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
        #[arg(long, value_enum)]
        branch: Option<Branch>,
    },
    /// Lines meeting three circles.
    LinesMeeting { a: PathBuf, b: PathBuf, c: PathBuf },
    /// Sphere recognition from seven or more circle families.
    Takeuchi {
        families: PathBuf,
        #[arg(long, value_parser = ["0", "1"])]
        genus: String,
        /// Torus core radius, required for genus 1.
        #[arg(long)]
        major_radius: Option<f64>,
    },
    /// Cyclide recognition from four circle families.
    FourFamilies {
        families: PathBuf,
        #[arg(long, value_parser = ["0", "1"])]
        genus: String,
        #[arg(long)]
        major_radius: Option<f64>,
        /// Surface to confirm against.
        #[arg(long)]
        surface: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Branch {
    Inside,
    Outside,
}

/// Exit status of a command.
#[derive(Debug)]
enum Failure {
    Checks(String),
    Input(String),
}

type CmdResult = Result<(), Failure>;

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

impl RunConfig {
    fn validate(&self) -> Result<Tolerance, Failure> {
        if self.samples < 8 {
            return Err(Failure::Input(format!("--samples must be at least 8, got {}", self.samples)));
        }
        Tolerance::new(self.abs_tol, self.rel_tol, Tolerance::default().rank_eps)
            .ok_or_else(|| Failure::Input("tolerances must be positive and finite".into()))
    }

    fn write(&self, file: &str, contents: &str) -> Result<PathBuf, Failure> {
        fs::create_dir_all(&self.out).map_err(|e| input(format!("{}: {e}", self.out.display())))?;
        let p = self.out.join(file);
        fs::write(&p, contents).map_err(|e| input(format!("{}: {e}", p.display())))?;
        Ok(p)
    }

    fn write_json(&self, file: &str, v: &Value) -> Result<PathBuf, Failure> {
        let mut s = serde_json::to_string_pretty(v).expect("serializable");
        s.push('\n');
        self.write(file, &s)
    }
}

fn read(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| input(format!("{}: {e}", p.display())))
}

fn genus(g: &str, major: Option<f64>) -> Result<Genus, Failure> {
    match (g, major) {
        ("0", _) => Ok(Genus::Zero),
        ("1", Some(r)) if r > 0.0 && r.is_finite() => Ok(Genus::One { major_radius: r }),
        ("1", _) => Err(Failure::Input("--genus 1 needs a positive --major-radius".into())),
        _ => Err(Failure::Input(format!("unknown genus {g}"))),
    }
}

fn load_families(p: &Path) -> Result<Vec<(String, CurveFamily)>, Failure> {
    let fams = io::families_from_json(&read(p)?).map_err(input)?;
    if fams.is_empty() {
        return Err(Failure::Input("families list is empty".into()));
    }
    Ok(fams)
}

fn cmd_analyze(cfg: &RunConfig, surface: &Path, families: &Path, noise: f64) -> CmdResult {
    let tol = cfg.validate()?;
    let s = io::surface_from_json(&read(surface)?).map_err(input)?;
    let mut fams = load_families(families)?;
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Failure::Input("--noise must be non-negative".into()));
    }
    if noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for (_, f) in &mut fams {
            for c in &mut f.curves {
                for p in &mut c.points {
                    *p += Point3::new(rng.gen_range(-noise..=noise), rng.gen_range(-noise..=noise), rng.gen_range(-noise..=noise));
                }
            }
        }
    }
    let lines = fams.iter().find(|(_, f)| f.kind == FamilyKind::Lines);
    let circles = fams.iter().find(|(_, f)| f.kind == FamilyKind::Circles);
    let samples: Vec<Point3> = fams.iter().flat_map(|(_, f)| f.points()).collect();
    if cfg.csv {
        cfg.write("samples.csv", &io::points_to_csv(&samples))?;
    }
    let fail = |reason: &str, detail: String| -> CmdResult {
        cfg.write_json("report.json", &json!({ "consistent": false, "reason": reason, "detail": detail }))?;
        Err(Failure::Checks(format!("{reason}: {detail}")))
    };
    let (Some((_, lines)), Some((_, circles))) = (lines, circles) else {
        let reason = if lines.is_none() { "NoLineFamily" } else { "NoCircleFamily" };
        return fail(reason, format!("{} families supplied", fams.len()));
    };
    let input_residual = samples.iter().map(|&p| s.relative_residual(p)).fold(0.0, f64::max);
    let report = match classify_line_circle_surface(lines, circles, &samples, tol.abs_eps) {
        Ok(r) => r,
        Err(e) => return fail(error_code(&e), e.to_string()),
    };
    let mut v = io::classification_to_json(&report);
    v["input_surface"] = json!({ "name": s.name, "max_sample_residual": input_residual });
    if cfg.mesh {
        if let Some(m) = Mesh::ladder(circles, true) {
            cfg.write("mesh.obj", &m.to_obj())?;
        }
    }
    cfg.write_json("report.json", &v)?;
    if report.consistent {
        println!("{}", v["class"].as_str().unwrap_or("Plane"));
        Ok(())
    } else {
        Err(Failure::Checks("classification checks failed".into()))
    }
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::NotACircleFamily { .. } => "NotACircleFamily",
        Error::NotALineFamily { .. } => "NotALineFamily",
        Error::NoTransversalIncidence => "NoTransversalIncidence",
        Error::NoAlgebraicModel { .. } => "NoAlgebraicModel",
        Error::NoGenericPoint => "NoGenericPoint",
        Error::NonIsolatedFamily { .. } => "NonIsolatedFamily",
        _ => "Error",
    }
}

fn cmd_gallery(cfg: &RunConfig, name: &str, major: f64, minor: f64) -> CmdResult {
    cfg.validate()?;
    if name == "list" {
        for (n, e) in gallery::NAMES.iter().filter_map(|n| gallery::entry(n).map(|e| (n, e))) {
            println!("{n:<18} {}", e.description);
        }
        return Ok(());
    }
    let entry = if name == "torus" {
        gallery::torus_entry(major, minor).map_err(input)?
    } else {
        gallery::entry(name).ok_or_else(|| Failure::Input(format!("unknown entry {name}; available: {}", gallery::NAMES.join(", "))))?
    };
    if let Some(s) = &entry.surface {
        cfg.write_json("surface.json", &io::surface_to_json(s))?;
    }
    if !entry.families.is_empty() {
        cfg.write_json("families.json", &io::families_to_json(&entry.families))?;
    }
    if let Some(m) = entry.mesh() {
        cfg.write("mesh.obj", &m.to_obj())?;
    }
    if cfg.csv {
        cfg.write("samples.csv", &io::points_to_csv(&entry.samples()))?;
    }
    let checks = entry.verify();
    let all_pass = checks.iter().all(|c| c.passed);
    let report = json!({
        "name": entry.name,
        "description": entry.description,
        "expected": entry.expected,
        "lines": entry.lines.iter().map(io::line3_to_json).collect::<Vec<_>>(),
        "circles": entry.circles.iter().map(io::circle_to_json).collect::<Vec<_>>(),
        "checks": io::checks_to_json(&checks),
        "passed": checks.iter().filter(|c| c.passed).count(),
        "total": checks.len(),
        "all_pass": all_pass,
    });
    cfg.write_json("report.json", &report)?;
    println!("{}: {}/{} checks passed", entry.name, report["passed"], checks.len());
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Checks("gallery verification failed".into()))
    }
}

fn cmd_darboux(cfg: &RunConfig, p: &Path, inverse: bool, branch: Option<Branch>) -> CmdResult {
    let tol = cfg.validate()?;
    let branch = match (inverse, branch) {
        (true, None) => return Err(Failure::Input("--inverse needs --branch inside|outside".into())),
        (_, b) => b.map(|b| match b {
            Branch::Inside => DarbouxBranch::InsideUnitBall,
            Branch::Outside => DarbouxBranch::OutsideUnitBall,
        }),
    };
    let text = read(p)?;
    if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let pts = io::points_from_csv(&text).map_err(input)?;
        let mapped = pts
            .iter()
            .map(|&q| if inverse { darboux_inverse(q, branch.expect("checked")) } else { Ok(darboux_map(q)) })
            .collect::<Result<Vec<_>, _>>()
            .map_err(input)?;
        let csv = io::points_to_csv(&mapped);
        cfg.write("mapped.csv", &csv)?;
        print!("{csv}");
        return Ok(());
    }
    if inverse {
        return Err(Failure::Input("--inverse applies to point sets (CSV) only".into()));
    }
    let s = io::surface_from_json(&text).map_err(input)?;
    let pulled = pullback_implicit(&s).map_err(input)?;
    let form = is_darboux_cyclide(&pulled, &tol).map_err(input)?;
    let verdict = if form.is_some() { "yes" } else { "no" };
    let mut v = json!({ "pullback": io::surface_to_json(&pulled), "cyclide": verdict });
    if let Some(f) = form {
        v["form"] = json!({ "a": f.a, "b": f.b, "c": f.c, "d": f.d, "q": io::poly_to_json(&f.q) });
    }
    cfg.write_json("darboux.json", &v)?;
    println!("cyclide: {verdict}");
    Ok(())
}

fn cmd_lines_meeting(cfg: &RunConfig, paths: [&Path; 3]) -> CmdResult {
    let tol = cfg.validate()?;
    let circles: Vec<Circle3> = paths
        .iter()
        .map(|p| read(p).and_then(|t| io::circle_from_json(&t).map_err(input)))
        .collect::<Result<_, _>>()?;
    let s: Vec<CurveSampler> = circles.iter().map(|&c| CurveSampler::circle(c, cfg.samples)).collect();
    let v = match lines_meeting_three(&s[0], &s[1], &s[2], tol.abs_eps) {
        Ok(lines) => {
            println!("{} lines", lines.len());
            json!({ "isolated": true, "count": lines.len(), "lines": io::line_samples_to_json(&lines) })
        }
        Err(Error::NonIsolatedFamily { distinct, seeds }) => {
            println!("NonIsolatedFamily");
            json!({ "isolated": false, "notice": "NonIsolatedFamily", "distinct": distinct, "seeds": seeds })
        }
        Err(e) => return Err(input(e)),
    };
    cfg.write_json("lines.json", &v)?;
    Ok(())
}

fn cmd_takeuchi(cfg: &RunConfig, families: &Path, g: &str, major: Option<f64>) -> CmdResult {
    let tol = cfg.validate()?;
    let genus = genus(g, major)?;
    let fams: Vec<CurveFamily> = load_families(families)?.into_iter().map(|(_, f)| f).collect();
    let samples: Vec<Point3> = fams.iter().flat_map(|f| f.points()).collect();
    let v = match takeuchi_pipeline(&fams, genus, &samples, tol.abs_eps) {
        Ok(verdict) => verdict,
        Err(e @ (Error::NotACircleFamily { .. } | Error::WrongFamilyKind { .. } | Error::Empty(_))) => return Err(input(e)),
        Err(e) => {
            cfg.write_json("verdict.json", &json!({ "verdict": error_code(&e), "detail": e.to_string() }))?;
            return Err(Failure::Checks(e.to_string()));
        }
    };
    let out = io::takeuchi_to_json(&v);
    cfg.write_json("verdict.json", &out)?;
    println!("{}", out["verdict"].as_str().unwrap_or_default());
    match v {
        TakeuchiVerdict::Sphere(_) => Ok(()),
        _ => Err(Failure::Checks("no sphere recovered".into())),
    }
}

fn cmd_four_families(cfg: &RunConfig, families: &Path, g: &str, major: Option<f64>, surface: Option<&Path>) -> CmdResult {
    let tol = cfg.validate()?;
    let genus = genus(g, major)?;
    let fams: Vec<CurveFamily> = load_families(families)?.into_iter().map(|(_, f)| f).collect();
    let s = surface.map(|p| read(p).and_then(|t| io::surface_from_json(&t).map_err(input))).transpose()?;
    let r = four_families_pipeline(&fams, genus, s.as_ref(), tol.abs_eps).map_err(input)?;
    let out = io::four_families_to_json(&r);
    cfg.write_json("verdict.json", &out)?;
    println!("{:?}", r.verdict);
    match r.verdict {
        cyclide_kit::families::FourFamiliesVerdict::Inconclusive => Err(Failure::Checks(r.reason)),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> CmdResult {
    let cfg = &cli.config;
    match &cli.command {
        Command::Analyze { surface, families, noise } => cmd_analyze(cfg, surface, families, *noise),
        Command::Gallery { name, major, minor } => cmd_gallery(cfg, name, *major, *minor),
        Command::Darboux { input, inverse, branch } => cmd_darboux(cfg, input, *inverse, *branch),
        Command::LinesMeeting { a, b, c } => cmd_lines_meeting(cfg, [a, b, c]),
        Command::Takeuchi { families, genus, major_radius } => cmd_takeuchi(cfg, families, genus, *major_radius),
        Command::FourFamilies {
            families,
            genus,
            major_radius,
            surface,
        } => cmd_four_families(cfg, families, genus, *major_radius, surface.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(m)) => {
            eprintln!("checks failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
