use thiserror::Error;

/// Errors raised by the geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points are projectively equal; no line through them")]
    DegenerateLine,
    #[error("points are collinear or coincident; no circle through them")]
    DegenerateCircle,
    #[error("conic fit is degenerate")]
    DegenerateConic,
    #[error("not enough points: need at least {needed}, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("samples do not lie in a common plane (residual {residual:e})")]
    NotPlanar { residual: f64 },
    #[error("curves are identical")]
    IdenticalCurves,
    #[error("unsupported curve for this solver: {0}")]
    UnsupportedCurve(&'static str),
    #[error("solutions form a one-parameter family ({distinct} distinct solutions from {seeds} seeds)")]
    NonIsolatedFamily { distinct: usize, seeds: usize },
    #[error("point is not on the circle (distance {distance:e})")]
    NotIncident { distance: f64 },
    #[error("surface has degree {0}, expected at most 2")]
    NotAQuadric(u32),
    #[error("surface has degree {0}, expected at most 4")]
    NotACyclideCandidate(u32),
    #[error("plane is contained in the surface")]
    PlaneInSurface,
    #[error("plane section has no real points")]
    EmptySection,
    #[error("point lies outside the closed unit ball (norm {norm})")]
    OutsideImage { norm: f64 },
    #[error("point has no finite preimage on this branch")]
    NoFinitePreimage,
    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("zero polynomial does not define a surface")]
    ZeroPolynomial,
    #[error("curve {index} is not a circle (fit residual {residual:e})")]
    NotACircleFamily { index: usize, residual: f64 },
    #[error("curve {index} is not a line (collinearity residual {residual:e})")]
    NotALineFamily { index: usize, residual: f64 },
    #[error("family kind mismatch: expected {expected}")]
    WrongFamilyKind { expected: &'static str },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("no line/circle incidence with transversal tangents was found")]
    NoTransversalIncidence,
    #[error("no implicit model of degree at most 4 fits the samples (best residual {residual:e})")]
    NoAlgebraicModel { residual: f64 },
    #[error("loop does not close (gap {gap:e})")]
    OpenCurve { gap: f64 },
    #[error("loop is undersampled: chart step {step} at sample {index}")]
    UndersampledLoop { index: usize, step: f64 },
    #[error("no transversal common point found between the selected families")]
    NoGenericPoint,
    #[error("torus with major radius {major} and minor radius {minor} self-intersects")]
    SelfIntersectingTorus { major: f64, minor: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
