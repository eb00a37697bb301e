//! Line and circle geometry on algebraic surfaces.
//!
//! Plücker lines, circle and sphere fitting, implicit quadric and cyclide
//! recognition, the Darboux transformation and torus parity bookkeeping.
//! Everything is generic over [`scalar::Real`]; the aliases below fix the
//! scalar to `f64` or `f32`.

pub mod circles;
pub mod darboux;
pub mod error;
pub mod families;
pub mod gallery;
pub mod geom;
pub mod implicit;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod pluecker;
pub mod poly;
pub mod projective;
pub mod scalar;
pub mod section;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Point3 = geom::Point3<f64>;
pub type Vec3 = geom::Vec3<f64>;
pub type Plane = geom::Plane<f64>;
pub type Line3 = geom::Line3<f64>;
pub type HPoint4 = projective::HPoint4<f64>;
pub type MultiPoly = poly::MultiPoly<f64>;
pub type HomogeneousPoly = poly::HomogeneousPoly<f64>;
pub type Tolerance = scalar::Tolerance<f64>;
pub type PluckerLine = pluecker::PluckerLine<f64>;
pub type Circle3 = circles::Circle3<f64>;
pub type Sphere = circles::Sphere<f64>;
pub type ImplicitSurface = implicit::ImplicitSurface<f64>;
pub type CurveFamily = families::CurveFamily<f64>;

pub type Point3f = geom::Point3<f32>;
pub type Vec3f = geom::Vec3<f32>;
pub type Planef = geom::Plane<f32>;
pub type Line3f = geom::Line3<f32>;
pub type HPoint4f = projective::HPoint4<f32>;
pub type MultiPolyf = poly::MultiPoly<f32>;
pub type Tolerancef = scalar::Tolerance<f32>;
pub type PluckerLinef = pluecker::PluckerLine<f32>;
pub type Circle3f = circles::Circle3<f32>;
pub type Spheref = circles::Sphere<f32>;
pub type ImplicitSurfacef = implicit::ImplicitSurface<f32>;
pub type CurveFamilyf = families::CurveFamily<f32>;
