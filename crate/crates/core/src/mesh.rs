//! Triangle meshes over uniform parameter grids and ASCII OBJ output.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::families::CurveFamily;
use crate::geom::Point3;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh<T: Real = f64> {
    pub vertices: Vec<Point3<T>>,
    /// Zero-based vertex indices.
    pub faces: Vec<[usize; 3]>,
}

impl<T: Real> Mesh<T> {
    /// Grid of `nu × nv` vertices `f(i, j)`; wrapping directions are
    /// stitched back to the first row or column.
    pub fn grid(nu: usize, nv: usize, wrap_u: bool, wrap_v: bool, f: impl Fn(usize, usize) -> Point3<T>) -> Self {
        let mut vertices = Vec::with_capacity(nu * nv);
        for i in 0..nu {
            for j in 0..nv {
                vertices.push(f(i, j));
            }
        }
        let idx = |i: usize, j: usize| (i % nu) * nv + (j % nv);
        let (eu, ev) = (if wrap_u { nu } else { nu.saturating_sub(1) }, if wrap_v { nv } else { nv.saturating_sub(1) });
        let mut faces = Vec::with_capacity(2 * eu * ev);
        for i in 0..eu {
            for j in 0..ev {
                let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            }
        }
        Self { vertices, faces }
    }

    /// Strip between consecutive curves of a family. Curves must share a
    /// sample count; circle families are closed along each curve.
    pub fn ladder(family: &CurveFamily<T>, closed_curves: bool) -> Option<Self> {
        let n = family.curves.first()?.points.len();
        if family.curves.iter().any(|c| c.points.len() != n) {
            return None;
        }
        let rows = family.curves.len();
        Some(Self::grid(rows, n, false, closed_curves, |i, j| family.curves[i].points[j]))
    }

    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "v {} {} {}", v.x, v.y, v.z);
        }
        for f in &self.faces {
            let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        s
    }

    pub fn write_obj(&self, mut w: impl Write) -> io::Result<()> {
        w.write_all(self.to_obj().as_bytes())
    }
}
