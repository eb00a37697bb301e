//! Real plane sections by marching squares in the plane chart.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Plane, PlaneChart, Point3};
use crate::implicit::{restrict_checked, ImplicitSurface};
use crate::poly::MultiPoly;
use crate::scalar::{Real, Tolerance};

/// Cells per side of the marching grid.
pub const GRID: usize = 512;
/// Largest half-width of the chart window.
pub const MAX_HALF_WIDTH: f64 = 1024.0;

/// One connected polyline of the section.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch<T: Real = f64> {
    /// Chart coordinates, in walking order.
    pub uv: Vec<(T, T)>,
    pub points: Vec<Point3<T>>,
    pub closed: bool,
}

/// Sampled real section of a surface by a plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Section<T: Real = f64> {
    pub chart: PlaneChart<T>,
    /// Half-width of the square chart window that was marched.
    pub half_width: T,
    /// Whether some branch leaves the window.
    pub touches_border: bool,
    pub branches: Vec<Branch<T>>,
}

impl<T: Real> Section<T> {
    pub fn points(&self) -> impl Iterator<Item = Point3<T>> + '_ {
        self.branches.iter().flat_map(|b| b.points.iter().copied())
    }
}

struct Restricted<T: Real> {
    f: MultiPoly<T>,
    fu: MultiPoly<T>,
    fv: MultiPoly<T>,
}

impl<T: Real> Restricted<T> {
    fn refine(&self, u: T, v: T, cell: T) -> (T, T) {
        let (mut a, mut b) = (u, v);
        for _ in 0..6 {
            let f = self.f.eval2(a, b);
            let gu = self.fu.eval2(a, b);
            let gv = self.fv.eval2(a, b);
            let g2 = gu * gu + gv * gv;
            if g2 == T::zero() || !g2.is_finite() {
                break;
            }
            let k = f / g2;
            a -= k * gu;
            b -= k * gv;
        }
        if a.is_finite() && b.is_finite() && (a - u).hypot(b - v) <= cell * T::lit(2.0) {
            (a, b)
        } else {
            (u, v)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Edge {
    /// From node `(i, j)` to `(i + 1, j)`.
    H(usize, usize),
    /// From node `(i, j)` to `(i, j + 1)`.
    V(usize, usize),
}

fn march<T: Real>(r: &Restricted<T>, h: T) -> Option<(bool, Vec<Vec<(T, T)>>, Vec<bool>)> {
    let n = GRID;
    let cell = h * T::lit(2.0) / T::from_usize(n).unwrap();
    let coord = |k: usize| -h + cell * T::from_usize(k).unwrap();
    let vals: Vec<Vec<T>> = (0..=n)
        .into_par_iter()
        .map(|j| (0..=n).map(|i| r.f.eval2(coord(i), coord(j))).collect())
        .collect();
    let pos = |i: usize, j: usize| vals[j][i] >= T::zero();

    let crossing = |e: Edge| -> (T, T) {
        let ((i0, j0), (i1, j1)) = match e {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        };
        let (f0, f1) = (vals[j0][i0], vals[j1][i1]);
        let t = f0 / (f0 - f1);
        let u = coord(i0) + (coord(i1) - coord(i0)) * t;
        let v = coord(j0) + (coord(j1) - coord(j0)) * t;
        r.refine(u, v, cell)
    };

    let segments: Vec<(Edge, Edge)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut out = Vec::new();
            for i in 0..n {
                let c = [pos(i, j), pos(i + 1, j), pos(i + 1, j + 1), pos(i, j + 1)];
                let bottom = Edge::H(i, j);
                let right = Edge::V(i + 1, j);
                let top = Edge::H(i, j + 1);
                let left = Edge::V(i, j);
                let mut cut = Vec::with_capacity(4);
                if c[0] != c[1] {
                    cut.push(bottom);
                }
                if c[1] != c[2] {
                    cut.push(right);
                }
                if c[2] != c[3] {
                    cut.push(top);
                }
                if c[3] != c[0] {
                    cut.push(left);
                }
                match cut.len() {
                    2 => out.push((cut[0], cut[1])),
                    4 => {
                        let centre = (vals[j][i] + vals[j][i + 1] + vals[j + 1][i + 1] + vals[j + 1][i]) >= T::zero();
                        // cut off each corner whose sign differs from the centre
                        let corners = [(bottom, left), (bottom, right), (top, right), (top, left)];
                        for (k, &(a, b)) in corners.iter().enumerate() {
                            if c[k] != centre {
                                out.push((a, b));
                            }
                        }
                    }
                    _ => {}
                }
            }
            out
        })
        .collect();
    if segments.is_empty() {
        return None;
    }

    let mut edges: Vec<Edge> = segments.iter().flat_map(|&(a, b)| [a, b]).collect();
    edges.sort_by_key(|e| match *e {
        Edge::H(i, j) => (0, j, i),
        Edge::V(i, j) => (1, j, i),
    });
    edges.dedup();
    let pts: Vec<(T, T)> = edges.par_iter().map(|&e| crossing(e)).collect();
    let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(k, e)| (*e, k)).collect();
    let on_border = |e: &Edge| match *e {
        Edge::H(_, j) => j == 0 || j == n,
        Edge::V(i, _) => i == 0 || i == n,
    };
    let touches = edges.iter().any(on_border);

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for (s, &(a, b)) in segments.iter().enumerate() {
        let _ = s;
        let (ia, ib) = (index[&a], index[&b]);
        adj[ia].push(ib);
        adj[ib].push(ia);
    }
    let mut used = vec![false; edges.len()];
    let mut chains = Vec::new();
    let mut closed = Vec::new();
    let walk = |start: usize, used: &mut Vec<bool>| {
        let mut chain = vec![start];
        used[start] = true;
        let mut cur = start;
        let mut is_closed = false;
        loop {
            let next = adj[cur].iter().copied().find(|&k| !used[k]);
            match next {
                Some(k) => {
                    used[k] = true;
                    chain.push(k);
                    cur = k;
                }
                None => {
                    if chain.len() > 2 && adj[cur].contains(&start) {
                        is_closed = true;
                    }
                    break;
                }
            }
        }
        (chain, is_closed)
    };
    // open chains start at their endpoints
    for k in 0..edges.len() {
        if !used[k] && adj[k].len() == 1 {
            let (c, cl) = walk(k, &mut used);
            chains.push(c);
            closed.push(cl);
        }
    }
    for k in 0..edges.len() {
        if !used[k] {
            let (c, cl) = walk(k, &mut used);
            chains.push(c);
            closed.push(cl);
        }
    }
    let coords = chains
        .into_iter()
        .map(|c| {
            let mut out: Vec<(T, T)> = Vec::with_capacity(c.len());
            for k in c {
                let p = pts[k];
                if out.last().is_none_or(|q: &(T, T)| (q.0 - p.0).hypot(q.1 - p.1) > cell * T::lit(1e-9)) {
                    out.push(p);
                }
            }
            out
        })
        .collect();
    Some((touches, coords, closed))
}

/// Radius outside which the leading form dominates, so that the real
/// section lies inside it. `None` when the leading form has real zeros on
/// the unit circle (unbounded section).
fn section_radius<T: Real>(f: &MultiPoly<T>) -> Option<T> {
    let d = f.degree();
    let top = f.homogeneous_part(d);
    let samples = 1440;
    let mut min = T::infinity();
    let mut sign = None;
    for k in 0..samples {
        let th = T::TAU() * T::from_usize(k).unwrap() / T::from_usize(samples).unwrap();
        let v = top.eval2(th.cos(), th.sin());
        let sg = v > T::zero();
        if v == T::zero() || sign.is_some_and(|s| s != sg) {
            return None;
        }
        sign = Some(sg);
        min = min.min(v.abs());
    }
    // half the sampled minimum guards against undersampling
    let m = min * T::lit(0.5);
    let lower: T = (0..d).map(|k| f.homogeneous_part(k).terms().map(|(_, c)| c.abs()).sum::<T>()).sum();
    Some((lower / m).max(T::one()))
}

fn bbox<T: Real>(coords: &[Vec<(T, T)>]) -> T {
    coords
        .iter()
        .flatten()
        .fold(T::zero(), |m, &(u, v)| m.max(u.abs()).max(v.abs()))
}

/// Marches the section on a [`GRID`]² window centred at the chart origin.
/// For a bounded section the window first covers an a-priori bound on the
/// real zero set and is then shrunk to the branches found. Otherwise the
/// half-width doubles from 1 until the section is non-empty and stays
/// inside the window, up to [`MAX_HALF_WIDTH`].
pub fn plane_section<T: Real>(s: &ImplicitSurface<T>, pl: &Plane<T>, tol: &Tolerance<T>) -> Result<Section<T>> {
    let (f, chart) = restrict_checked(s, pl, tol)?;
    let bound = section_radius(&f);
    let r = Restricted {
        fu: f.partial(0),
        fv: f.partial(1),
        f,
    };
    let cap = T::lit(MAX_HALF_WIDTH);
    let mut last = None;
    if let Some(b) = bound.filter(|&b| b <= cap) {
        let h0 = b * T::lit(1.01);
        if let Some(res) = march(&r, h0) {
            let h1 = bbox(&res.1) * T::lit(1.1);
            let zoomed = (h1 < h0).then(|| march(&r, h1)).flatten().filter(|z| !z.0 && z.1.len() == res.1.len());
            last = Some(match zoomed {
                Some(z) => (h1, z),
                None => (h0, res),
            });
        }
    } else {
        let mut h = T::one();
        while h <= cap {
            if let Some(res) = march(&r, h) {
                let inside = !res.0;
                last = Some((h, res));
                if inside {
                    break;
                }
            }
            h *= T::lit(2.0);
        }
    }
    let (h, (touches, coords, closed)) = last.ok_or(Error::EmptySection)?;
    let branches = coords
        .into_iter()
        .zip(closed)
        .map(|(uv, closed)| Branch {
            points: uv.iter().map(|&(u, v)| chart.point(u, v)).collect(),
            uv,
            closed,
        })
        .collect();
    Ok(Section {
        chart,
        half_width: h,
        touches_border: touches,
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::implicit::section_is_single_circle;

    fn surf(terms: &[([u32; 3], f64)]) -> ImplicitSurface {
        ImplicitSurface::new(MultiPoly::from_terms(terms.iter().copied()).unwrap()).unwrap()
    }

    fn hyperboloid() -> ImplicitSurface {
        surf(&[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], -1.0), ([0, 0, 0], -1.0)])
    }

    #[test]
    fn hyperboloid_horizontal_sections_are_circles() {
        for c in [-1.5, 0.0, 0.7, 3.0] {
            let pl = Plane::axis(2, c);
            let circle = section_is_single_circle(&hyperboloid(), &pl, &Tolerance::default(), 1e-6)
                .unwrap()
                .expect("single circle");
            assert!((circle.radius() - (1.0f64 + c * c).sqrt()).abs() < 1e-9);
            assert!(circle.center().distance(Point3::new(0.0, 0.0, c)) < 1e-9);
            assert_eq!(circle.normal(), Vec3::unit_z());
        }
    }

    #[test]
    fn vertical_section_is_open() {
        let sec = plane_section(&hyperboloid(), &Plane::axis(0, 0.0), &Tolerance::default()).unwrap();
        assert!(sec.touches_border);
        assert_eq!(sec.branches.len(), 2);
        assert!(sec.branches.iter().all(|b| !b.closed));
        for p in sec.points() {
            assert!(hyperboloid().relative_residual(p) < 1e-12);
        }
    }

    #[test]
    fn far_sphere_plane_is_empty() {
        let sphere = surf(&[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0), ([0, 0, 0], -1.0)]);
        let r = section_is_single_circle(&sphere, &Plane::axis(2, 2.0), &Tolerance::default(), 1e-6);
        assert_eq!(r, Err(Error::EmptySection));
    }

    #[test]
    fn torus_equator_has_two_branches() {
        let s = MultiPoly::from_terms([([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0), ([0, 0, 0], 3.0)]).unwrap();
        let xy = MultiPoly::from_terms([([2, 0, 0], 16.0), ([0, 2, 0], 16.0)]).unwrap();
        let t = ImplicitSurface::new(s.mul(&s).unwrap() - xy).unwrap();
        let sec = plane_section(&t, &Plane::axis(2, 0.0), &Tolerance::default()).unwrap();
        assert_eq!(sec.branches.len(), 2);
        assert!(sec.branches.iter().all(|b| b.closed));
        assert_eq!(section_is_single_circle(&t, &Plane::axis(2, 0.0), &Tolerance::default(), 1e-6), Ok(None));
    }
}
