//! Small dense kernels: cyclic Jacobi for symmetric eigenproblems,
//! one-sided Jacobi SVD for homogeneous least squares, Householder QR for
//! overdetermined linear systems.

use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Real = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(&a, &b)| a * b).sum()
            })
            .collect()
    }

    /// `AᵀA`, accumulated row by row.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut g = Self::zeros(n, n);
        for i in 0..self.rows {
            let row = &self.data[i * n..(i + 1) * n];
            for a in 0..n {
                let ra = row[a];
                if ra == T::zero() {
                    continue;
                }
                for b in a..n {
                    g.data[a * n + b] += ra * row[b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                g.data[a * n + b] = g.data[b * n + a];
            }
        }
        g
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T: Real = f64> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Eigenvectors stored as columns, matching `values`.
    pub vectors: Matrix<T>,
}

impl<T: Real> SymmetricEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<T> {
        self.vectors.column(k)
    }
}

/// Cyclic Jacobi eigen-solver. Only the upper triangle is read.
pub fn symmetric_eigen<T: Real>(m: &Matrix<T>) -> SymmetricEigen<T> {
    assert_eq!(m.rows, m.cols, "square matrix required");
    let n = m.rows;
    let mut a = m.clone();
    for i in 0..n {
        for j in 0..i {
            a[(i, j)] = a[(j, i)];
        }
    }
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..n {
            diag += a[(i, i)] * a[(i, i)];
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off <= eps * eps * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    SymmetricEigen { values, vectors }
}

/// Singular values and right singular vectors of a tall matrix.
#[derive(Debug, Clone)]
pub struct Svd<T: Real = f64> {
    /// Singular values in descending order.
    pub values: Vec<T>,
    /// Right singular vectors as columns, matching `values`.
    pub v: Matrix<T>,
}

impl<T: Real> Svd<T> {
    /// Right singular vector of the smallest singular value.
    pub fn null_vector(&self) -> Vec<T> {
        self.v.column(self.values.len() - 1)
    }
}

/// One-sided (Hestenes) Jacobi SVD. Requires `rows ≥ cols`; pad with zero
/// rows otherwise.
pub fn svd<T: Real>(m: &Matrix<T>) -> Svd<T> {
    let n = m.cols;
    let mut a = if m.rows >= n {
        m.clone()
    } else {
        let mut padded = Matrix::zeros(n, n);
        for i in 0..m.rows {
            for j in 0..n {
                padded[(i, j)] = m[(i, j)];
            }
        }
        padded
    };
    let rows = a.rows;
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for i in 0..rows {
                    let ap = a.data[i * n + p];
                    let aq = a.data[i * n + q];
                    alpha += ap * ap;
                    beta += aq * aq;
                    gamma += ap * aq;
                }
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let ap = a.data[i * n + p];
                    let aq = a.data[i * n + q];
                    a.data[i * n + p] = c * ap - s * aq;
                    a.data[i * n + q] = s * ap + c * aq;
                }
                for i in 0..n {
                    let vp = v.data[i * n + p];
                    let vq = v.data[i * n + q];
                    v.data[i * n + p] = c * vp - s * vq;
                    v.data[i * n + q] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = (0..n)
        .map(|j| (0..rows).map(|i| a.data[i * n + j] * a.data[i * n + j]).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&j| norms[j]).collect();
    let mut sorted_v = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            sorted_v[(k, dst)] = v[(k, src)];
        }
    }
    Svd {
        values,
        v: sorted_v,
    }
}

/// Least-squares solution of `A x ≈ b` by Householder QR. Returns `None`
/// when `A` is rank deficient at `rank_tol` relative to its largest
/// diagonal entry of `R`.
pub fn lstsq<T: Real>(m: &Matrix<T>, b: &[T], rank_tol: T) -> Option<Vec<T>> {
    let (rows, cols) = (m.rows, m.cols);
    assert_eq!(b.len(), rows);
    if rows < cols {
        return None;
    }
    let mut a = m.clone();
    let mut rhs = b.to_vec();
    for k in 0..cols {
        let norm = (k..rows).map(|i| a[(i, k)] * a[(i, k)]).sum::<T>().sqrt();
        if norm == T::zero() {
            continue;
        }
        let alpha = if a[(k, k)] > T::zero() { -norm } else { norm };
        let mut u: Vec<T> = (k..rows).map(|i| a[(i, k)]).collect();
        u[0] -= alpha;
        let unorm2: T = u.iter().map(|&x| x * x).sum();
        if unorm2 == T::zero() {
            continue;
        }
        for j in k..cols {
            let dot: T = (k..rows).map(|i| u[i - k] * a[(i, j)]).sum();
            let f = T::lit(2.0) * dot / unorm2;
            for i in k..rows {
                a[(i, j)] -= f * u[i - k];
            }
        }
        let dot: T = (k..rows).map(|i| u[i - k] * rhs[i]).sum();
        let f = T::lit(2.0) * dot / unorm2;
        for i in k..rows {
            rhs[i] -= f * u[i - k];
        }
    }
    let rmax = (0..cols).map(|k| a[(k, k)].abs()).fold(T::zero(), T::max);
    if rmax == T::zero() {
        return None;
    }
    let mut x = vec![T::zero(); cols];
    for k in (0..cols).rev() {
        let d = a[(k, k)];
        if d.abs() <= rank_tol * rmax {
            return None;
        }
        let s: T = ((k + 1)..cols).map(|j| a[(k, j)] * x[j]).sum();
        x[k] = (rhs[k] - s) / d;
    }
    Some(x)
}
