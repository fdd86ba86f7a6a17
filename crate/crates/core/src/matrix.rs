//! Dense real matrices stored row-major.
//!
//! Sized for pencil work: everything here is O(n^3)-or-less kernels on small
//! dense matrices, written directly against the flat storage.

use crate::error::{Error, Result};
use std::fmt;

/// Dense real matrix, row-major storage: entry (i, j) lives at `i * cols + j`.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                write!(f, "{:12.6e}", self.get(i, j))?;
                if j + 1 < self.cols {
                    write!(f, ", ")?;
                }
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::EmptyDimension { context: "matrix rows" });
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(Error::EmptyDimension { context: "matrix cols" });
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    context: "ragged matrix rows",
                    expected: c.to_string(),
                    got: row.len().to_string(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(r, c, data)
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension { context: "matrix dims" });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entry count",
                expected: (rows * cols).to_string(),
                got: data.len().to_string(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "matrix entry" });
        }
        Ok(Self { rows, cols, data })
    }

    /// 2x2 convenience constructor.
    pub fn from_2x2(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self {
            rows: 2,
            cols: 2,
            data: vec![a, b, c, d],
        }
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul inner dimensions: {} vs {}",
            self.cols, other.rows
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * out.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// a*self + b*other, entry-wise.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// max |self - other| over entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Submatrix copy, rows r0..r1, cols c0..c1 (half-open).
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j));
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    /// ||Q^T Q - I|| (max abs entry); 0 for exactly column-orthonormal Q.
    pub fn orthonormality_residual(&self) -> f64 {
        let g = self.transpose().matmul(self);
        let mut res: f64 = 0.0;
        for i in 0..g.rows {
            for j in 0..g.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                res = res.max((g.get(i, j) - target).abs());
            }
        }
        res
    }

    pub fn is_upper_triangular(&self, tol: f64) -> bool {
        for i in 1..self.rows {
            for j in 0..i.min(self.cols) {
                if self.get(i, j).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Zero out everything strictly below the diagonal.
    pub fn zero_strict_lower(&mut self) {
        for i in 1..self.rows {
            for j in 0..i.min(self.cols) {
                self.set(i, j, 0.0);
            }
        }
    }

    /// Upper-triangular part (strict lower part dropped).
    pub fn upper_triangular_part(&self) -> Self {
        let mut out = self.clone();
        out.zero_strict_lower();
        out
    }

    /// Determinant via LU with partial pivoting. Square only.
    pub fn det(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut pmax = a[k * n + k].abs();
            for i in (k + 1)..n {
                if a[i * n + k].abs() > pmax {
                    pmax = a[i * n + k].abs();
                    p = i;
                }
            }
            if pmax == 0.0 {
                return 0.0;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for i in (k + 1)..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = 0.0;
                for j in (k + 1)..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        det
    }

    /// Solve self * X = B via LU with partial pivoting. Errors on a pivot
    /// smaller than `tol` times the row scale.
    pub fn solve(&self, b: &Self, tol: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch {
                context: "solve rhs rows",
                expected: self.rows.to_string(),
                got: b.rows.to_string(),
            });
        }
        let n = self.rows;
        let m = b.cols;
        let mut a = self.data.clone();
        let mut x = b.data.clone();
        let scale = self.max_abs().max(1e-300);
        for k in 0..n {
            let mut p = k;
            let mut pmax = a[k * n + k].abs();
            for i in (k + 1)..n {
                if a[i * n + k].abs() > pmax {
                    pmax = a[i * n + k].abs();
                    p = i;
                }
            }
            if pmax <= tol * scale {
                return Err(Error::InvalidInput(format!(
                    "singular system: pivot {pmax:.3e} at column {k}"
                )));
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                for j in 0..m {
                    x.swap(k * m + j, p * m + j);
                }
            }
            let pivot = a[k * n + k];
            for i in (k + 1)..n {
                let f = a[i * n + k] / pivot;
                if f == 0.0 {
                    continue;
                }
                for j in (k + 1)..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
                for j in 0..m {
                    x[i * m + j] -= f * x[k * m + j];
                }
            }
        }
        for k in (0..n).rev() {
            let pivot = a[k * n + k];
            for j in 0..m {
                let mut s = x[k * m + j];
                for i in (k + 1)..n {
                    s -= a[k * n + i] * x[i * m + j];
                }
                x[k * m + j] = s / pivot;
            }
        }
        Self::from_vec(n, m, x)
    }

    /// Smallest singular value, via one-sided Jacobi on the columns.
    pub fn smallest_singular_value(&self) -> f64 {
        let (sigmas, _, _) = self.one_sided_jacobi();
        sigmas.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// One-sided Jacobi SVD work loop. Returns (singular values, U columns
    /// as a matrix with possibly-zero columns where sigma = 0, V).
    /// Requires rows >= cols.
    fn one_sided_jacobi(&self) -> (Vec<f64>, DenseMatrix, DenseMatrix) {
        assert!(self.rows >= self.cols, "one_sided_jacobi wants rows >= cols");
        let m = self.rows;
        let n = self.cols;
        let mut a = self.clone();
        let mut v = DenseMatrix::identity(n);
        let eps = 1e-15;
        let limit = 60;
        for _sweep in 0..limit {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = 0.0;
                    for i in 0..m {
                        let x = a.get(i, p);
                        let y = a.get(i, q);
                        app += x * x;
                        aqq += y * y;
                        apq += x * y;
                    }
                    if apq.abs() <= eps * (app * aqq).sqrt().max(1e-300) {
                        continue;
                    }
                    off = off.max(apq.abs());
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..m {
                        let x = a.get(i, p);
                        let y = a.get(i, q);
                        a.set(i, p, c * x - s * y);
                        a.set(i, q, s * x + c * y);
                    }
                    for i in 0..n {
                        let x = v.get(i, p);
                        let y = v.get(i, q);
                        v.set(i, p, c * x - s * y);
                        v.set(i, q, s * x + c * y);
                    }
                }
            }
            if off == 0.0 {
                break;
            }
        }
        let mut sigmas = Vec::with_capacity(n);
        let mut u = DenseMatrix::zeros(m, n);
        for j in 0..n {
            let mut norm = 0.0;
            for i in 0..m {
                norm += a.get(i, j) * a.get(i, j);
            }
            let norm = norm.sqrt();
            sigmas.push(norm);
            if norm > 0.0 {
                for i in 0..m {
                    u.set(i, j, a.get(i, j) / norm);
                }
            }
        }
        (sigmas, u, v)
    }

    /// Polar factor: the column-orthonormal matrix P maximizing tr(P^T self)
    /// over P^T P = I. Computed as U V^T from the thin SVD; zero singular
    /// directions are completed to an orthonormal basis.
    pub fn polar_orthonormal_factor(&self) -> DenseMatrix {
        assert!(self.rows >= self.cols);
        let (sigmas, mut u, v) = self.one_sided_jacobi();
        let m = self.rows;
        let n = self.cols;
        let smax = sigmas.iter().cloned().fold(0.0f64, f64::max);
        let tol = 1e-13 * smax.max(1.0);
        // Fill near-null columns of U with unit vectors orthogonal to the rest.
        for j in 0..n {
            if sigmas[j] > tol {
                continue;
            }
            let mut filled = false;
            for cand in 0..m {
                let mut col = vec![0.0; m];
                col[cand] = 1.0;
                // Unfilled null columns are zero vectors and project to nothing.
                for k in 0..n {
                    if k == j {
                        continue;
                    }
                    let dot: f64 = (0..m).map(|i| col[i] * u.get(i, k)).sum();
                    for i in 0..m {
                        col[i] -= dot * u.get(i, k);
                    }
                }
                let norm: f64 = col.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1e-6 {
                    for i in 0..m {
                        u.set(i, j, col[i] / norm);
                    }
                    filled = true;
                    break;
                }
            }
            if !filled {
                u.set(j.min(m - 1), j, 1.0);
            }
        }
        u.matmul(&v.transpose())
    }

    /// Leading `k` left singular vectors (by decreasing singular value).
    pub fn leading_left_singular_vectors(&self, k: usize) -> DenseMatrix {
        let work = if self.rows >= self.cols {
            self.clone()
        } else {
            // Work on A A^T via the transpose trick: left vectors of A are
            // left vectors of A A^T; cheaper to just Jacobi the transpose
            // and map back: A = U S V^T <=> A^T = V S U^T.
            self.transpose()
        };
        if self.rows >= self.cols {
            let (sigmas, u, _) = work.one_sided_jacobi();
            let mut idx: Vec<usize> = (0..sigmas.len()).collect();
            idx.sort_by(|&a, &b| sigmas[b].partial_cmp(&sigmas[a]).unwrap());
            let mut out = DenseMatrix::zeros(self.rows, k);
            for (col, &j) in idx.iter().take(k).enumerate() {
                for i in 0..self.rows {
                    out.set(i, col, u.get(i, j));
                }
            }
            complete_orthonormal_columns(&mut out, k);
            out
        } else {
            let (sigmas, _, v) = work.one_sided_jacobi();
            let mut idx: Vec<usize> = (0..sigmas.len()).collect();
            idx.sort_by(|&a, &b| sigmas[b].partial_cmp(&sigmas[a]).unwrap());
            let mut out = DenseMatrix::zeros(self.rows, k);
            for (col, &j) in idx.iter().take(k).enumerate() {
                for i in 0..self.rows {
                    out.set(i, col, v.get(i, j));
                }
            }
            complete_orthonormal_columns(&mut out, k);
            out
        }
    }
}

/// Replace zero (or degenerate) columns among the first `k` with unit vectors
/// orthogonal to the other columns, via modified Gram-Schmidt.
fn complete_orthonormal_columns(m: &mut DenseMatrix, k: usize) {
    let rows = m.rows();
    for j in 0..k {
        let norm: f64 = (0..rows).map(|i| m.get(i, j) * m.get(i, j)).sum::<f64>().sqrt();
        if norm > 0.5 {
            continue;
        }
        for cand in 0..rows {
            let mut col = vec![0.0; rows];
            col[cand] = 1.0;
            for other in 0..k {
                if other == j {
                    continue;
                }
                let dot: f64 = (0..rows).map(|i| col[i] * m.get(i, other)).sum();
                for i in 0..rows {
                    col[i] -= dot * m.get(i, other);
                }
            }
            let n2: f64 = col.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n2 > 1e-6 {
                for i in 0..rows {
                    m.set(i, j, col[i] / n2);
                }
                break;
            }
        }
    }
}
