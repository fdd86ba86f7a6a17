//! Real generalized Schur (QZ) machinery for square matrix pairs.
//!
//! The factorization convention throughout is F = Q * A * Z and
//! G = Q * B * Z with Q, Z orthonormal, F quasi-upper-triangular and G
//! upper triangular, so the source pair is recovered as A = Q^T F Z^T.

mod givens;
mod qz;
mod swap;

pub use qz::{real_qz, triangularize_real_2x2, QzOptions};
pub use swap::{solve_generalized_sylvester, SwapReport};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// One diagonal block of a quasi-upper-triangular matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub start: usize,
    pub size: usize,
}

/// Generalized Schur form of a pair (A, B): orthonormal Q, Z with
/// F = Q A Z quasi-upper-triangular and G = Q B Z upper triangular.
#[derive(Debug, Clone)]
pub struct PencilQZ {
    pub q: DenseMatrix,
    pub z: DenseMatrix,
    pub f: DenseMatrix,
    pub g: DenseMatrix,
    pub blocks: Vec<Block>,
}

impl PencilQZ {
    pub fn order(&self) -> usize {
        self.f.rows()
    }

    /// Q^T F Z^T, which reproduces the first matrix of the source pair.
    pub fn reconstruct_a(&self) -> DenseMatrix {
        self.q.transpose().matmul(&self.f).matmul(&self.z.transpose())
    }

    /// Q^T G Z^T, which reproduces the second matrix of the source pair.
    pub fn reconstruct_b(&self) -> DenseMatrix {
        self.q.transpose().matmul(&self.g).matmul(&self.z.transpose())
    }

    /// Generalized eigenvalues read off the diagonal blocks, in block order.
    pub fn eigenvalues(&self) -> Vec<GeneralizedEigenvalue> {
        let mut out = Vec::with_capacity(self.order());
        for b in &self.blocks {
            let i = b.start;
            if b.size == 1 {
                out.push(GeneralizedEigenvalue::real_pair(
                    self.f.get(i, i),
                    self.g.get(i, i),
                ));
            } else {
                let fb = self.f.block(i, i + 2, i, i + 2);
                let gb = self.g.block(i, i + 2, i, i + 2);
                let (df, dg, mixed) = pencil_quadratic(&fb, &gb);
                let disc = mixed * mixed - 4.0 * df * dg;
                if disc < 0.0 {
                    // Complex conjugate pair: roots of dg*l^2 - mixed*l + df.
                    let re = mixed / (2.0 * dg);
                    let im = (-disc).sqrt() / (2.0 * dg.abs());
                    out.push(GeneralizedEigenvalue {
                        alpha_re: re,
                        alpha_im: im,
                        beta: 1.0,
                    });
                    out.push(GeneralizedEigenvalue {
                        alpha_re: re,
                        alpha_im: -im,
                        beta: 1.0,
                    });
                } else {
                    // Real pair left in a 2x2 block; read both roots.
                    let d = disc.sqrt();
                    let q = 0.5 * (mixed + if mixed >= 0.0 { d } else { -d });
                    if q.abs() > 0.0 {
                        out.push(GeneralizedEigenvalue::real_pair(q, dg));
                        out.push(GeneralizedEigenvalue::real_pair(df, q));
                    } else {
                        out.push(GeneralizedEigenvalue::real_pair(df.abs().sqrt(), dg.abs().sqrt()));
                        out.push(GeneralizedEigenvalue::real_pair(-(df.abs().sqrt()), dg.abs().sqrt()));
                    }
                }
            }
        }
        out
    }

    /// Rebuild the block list from the subdiagonal pattern of F.
    pub(crate) fn rescan_blocks(&mut self) {
        self.blocks = scan_blocks(&self.f);
    }
}

pub(crate) fn scan_blocks(f: &DenseMatrix) -> Vec<Block> {
    let n = f.rows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && f.get(i + 1, i) != 0.0 {
            blocks.push(Block { start: i, size: 2 });
            i += 2;
        } else {
            blocks.push(Block { start: i, size: 1 });
            i += 1;
        }
    }
    blocks
}

/// det(beta*F - alpha*G) = beta^2*det_f - beta*alpha*mixed + alpha^2*det_g
/// for a 2x2 pair; returns (det_f, det_g, mixed).
pub(crate) fn pencil_quadratic(f: &DenseMatrix, g: &DenseMatrix) -> (f64, f64, f64) {
    let df = f.get(0, 0) * f.get(1, 1) - f.get(0, 1) * f.get(1, 0);
    let dg = g.get(0, 0) * g.get(1, 1) - g.get(0, 1) * g.get(1, 0);
    let mixed = f.get(0, 0) * g.get(1, 1) + f.get(1, 1) * g.get(0, 0)
        - f.get(0, 1) * g.get(1, 0)
        - f.get(1, 0) * g.get(0, 1);
    (df, dg, mixed)
}

/// Homogeneous generalized eigenvalue (alpha, beta): the eigenvalue is
/// alpha / beta, infinite when beta = 0. Complex alphas occur in conjugate
/// pairs; beta is kept nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedEigenvalue {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub beta: f64,
}

impl GeneralizedEigenvalue {
    pub fn real_pair(alpha: f64, beta: f64) -> Self {
        if beta < 0.0 {
            Self {
                alpha_re: -alpha,
                alpha_im: 0.0,
                beta: -beta,
            }
        } else {
            Self {
                alpha_re: alpha,
                alpha_im: 0.0,
                beta,
            }
        }
    }

    pub fn is_complex(&self) -> bool {
        self.alpha_im != 0.0
    }

    pub fn is_infinite(&self) -> bool {
        self.beta == 0.0
    }

    /// The eigenvalue alpha/beta as (re, im); infinities map to +/-inf.
    pub fn value(&self) -> (f64, f64) {
        if self.beta == 0.0 {
            (
                if self.alpha_re >= 0.0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                },
                0.0,
            )
        } else {
            (self.alpha_re / self.beta, self.alpha_im / self.beta)
        }
    }
}

/// True iff det(mu*A + lambda*B) vanishes identically. The determinant is a
/// homogeneous degree-n polynomial in (mu, lambda), so sampling it at n+1
/// distinct angles on the half-circle decides the question; each sample is
/// compared against `tol` scaled by the Hadamard bound (product of row
/// norms) of the sampled combination.
pub fn is_singular_pencil(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> Result<bool> {
    check_pair(a, b)?;
    let n = a.rows();
    for m in 0..=n {
        let theta = std::f64::consts::PI * (m as f64 + 0.5) / (n as f64 + 1.0);
        let combo = a.linear_combination(theta.cos(), b, theta.sin());
        let det = combo.det().abs();
        let mut hadamard = 1.0f64;
        for i in 0..n {
            let row_norm: f64 = combo.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
            hadamard *= row_norm;
        }
        if det > tol * hadamard {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Max over the singularity samples of |det| / Hadamard bound; near zero
/// for identically singular pencils. Used as the case-(b) margin.
pub fn singularity_score(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    check_pair(a, b)?;
    let n = a.rows();
    let mut score = 0.0f64;
    for m in 0..=n {
        let theta = std::f64::consts::PI * (m as f64 + 0.5) / (n as f64 + 1.0);
        let combo = a.linear_combination(theta.cos(), b, theta.sin());
        let det = combo.det().abs();
        let mut hadamard = 1.0f64;
        for i in 0..n {
            let row_norm: f64 = combo.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
            hadamard *= row_norm;
        }
        if hadamard > 0.0 {
            score = score.max(det / hadamard);
        }
    }
    Ok(score)
}

pub(crate) fn check_pair(a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            context: "pencil pair shapes",
            expected: format!("{}x{}", a.rows(), a.cols()),
            got: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    Ok(())
}

/// Generalized eigenvalues of a regular pair (A, B), via `real_qz`.
/// Rejects identically singular pencils, whose eigenvalues are undefined.
pub fn generalized_eigenvalues(
    a: &DenseMatrix,
    b: &DenseMatrix,
    sing_tol: f64,
) -> Result<Vec<GeneralizedEigenvalue>> {
    if is_singular_pencil(a, b, sing_tol)? {
        return Err(Error::IdenticallySingularPencil);
    }
    let qz = real_qz(a, b, &QzOptions::default())?;
    Ok(qz.eigenvalues())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_pencil_shared_zero_column_pattern() {
        // mu*A + lambda*B always has a zero first column.
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(is_singular_pencil(&a, &b, 1e-10).unwrap());
    }

    #[test]
    fn regular_pencil_identity_pair() {
        let i = DenseMatrix::identity(2);
        assert!(!is_singular_pencil(&i, &i, 1e-10).unwrap());
    }

    #[test]
    fn singular_pencil_strictly_upper_pair() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!(is_singular_pencil(&a, &b, 1e-10).unwrap());
    }

    #[test]
    fn eigenvalues_of_diagonal_pencil() {
        let a = DenseMatrix::diagonal(&[1.0, 2.0]);
        let b = DenseMatrix::identity(2);
        let mut eigs: Vec<f64> = generalized_eigenvalues(&a, &b, 1e-10)
            .unwrap()
            .iter()
            .map(|e| e.value().0)
            .collect();
        eigs.sort_by(f64::total_cmp);
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_infinite_when_b_is_zero() {
        let a = DenseMatrix::identity(2);
        let b = DenseMatrix::zeros(2, 2);
        let eigs = generalized_eigenvalues(&a, &b, 1e-10).unwrap();
        assert_eq!(eigs.len(), 2);
        assert!(eigs.iter().all(|e| e.is_infinite()));
    }

    #[test]
    fn eigenvalues_complex_pair_for_rotation() {
        let a = DenseMatrix::from_2x2(0.0, -1.0, 1.0, 0.0);
        let b = DenseMatrix::identity(2);
        let eigs = generalized_eigenvalues(&a, &b, 1e-10).unwrap();
        assert_eq!(eigs.len(), 2);
        let mut ims: Vec<f64> = eigs.iter().map(|e| e.value().1).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-12);
        assert!((ims[1] - 1.0).abs() < 1e-12);
        assert!(eigs.iter().all(|e| e.value().0.abs() < 1e-12));
    }

    #[test]
    fn singular_pencil_rejected_for_eigenvalues() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            generalized_eigenvalues(&a, &b, 1e-10),
            Err(Error::IdenticallySingularPencil)
        ));
    }
}
