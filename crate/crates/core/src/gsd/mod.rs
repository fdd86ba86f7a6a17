//! Generalized Schur Decompositions of I x J x 2 arrays: the data type,
//! the constructive full GSD for identically singular pencils, the
//! best-fitting GSD optimizer, and CP extraction for interior points.

mod cp;
mod fit;
mod full;

pub use cp::extract_cp_interior;
pub use fit::{best_gsd_fit, closure_membership, FitOptions, FitReport};
pub use full::full_gsd_singular_pencil;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::tensor::{multilinear_multiply, Tensor3};

/// Full GSD: column-orthonormal Qa (I x R), Qb (J x R) and upper-triangular
/// R1, R2 (R x R) with slices Y_k = Qa R_k Qb^T.
#[derive(Debug, Clone)]
pub struct Gsd {
    qa: DenseMatrix,
    qb: DenseMatrix,
    r1: DenseMatrix,
    r2: DenseMatrix,
}

impl Gsd {
    pub fn new(
        qa: DenseMatrix,
        qb: DenseMatrix,
        r1: DenseMatrix,
        r2: DenseMatrix,
    ) -> Result<Self> {
        let r = qa.cols();
        if qb.cols() != r || r1.rows() != r || r1.cols() != r || r2.rows() != r || r2.cols() != r {
            return Err(Error::DimensionMismatch {
                context: "GSD factor shapes",
                expected: format!("Qa I x {r}, Qb J x {r}, R1/R2 {r} x {r}"),
                got: format!(
                    "Qa {}x{}, Qb {}x{}, R1 {}x{}, R2 {}x{}",
                    qa.rows(),
                    qa.cols(),
                    qb.rows(),
                    qb.cols(),
                    r1.rows(),
                    r1.cols(),
                    r2.rows(),
                    r2.cols()
                ),
            });
        }
        if r > qa.rows().min(qb.rows()) {
            return Err(Error::InvalidRank {
                rank: r,
                limit: qa.rows().min(qb.rows()),
            });
        }
        for (name, m) in [("Qa", &qa), ("Qb", &qb)] {
            let res = m.orthonormality_residual();
            if res > 1e-12 {
                return Err(Error::NotOrthonormal {
                    context: if name == "Qa" { "GSD Qa" } else { "GSD Qb" },
                    residual: res,
                });
            }
        }
        for m in [&r1, &r2] {
            if !m.is_upper_triangular(0.0) {
                return Err(Error::NotUpperTriangular {
                    context: "GSD triangular factor",
                });
            }
        }
        Ok(Self { qa, qb, r1, r2 })
    }

    pub fn rank(&self) -> usize {
        self.qa.cols()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.qa.rows(), self.qb.rows())
    }

    pub fn qa(&self) -> &DenseMatrix {
        &self.qa
    }

    pub fn qb(&self) -> &DenseMatrix {
        &self.qb
    }

    pub fn r1(&self) -> &DenseMatrix {
        &self.r1
    }

    pub fn r2(&self) -> &DenseMatrix {
        &self.r2
    }

    /// The I x J x 2 array with slices Qa R_k Qb^T.
    pub fn reconstruct(&self) -> Tensor3 {
        let qbt = self.qb.transpose();
        let y1 = self.qa.matmul(&self.r1).matmul(&qbt);
        let y2 = self.qa.matmul(&self.r2).matmul(&qbt);
        Tensor3::from_slices(&y1, &y2).expect("GSD factor shapes are consistent")
    }
}

/// Embed an R x R x 2 core into an I x J x 2 array via column-orthonormal
/// S (I x R) and T (J x R): Y = (S, T, I_2) . X. The embedding preserves
/// closure membership of the rank-R set in both directions.
pub fn embed_core(x: &Tensor3, s: &DenseMatrix, t: &DenseMatrix) -> Result<Tensor3> {
    let (xi, xj, xk) = x.dims();
    if xk != 2 || xi != xj {
        return Err(Error::DimensionMismatch {
            context: "core dims",
            expected: "R x R x 2".to_string(),
            got: format!("{xi}x{xj}x{xk}"),
        });
    }
    for (name, m) in [("S", s), ("T", t)] {
        let res = m.orthonormality_residual();
        if res > 1e-10 {
            return Err(Error::NotOrthonormal {
                context: if name == "S" {
                    "embedding factor S"
                } else {
                    "embedding factor T"
                },
                residual: res,
            });
        }
    }
    multilinear_multiply(x, s, t, &DenseMatrix::identity(2))
}
