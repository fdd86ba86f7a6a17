//! Generalized Schur decompositions for real I x J x 2 arrays.
//!
//! The library classifies square-slice arrays as interior, boundary, or
//! exterior points of the rank-R set, computes full GSDs constructively for
//! identically singular pencils, and fits best GSDs as the well-posed
//! substitute for best rank-R approximation.

pub mod classify;
pub mod error;
pub mod gen;
pub mod gsd;
pub mod matrix;
pub mod pencil;
pub mod random;
pub mod tensor;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use tensor::{cp_reconstruct, frobenius_distance, multilinear_multiply, slicemix, CpFactors,
                 Tensor3};
