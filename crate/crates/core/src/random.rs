//! Seeded random constructions. Everything is ChaCha8-based so that a seed
//! pins the output exactly across platforms and runs.

use crate::matrix::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box-Muller.
pub fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Matrix with independent standard normal entries.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    DenseMatrix::from_vec(rows, cols, data).expect("gaussian entries are finite")
}

/// Column-orthonormal rows x cols matrix (rows >= cols), from Gram-Schmidt
/// on Gaussian columns. Redraws on near-dependence, which almost never fires.
pub fn random_orthonormal(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    assert!(rows >= cols, "orthonormal factor needs rows >= cols");
    let mut q = DenseMatrix::zeros(rows, cols);
    let mut j = 0;
    while j < cols {
        let mut col: Vec<f64> = (0..rows).map(|_| gaussian(rng)).collect();
        for k in 0..j {
            let dot: f64 = (0..rows).map(|i| col[i] * q.get(i, k)).sum();
            for i in 0..rows {
                col[i] -= dot * q.get(i, k);
            }
        }
        let norm: f64 = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for i in 0..rows {
            q.set(i, j, col[i] / norm);
        }
        j += 1;
    }
    q
}

/// Random 2x2 with |det| bounded away from zero, entries O(1).
pub fn random_nonsingular_2x2(rng: &mut impl Rng) -> DenseMatrix {
    loop {
        let m = DenseMatrix::from_2x2(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
        if m.det().abs() > 0.1 && m.max_abs() < 4.0 {
            return m;
        }
    }
}

/// Random nonsingular n x n with a mild condition bound, for invariance tests.
pub fn random_well_conditioned(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    loop {
        let m = random_matrix(rng, n, n);
        if m.smallest_singular_value() > 0.15 {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormal_factors_are_orthonormal() {
        let mut rng = seeded_rng(7);
        for &(r, c) in &[(3usize, 3usize), (5, 2), (6, 6), (4, 1)] {
            let q = random_orthonormal(&mut rng, r, c);
            assert!(q.orthonormality_residual() < 1e-13);
        }
    }

    #[test]
    fn seeded_rng_is_reproducible() {
        let a = random_matrix(&mut seeded_rng(42), 3, 3);
        let b = random_matrix(&mut seeded_rng(42), 3, 3);
        assert_eq!(a, b);
    }
}
