//! Dense real 3-way arrays and the multilinear operations on them.
//!
//! Layout: slice-major. Entry (i, j, k) of an I x J x K array lives at
//! `k * I * J + i * J + j`, so each frontal slice is a contiguous row-major
//! I x J block. All algorithms downstream fix K = 2; the container itself
//! allows any K >= 1 so that multilinear multiplication can change the
//! third mode.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Dense real I x J x K array. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dim_i: usize,
    dim_j: usize,
    dim_k: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn new(dim_i: usize, dim_j: usize, dim_k: usize, data: Vec<f64>) -> Result<Self> {
        if dim_i == 0 || dim_j == 0 || dim_k == 0 {
            return Err(Error::EmptyDimension { context: "tensor dims" });
        }
        if data.len() != dim_i * dim_j * dim_k {
            return Err(Error::DimensionMismatch {
                context: "tensor entry count",
                expected: (dim_i * dim_j * dim_k).to_string(),
                got: data.len().to_string(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "tensor entry" });
        }
        Ok(Self {
            dim_i,
            dim_j,
            dim_k,
            data,
        })
    }

    pub fn zeros(dim_i: usize, dim_j: usize, dim_k: usize) -> Result<Self> {
        Self::new(dim_i, dim_j, dim_k, vec![0.0; dim_i * dim_j * dim_k])
    }

    /// Build an I x J x 2 array from its two frontal slices.
    pub fn from_slices(slice1: &DenseMatrix, slice2: &DenseMatrix) -> Result<Self> {
        if slice1.rows() != slice2.rows() || slice1.cols() != slice2.cols() {
            return Err(Error::DimensionMismatch {
                context: "frontal slice shapes",
                expected: format!("{}x{}", slice1.rows(), slice1.cols()),
                got: format!("{}x{}", slice2.rows(), slice2.cols()),
            });
        }
        let mut data = Vec::with_capacity(2 * slice1.rows() * slice1.cols());
        data.extend_from_slice(slice1.data());
        data.extend_from_slice(slice2.data());
        Self::new(slice1.rows(), slice1.cols(), 2, data)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.dim_i, self.dim_j, self.dim_k)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[k * self.dim_i * self.dim_j + i * self.dim_j + j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Borrowed view of frontal slice k (row-major I x J block).
    pub fn slice_data(&self, k: usize) -> Result<&[f64]> {
        if k >= self.dim_k {
            return Err(Error::IndexOutOfRange {
                context: "frontal slice index",
                index: k,
                limit: self.dim_k,
            });
        }
        let len = self.dim_i * self.dim_j;
        Ok(&self.data[k * len..(k + 1) * len])
    }

    /// The kth frontal slice as an owned matrix (k is zero-based).
    pub fn frontal_slice(&self, k: usize) -> Result<DenseMatrix> {
        let s = self.slice_data(k)?;
        DenseMatrix::from_vec(self.dim_i, self.dim_j, s.to_vec())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Multilinear matrix multiplication (S, T, U) . Y: transforms every mode.
/// S is I2 x I, T is J2 x J, U is K2 x K; the result is I2 x J2 x K2 with
/// X_{pqr} = sum_{ijk} S_{pi} T_{qj} U_{rk} Y_{ijk}.
pub fn multilinear_multiply(
    y: &Tensor3,
    s: &DenseMatrix,
    t: &DenseMatrix,
    u: &DenseMatrix,
) -> Result<Tensor3> {
    let (di, dj, dk) = y.dims();
    if s.cols() != di {
        return Err(Error::DimensionMismatch {
            context: "mode-1 factor cols",
            expected: di.to_string(),
            got: s.cols().to_string(),
        });
    }
    if t.cols() != dj {
        return Err(Error::DimensionMismatch {
            context: "mode-2 factor cols",
            expected: dj.to_string(),
            got: t.cols().to_string(),
        });
    }
    if u.cols() != dk {
        return Err(Error::DimensionMismatch {
            context: "mode-3 factor cols",
            expected: dk.to_string(),
            got: u.cols().to_string(),
        });
    }
    let t_t = t.transpose();
    // Mode-1/2 transform of each input slice, then mix slices along mode 3.
    let mut transformed = Vec::with_capacity(dk);
    for k in 0..dk {
        let yk = y.frontal_slice(k)?;
        transformed.push(s.matmul(&yk).matmul(&t_t));
    }
    let (i2, j2, k2) = (s.rows(), t.rows(), u.rows());
    let mut data = Vec::with_capacity(i2 * j2 * k2);
    for r in 0..k2 {
        let mut out = DenseMatrix::zeros(i2, j2);
        for k in 0..dk {
            let w = u.get(r, k);
            if w != 0.0 {
                out = out.add(&transformed[k].scale(w));
            }
        }
        data.extend_from_slice(out.data());
    }
    Tensor3::new(i2, j2, k2, data)
}

/// Slicemix: (I, I, U) . Y with a 2x2 matrix U on the third mode.
/// Nonsingular U is what the invariance statements assume; the operation
/// itself accepts any 2x2 U.
pub fn slicemix(y: &Tensor3, u: &DenseMatrix) -> Result<Tensor3> {
    let (_, _, dk) = y.dims();
    if dk != 2 || u.rows() != 2 || u.cols() != 2 {
        return Err(Error::DimensionMismatch {
            context: "slicemix third mode",
            expected: "K = 2 and U 2x2".to_string(),
            got: format!("K = {}, U {}x{}", dk, u.rows(), u.cols()),
        });
    }
    let y1 = y.frontal_slice(0)?;
    let y2 = y.frontal_slice(1)?;
    let x1 = y1.linear_combination(u.get(0, 0), &y2, u.get(0, 1));
    let x2 = y1.linear_combination(u.get(1, 0), &y2, u.get(1, 1));
    Tensor3::from_slices(&x1, &x2)
}

/// Frobenius distance ||Y - Z||.
pub fn frobenius_distance(y: &Tensor3, z: &Tensor3) -> Result<f64> {
    if y.dims() != z.dims() {
        return Err(Error::DimensionMismatch {
            context: "tensor dims",
            expected: format!("{:?}", y.dims()),
            got: format!("{:?}", z.dims()),
        });
    }
    Ok(y
        .data()
        .iter()
        .zip(z.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// Rank-R factor triple: A (I x R), B (J x R), C (2 x R). Column r of each
/// factor gives one rank-1 term x_r o y_r o z_r.
#[derive(Debug, Clone)]
pub struct CpFactors {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub c: DenseMatrix,
}

impl CpFactors {
    pub fn new(a: DenseMatrix, b: DenseMatrix, c: DenseMatrix) -> Result<Self> {
        let r = a.cols();
        if b.cols() != r || c.cols() != r {
            return Err(Error::DimensionMismatch {
                context: "factor column counts",
                expected: r.to_string(),
                got: format!("B: {}, C: {}", b.cols(), c.cols()),
            });
        }
        if c.rows() != 2 {
            return Err(Error::DimensionMismatch {
                context: "third-mode factor rows",
                expected: "2".to_string(),
                got: c.rows().to_string(),
            });
        }
        Ok(Self { a, b, c })
    }

    pub fn rank(&self) -> usize {
        self.a.cols()
    }
}

/// Sum of R outer products: Y_{ijk} = sum_r A_{ir} B_{jr} C_{kr}.
pub fn cp_reconstruct(f: &CpFactors) -> Result<Tensor3> {
    let (di, dj) = (f.a.rows(), f.b.rows());
    let r = f.rank();
    let mut data = vec![0.0; di * dj * 2];
    for k in 0..2 {
        for i in 0..di {
            for j in 0..dj {
                let mut s = 0.0;
                for t in 0..r {
                    s += f.a.get(i, t) * f.b.get(j, t) * f.c.get(k, t);
                }
                data[k * di * dj + i * dj + j] = s;
            }
        }
    }
    Tensor3::new(di, dj, 2, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, random_nonsingular_2x2, seeded_rng};

    #[test]
    fn multilinear_identity_is_noop() {
        let mut rng = seeded_rng(1);
        let y = random_tensor(&mut rng, 3, 4, 2);
        let x = multilinear_multiply(
            &y,
            &DenseMatrix::identity(3),
            &DenseMatrix::identity(4),
            &DenseMatrix::identity(2),
        )
        .unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn multilinear_swap_matrix_swaps_slices() {
        let mut rng = seeded_rng(2);
        let y = random_tensor(&mut rng, 3, 3, 2);
        let swap = DenseMatrix::from_2x2(0.0, 1.0, 1.0, 0.0);
        let x = multilinear_multiply(
            &y,
            &DenseMatrix::identity(3),
            &DenseMatrix::identity(3),
            &swap,
        )
        .unwrap();
        assert_eq!(x.frontal_slice(0).unwrap(), y.frontal_slice(1).unwrap());
        assert_eq!(x.frontal_slice(1).unwrap(), y.frontal_slice(0).unwrap());
    }

    /// Brute-force triple-sum oracle for the multilinear product.
    fn multilinear_oracle(
        y: &Tensor3,
        s: &DenseMatrix,
        t: &DenseMatrix,
        u: &DenseMatrix,
    ) -> Tensor3 {
        let (di, dj, dk) = y.dims();
        let (i2, j2, k2) = (s.rows(), t.rows(), u.rows());
        let mut data = vec![0.0; i2 * j2 * k2];
        for p in 0..i2 {
            for q in 0..j2 {
                for r in 0..k2 {
                    let mut acc = 0.0;
                    for i in 0..di {
                        for j in 0..dj {
                            for k in 0..dk {
                                acc += s.get(p, i) * t.get(q, j) * u.get(r, k) * y.get(i, j, k);
                            }
                        }
                    }
                    data[r * i2 * j2 + p * j2 + q] = acc;
                }
            }
        }
        Tensor3::new(i2, j2, k2, data).unwrap()
    }

    fn random_tensor(rng: &mut impl rand::Rng, i: usize, j: usize, k: usize) -> Tensor3 {
        let data = (0..i * j * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        Tensor3::new(i, j, k, data).unwrap()
    }

    #[test]
    fn multilinear_matches_triple_sum_oracle() {
        for seed in 0..100 {
            let mut rng = seeded_rng(seed);
            let y = random_tensor(&mut rng, 3, 4, 2);
            let s = random_matrix(&mut rng, 2, 3);
            let t = random_matrix(&mut rng, 5, 4);
            let u = random_matrix(&mut rng, 2, 2);
            let got = multilinear_multiply(&y, &s, &t, &u).unwrap();
            let want = multilinear_oracle(&y, &s, &t, &u);
            assert!(frobenius_distance(&got, &want).unwrap() < 1e-12);
        }
    }

    #[test]
    fn slicemix_identity_and_shear() {
        let mut rng = seeded_rng(3);
        let y = random_tensor(&mut rng, 2, 3, 2);
        let out = slicemix(&y, &DenseMatrix::identity(2)).unwrap();
        assert_eq!(out, y);

        let shear = DenseMatrix::from_2x2(1.0, 1.0, 0.0, 1.0);
        let out = slicemix(&y, &shear).unwrap();
        let y1 = y.frontal_slice(0).unwrap();
        let y2 = y.frontal_slice(1).unwrap();
        assert!(out.frontal_slice(0).unwrap().max_abs_diff(&y1.add(&y2)) == 0.0);
        assert!(out.frontal_slice(1).unwrap().max_abs_diff(&y2) == 0.0);
    }

    #[test]
    fn slicemix_matches_multilinear_multiply() {
        for seed in 0..100 {
            let mut rng = seeded_rng(1000 + seed);
            let y = random_tensor(&mut rng, 3, 3, 2);
            let u = random_nonsingular_2x2(&mut rng);
            let got = slicemix(&y, &u).unwrap();
            let want = multilinear_multiply(
                &y,
                &DenseMatrix::identity(3),
                &DenseMatrix::identity(3),
                &u,
            )
            .unwrap();
            assert!(frobenius_distance(&got, &want).unwrap() < 1e-13);
        }
    }

    #[test]
    fn frobenius_distance_basics() {
        let ones = Tensor3::new(2, 2, 2, vec![1.0; 8]).unwrap();
        let zero = Tensor3::zeros(2, 2, 2).unwrap();
        assert_eq!(frobenius_distance(&ones, &ones).unwrap(), 0.0);
        assert!((frobenius_distance(&ones, &zero).unwrap() - 8.0f64.sqrt()).abs() < 1e-15);

        let mut rng = seeded_rng(4);
        for _ in 0..100 {
            let y = random_tensor(&mut rng, 2, 3, 2);
            let z = random_tensor(&mut rng, 2, 3, 2);
            let direct: f64 = y
                .data()
                .iter()
                .zip(z.data())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!((frobenius_distance(&y, &z).unwrap() - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn cp_reconstruct_unit_rank_one() {
        let a = DenseMatrix::from_vec(3, 1, vec![1.0, 0.0, 0.0]).unwrap();
        let b = DenseMatrix::from_vec(3, 1, vec![1.0, 0.0, 0.0]).unwrap();
        let c = DenseMatrix::from_vec(2, 1, vec![1.0, 0.0]).unwrap();
        let y = cp_reconstruct(&CpFactors::new(a, b, c).unwrap()).unwrap();
        assert_eq!(y.get(0, 0, 0), 1.0);
        assert_eq!(y.data().iter().filter(|v| **v != 0.0).count(), 1);
    }

    #[test]
    fn cp_reconstruct_diagonal_construction() {
        let r = 3;
        let a = DenseMatrix::identity(r);
        let b = DenseMatrix::identity(r);
        let c = DenseMatrix::from_rows(&[vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]]).unwrap();
        let y = cp_reconstruct(&CpFactors::new(a, b, c).unwrap()).unwrap();
        assert_eq!(y.frontal_slice(0).unwrap(), DenseMatrix::identity(r));
        assert_eq!(
            y.frontal_slice(1).unwrap(),
            DenseMatrix::diagonal(&[1.0, 2.0, 3.0])
        );
    }

    #[test]
    fn cp_reconstruct_matches_triple_product_oracle() {
        for seed in 0..100 {
            let mut rng = seeded_rng(2000 + seed);
            let a = random_matrix(&mut rng, 3, 2);
            let b = random_matrix(&mut rng, 3, 2);
            let c = random_matrix(&mut rng, 2, 2);
            let f = CpFactors::new(a.clone(), b.clone(), c.clone()).unwrap();
            let y = cp_reconstruct(&f).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..2 {
                        let want: f64 =
                            (0..2).map(|r| a.get(i, r) * b.get(j, r) * c.get(k, r)).sum();
                        assert!((y.get(i, j, k) - want).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn frontal_slice_round_trip() {
        let zero = Tensor3::zeros(2, 3, 2).unwrap();
        assert_eq!(zero.frontal_slice(0).unwrap(), DenseMatrix::zeros(2, 3));
        assert!(zero.frontal_slice(2).is_err());

        let mut rng = seeded_rng(5);
        let s1 = random_matrix(&mut rng, 4, 3);
        let s2 = random_matrix(&mut rng, 4, 3);
        let y = Tensor3::from_slices(&s1, &s2).unwrap();
        assert_eq!(y.frontal_slice(0).unwrap(), s1);
        assert_eq!(y.frontal_slice(1).unwrap(), s2);
    }
}
