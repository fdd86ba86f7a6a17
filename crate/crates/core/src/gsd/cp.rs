//! Rank-I CP factors for interior points: diagonalize the mixed slice
//! quotient through the QZ route and undo the slicemix on the third mode.

use crate::classify::{classify_square, RankRegionOptions, RegionCase};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::pencil::{real_qz, QzOptions};
use crate::tensor::{slicemix, CpFactors, Tensor3};

/// CP factors of an I x I x 2 array that is an interior point of the
/// rank-I set (distinct real eigenvalues after a nonsingular slicemix).
/// Factor columns are unit-norm with the scale absorbed into C, ordered by
/// ascending eigenvalue; the dominant entry of each A and B column is made
/// nonnegative, with signs compensated in C.
pub fn extract_cp_interior(y: &Tensor3, tol: f64) -> Result<CpFactors> {
    let (n, m, k) = y.dims();
    if n != m || k != 2 {
        return Err(Error::DimensionMismatch {
            context: "CP extraction input",
            expected: "I x I x 2".to_string(),
            got: format!("{n}x{m}x{k}"),
        });
    }
    let opts = RankRegionOptions {
        tol,
        ..RankRegionOptions::default()
    };
    let region = classify_square(y, &opts)?;
    if region.case != RegionCase::A1 {
        return Err(Error::NotInterior {
            reason: format!(
                "classified {:?} (case {:?}, margin {:.3e})",
                region.label, region.case, region.margin
            ),
        });
    }
    let u = region
        .slicemix
        .as_ref()
        .expect("interior classification carries a slicemix");
    let x = slicemix(y, u)?;
    let x1 = x.frontal_slice(0)?;
    let x2 = x.frontal_slice(1)?;

    // Eigenpairs of X2 X1^{-1} from the pair (X2, X1), never via the
    // explicit inverse: F = Q X2 Z, G = Q X1 Z, both upper triangular here
    // because all eigenvalues are real.
    let qz = real_qz(&x2, &x1, &QzOptions::default())?;
    if qz.blocks.iter().any(|b| b.size == 2) {
        return Err(Error::NotInterior {
            reason: "complex eigenvalue pair survived the slicemix".to_string(),
        });
    }
    let mut lambdas: Vec<f64> = Vec::with_capacity(n);
    for l in 0..n {
        let g_ll = qz.g.get(l, l);
        if g_ll.abs() <= f64::MIN_POSITIVE {
            return Err(Error::NotInterior {
                reason: "infinite eigenvalue in the mixed pair".to_string(),
            });
        }
        lambdas.push(qz.f.get(l, l) / g_ll);
    }

    // Generalized eigenvector for lambda_l: back-substitute
    // (F - lambda G) w = 0 above the singular diagonal position, then map
    // back with Z. X2 v = lambda X1 v holds for v = Z w.
    let mut v = DenseMatrix::zeros(n, n);
    for (l, &lambda) in lambdas.iter().enumerate() {
        let mut w = vec![0.0; n];
        w[l] = 1.0;
        for i in (0..l).rev() {
            let mut s = 0.0;
            for j in (i + 1)..=l {
                s += (qz.f.get(i, j) - lambda * qz.g.get(i, j)) * w[j];
            }
            let d = qz.f.get(i, i) - lambda * qz.g.get(i, i);
            if d.abs() <= f64::MIN_POSITIVE {
                return Err(Error::NotInterior {
                    reason: "eigenvalues too close to separate eigenvectors".to_string(),
                });
            }
            w[i] = -s / d;
        }
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for i in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                s += qz.z.get(i, j) * w[j];
            }
            v.set(i, l, s / norm);
        }
    }

    // The eigenvector matrix of X2 X1^{-1} is X1 V, so X1 = (X1 V) I V^{-1}
    // and X2 = (X1 V) diag(lambda) V^{-1}: A = X1 V and B^T = V^{-1}. The
    // third-mode coefficients of the mixed array are rows (1, lambda),
    // mapped back through U^{-1}.
    let a = x1.matmul(&v);
    let b_t = v
        .solve(&DenseMatrix::identity(n), 1e-13)
        .map_err(|_| Error::NotInterior {
            reason: "eigenvector matrix is numerically singular".to_string(),
        })?;
    let mut c_mixed = DenseMatrix::zeros(2, n);
    for r in 0..n {
        c_mixed.set(0, r, 1.0);
        c_mixed.set(1, r, lambdas[r]);
    }
    let c = u.solve(&c_mixed, 1e-13).map_err(|_| Error::NotInterior {
        reason: "slicemix matrix is numerically singular".to_string(),
    })?;

    let mut a = a;
    let mut b = b_t.transpose();
    let mut c = c;
    canonicalize(&mut a, &mut b, &mut c, &lambdas);
    CpFactors::new(a, b, c)
}

/// Unit-norm columns with scale in C, dominant entries nonnegative,
/// columns sorted by eigenvalue.
fn canonicalize(a: &mut DenseMatrix, b: &mut DenseMatrix, c: &mut DenseMatrix, lambdas: &[f64]) {
    let n = a.rows();
    let r = a.cols();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&x, &y| lambdas[x].total_cmp(&lambdas[y]));

    let mut a2 = DenseMatrix::zeros(n, r);
    let mut b2 = DenseMatrix::zeros(b.rows(), r);
    let mut c2 = DenseMatrix::zeros(2, r);
    for (dst, &src) in order.iter().enumerate() {
        let mut na = 0.0;
        let mut nb = 0.0;
        for i in 0..n {
            na += a.get(i, src) * a.get(i, src);
        }
        for i in 0..b.rows() {
            nb += b.get(i, src) * b.get(i, src);
        }
        let na = na.sqrt();
        let nb = nb.sqrt();
        let mut sign_a = 1.0;
        let mut max_a = 0.0;
        for i in 0..n {
            if a.get(i, src).abs() > max_a {
                max_a = a.get(i, src).abs();
                sign_a = a.get(i, src).signum();
            }
        }
        let mut sign_b = 1.0;
        let mut max_b = 0.0;
        for i in 0..b.rows() {
            if b.get(i, src).abs() > max_b {
                max_b = b.get(i, src).abs();
                sign_b = b.get(i, src).signum();
            }
        }
        for i in 0..n {
            a2.set(i, dst, sign_a * a.get(i, src) / na);
        }
        for i in 0..b.rows() {
            b2.set(i, dst, sign_b * b.get(i, src) / nb);
        }
        for k in 0..2 {
            c2.set(k, dst, sign_a * sign_b * c.get(k, src) * na * nb);
        }
    }
    *a = a2;
    *b = b2;
    *c = c2;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_orthonormal, seeded_rng};
    use crate::tensor::{cp_reconstruct, frobenius_distance};
    use rand::Rng;

    #[test]
    fn diagonal_case_recovers_identity_factors() {
        let y = Tensor3::from_slices(
            &DenseMatrix::identity(3),
            &DenseMatrix::diagonal(&[1.0, 2.0, 3.0]),
        )
        .unwrap();
        let f = extract_cp_interior(&y, 1e-8).unwrap();
        for r in 0..3 {
            assert!((f.c.get(0, r) - 1.0).abs() < 1e-10);
            assert!((f.c.get(1, r) - (r as f64 + 1.0)).abs() < 1e-10);
            for i in 0..3 {
                let want = if i == r { 1.0 } else { 0.0 };
                assert!((f.a.get(i, r) - want).abs() < 1e-10);
                assert!((f.b.get(i, r) - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn round_trips_well_conditioned_cp_tensors() {
        for seed in 0..20u64 {
            let mut rng = seeded_rng(500 + seed);
            let n = 3;
            // Distinct eigenvalue ratios via a diagonal construction under
            // orthonormal two-mode transforms.
            let s = random_orthonormal(&mut rng, n, n);
            let t = random_orthonormal(&mut rng, n, n);
            let mut d1 = Vec::new();
            let mut d2 = Vec::new();
            for i in 0..n {
                let base = 1.0 + i as f64 + rng.random_range(0.0..0.3);
                d1.push(1.0 + rng.random_range(0.0..1.0));
                d2.push(base * d1[i]);
            }
            let y1 = s.matmul(&DenseMatrix::diagonal(&d1)).matmul(&t.transpose());
            let y2 = s.matmul(&DenseMatrix::diagonal(&d2)).matmul(&t.transpose());
            let y = Tensor3::from_slices(&y1, &y2).unwrap();
            let f = extract_cp_interior(&y, 1e-8).unwrap();
            let back = cp_reconstruct(&f).unwrap();
            let resid = frobenius_distance(&y, &back).unwrap();
            assert!(
                resid <= 1e-8 * y.frobenius_norm(),
                "seed {seed}: residual {resid:.3e}"
            );
        }
    }

    #[test]
    fn repeated_eigenvalue_is_not_interior() {
        let y = Tensor3::from_slices(&DenseMatrix::identity(2), &DenseMatrix::identity(2)).unwrap();
        assert!(matches!(
            extract_cp_interior(&y, 1e-8),
            Err(Error::NotInterior { .. })
        ));
    }
}
