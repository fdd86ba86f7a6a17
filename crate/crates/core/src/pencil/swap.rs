//! Swapping adjacent diagonal blocks of a quasi-triangular pencil by
//! orthonormal transformations, via the generalized Sylvester equation.

use super::givens::{apply_left, make_givens};
use super::{Block, PencilQZ};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Outcome of a swap request. `performed == false` marks the degenerate
/// case where the 1x1 member has F and G diagonal entries that both vanish
/// (a common zero): such a block carries no eigenvalue to exchange and the
/// pair is left untouched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapReport {
    pub performed: bool,
}

/// Solve the coupled pair
///   F11 * X - Y * F22 = F12
///   G11 * X - Y * G22 = G12
/// for X, Y (each s1 x s2). The system is uniquely solvable exactly when
/// the pencils (F11, G11) and (F22, G22) share no generalized eigenvalue.
pub fn solve_generalized_sylvester(
    f11: &DenseMatrix,
    f12: &DenseMatrix,
    f22: &DenseMatrix,
    g11: &DenseMatrix,
    g12: &DenseMatrix,
    g22: &DenseMatrix,
) -> Result<(DenseMatrix, DenseMatrix)> {
    let s1 = f11.rows();
    let s2 = f22.rows();
    let nx = s1 * s2;
    let n = 2 * nx;
    let mut sys = DenseMatrix::zeros(n, n);
    let mut rhs = DenseMatrix::zeros(n, 1);
    // Unknown layout: [vec(X); vec(Y)], both row-major.
    for (half, (m11, m22, m12)) in [(0, (f11, f22, f12)), (1, (g11, g22, g12))] {
        for p in 0..s1 {
            for q in 0..s2 {
                let row = half * nx + p * s2 + q;
                for c in 0..s1 {
                    sys.set(row, c * s2 + q, sys.get(row, c * s2 + q) + m11.get(p, c));
                }
                for c in 0..s2 {
                    sys.set(
                        row,
                        nx + p * s2 + c,
                        sys.get(row, nx + p * s2 + c) - m22.get(c, q),
                    );
                }
                rhs.set(row, 0, m12.get(p, q));
            }
        }
    }
    let sol = sys.solve(&rhs, 1e-13).map_err(|_| Error::SwapNotPossible {
        reason: "generalized Sylvester system is singular (shared eigenvalue or \
                 degenerate coupling)"
            .to_string(),
    })?;
    let mut x = DenseMatrix::zeros(s1, s2);
    let mut y = DenseMatrix::zeros(s1, s2);
    for p in 0..s1 {
        for q in 0..s2 {
            x.set(p, q, sol.get(p * s2 + q, 0));
            y.set(p, q, sol.get(nx + p * s2 + q, 0));
        }
    }
    Ok((x, y))
}

/// Square orthonormal matrix whose first `w.cols()` columns span the column
/// space of `w` (which must have full column rank).
fn orthonormal_completion(w: &DenseMatrix) -> DenseMatrix {
    let m = w.rows();
    let k = w.cols();
    let mut q = DenseMatrix::zeros(m, m);
    let mut have = 0;
    for j in 0..k {
        let mut col: Vec<f64> = (0..m).map(|i| w.get(i, j)).collect();
        for t in 0..have {
            let dot: f64 = (0..m).map(|i| col[i] * q.get(i, t)).sum();
            for i in 0..m {
                col[i] -= dot * q.get(i, t);
            }
        }
        let norm: f64 = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm > 1e-300, "orthonormal_completion: rank-deficient input");
        for i in 0..m {
            q.set(i, have, col[i] / norm);
        }
        have += 1;
    }
    let mut cand = 0;
    while have < m {
        let mut col = vec![0.0; m];
        col[cand] = 1.0;
        cand += 1;
        for t in 0..have {
            let dot: f64 = (0..m).map(|i| col[i] * q.get(i, t)).sum();
            for i in 0..m {
                col[i] -= dot * q.get(i, t);
            }
        }
        let norm: f64 = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for i in 0..m {
                q.set(i, have, col[i] / norm);
            }
            have += 1;
        }
    }
    q
}

/// [X; -I] stacked, the invariant-subspace basis used on each side.
fn stacked_basis(x: &DenseMatrix) -> DenseMatrix {
    let s1 = x.rows();
    let s2 = x.cols();
    let mut w = DenseMatrix::zeros(s1 + s2, s2);
    w.set_block(0, 0, x);
    for j in 0..s2 {
        w.set(s1 + j, j, -1.0);
    }
    w
}

fn premultiply_rows(target: &mut DenseMatrix, p: usize, m: &DenseMatrix) {
    let k = m.rows();
    let cols = target.cols();
    for j in 0..cols {
        let old: Vec<f64> = (0..k).map(|r| target.get(p + r, j)).collect();
        for r in 0..k {
            let mut s = 0.0;
            for c in 0..k {
                s += m.get(r, c) * old[c];
            }
            target.set(p + r, j, s);
        }
    }
}

fn postmultiply_cols(target: &mut DenseMatrix, p: usize, m: &DenseMatrix) {
    let k = m.rows();
    let rows = target.rows();
    for i in 0..rows {
        let old: Vec<f64> = (0..k).map(|c| target.get(i, p + c)).collect();
        for c in 0..k {
            let mut s = 0.0;
            for r in 0..k {
                s += old[r] * m.get(r, c);
            }
            target.set(i, p + c, s);
        }
    }
}

impl PencilQZ {
    /// Exchange diagonal blocks `block_index` and `block_index + 1` by
    /// orthonormal transformations accumulated into Q and Z. The
    /// generalized eigenvalue multiset is preserved.
    pub fn swap_adjacent_blocks(&mut self, block_index: usize) -> Result<SwapReport> {
        if block_index + 1 >= self.blocks.len() {
            return Err(Error::IndexOutOfRange {
                context: "swap block index",
                index: block_index,
                limit: self.blocks.len().saturating_sub(1),
            });
        }
        let b1 = self.blocks[block_index];
        let b2 = self.blocks[block_index + 1];
        let p = b1.start;
        let (s1, s2) = (b1.size, b2.size);
        let s = s1 + s2;

        let f11 = self.f.block(p, p + s1, p, p + s1);
        let f12 = self.f.block(p, p + s1, p + s1, p + s);
        let f22 = self.f.block(p + s1, p + s, p + s1, p + s);
        let g11 = self.g.block(p, p + s1, p, p + s1);
        let g12 = self.g.block(p, p + s1, p + s1, p + s);
        let g22 = self.g.block(p + s1, p + s, p + s1, p + s);

        // A 1x1 block whose F and G entries both vanish is a common zero: it
        // has no eigenvalue, the coupled system is singular by construction,
        // and the paper's swap does not apply. Report a no-op.
        let scale = f11
            .max_abs()
            .max(f22.max_abs())
            .max(g11.max_abs())
            .max(g22.max_abs())
            .max(f64::MIN_POSITIVE);
        let zero_tol = 1e-13 * scale;
        let degenerate_1x1 = (s2 == 1
            && f22.get(0, 0).abs() <= zero_tol
            && g22.get(0, 0).abs() <= zero_tol)
            || (s1 == 1
                && f11.get(0, 0).abs() <= zero_tol
                && g11.get(0, 0).abs() <= zero_tol);
        if degenerate_1x1 {
            return Ok(SwapReport { performed: false });
        }

        let (x, y) = solve_generalized_sylvester(&f11, &f12, &f22, &g11, &g12, &g22)?;
        let ztilde = orthonormal_completion(&stacked_basis(&x));
        let qtilde = orthonormal_completion(&stacked_basis(&y));
        let qt = qtilde.transpose();

        premultiply_rows(&mut self.f, p, &qt);
        premultiply_rows(&mut self.g, p, &qt);
        premultiply_rows(&mut self.q, p, &qt);
        postmultiply_cols(&mut self.f, p, &ztilde);
        postmultiply_cols(&mut self.g, p, &ztilde);
        postmultiply_cols(&mut self.z, p, &ztilde);

        // The swapped form is block upper triangular by construction; the
        // sub-block entries are roundoff and are cleared.
        for i in (p + s2)..(p + s) {
            for j in p..(p + s2) {
                self.f.set(i, j, 0.0);
                self.g.set(i, j, 0.0);
            }
        }
        // Restore G's triangularity inside any 2x2 block with a left
        // rotation; F's corresponding block stays full, which quasi-upper
        // triangular form allows.
        if s2 == 2 {
            self.restore_g_in_block(p);
        }
        if s1 == 2 {
            self.restore_g_in_block(p + s2);
        }

        self.blocks[block_index] = Block { start: p, size: s2 };
        self.blocks[block_index + 1] = Block {
            start: p + s2,
            size: s1,
        };
        Ok(SwapReport { performed: true })
    }

    /// Left rotation on rows (r, r+1) zeroing G[r+1][r].
    fn restore_g_in_block(&mut self, r: usize) {
        if self.g.get(r + 1, r) != 0.0 {
            let (c, s, _) = make_givens(self.g.get(r, r), self.g.get(r + 1, r));
            apply_left(&mut self.g, r, r + 1, c, s);
            apply_left(&mut self.f, r, r + 1, c, s);
            apply_left(&mut self.q, r, r + 1, c, s);
        }
        self.g.set(r + 1, r, 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::{real_qz, QzOptions};

    fn diag_pencil(fd: &[f64], gd: &[f64]) -> PencilQZ {
        real_qz(
            &DenseMatrix::diagonal(fd),
            &DenseMatrix::diagonal(gd),
            &QzOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn swap_1x1_blocks_exchanges_eigenvalues() {
        let mut qz = diag_pencil(&[1.0, 2.0], &[1.0, 1.0]);
        let a = qz.reconstruct_a();
        let b = qz.reconstruct_b();
        let before: Vec<f64> = qz.eigenvalues().iter().map(|e| e.value().0).collect();
        let rep = qz.swap_adjacent_blocks(0).unwrap();
        assert!(rep.performed);
        let after: Vec<f64> = qz.eigenvalues().iter().map(|e| e.value().0).collect();
        assert!((before[0] - after[1]).abs() < 1e-12);
        assert!((before[1] - after[0]).abs() < 1e-12);
        // Same pair, still reconstructed.
        assert!(qz.reconstruct_a().max_abs_diff(&a) < 1e-12);
        assert!(qz.reconstruct_b().max_abs_diff(&b) < 1e-12);
        assert!(qz.q.orthonormality_residual() < 1e-13);
        assert!(qz.z.orthonormality_residual() < 1e-13);
    }

    #[test]
    fn sylvester_solution_matches_paper_example() {
        // 2x2 rotation block with a trailing common-coupling scalar:
        // F_i x - f_{i+1} y = f, G_i x - g_{i+1} y = g with
        // F_i = [[0,-1],[1,0]], f = (1,0)^T, f_{i+1} = 0,
        // G_i = I, g = (0,0)^T, g_{i+1} = 1 has solution x = y = (0,-1)^T.
        let f11 = DenseMatrix::from_2x2(0.0, -1.0, 1.0, 0.0);
        let f12 = DenseMatrix::from_vec(2, 1, vec![1.0, 0.0]).unwrap();
        let f22 = DenseMatrix::from_vec(1, 1, vec![0.0]).unwrap();
        let g11 = DenseMatrix::identity(2);
        let g12 = DenseMatrix::from_vec(2, 1, vec![0.0, 0.0]).unwrap();
        let g22 = DenseMatrix::from_vec(1, 1, vec![1.0]).unwrap();
        let (x, y) = solve_generalized_sylvester(&f11, &f12, &f22, &g11, &g12, &g22).unwrap();
        assert!(x.get(0, 0).abs() < 1e-14 && (x.get(1, 0) + 1.0).abs() < 1e-14);
        assert!(y.get(0, 0).abs() < 1e-14 && (y.get(1, 0) + 1.0).abs() < 1e-14);
        // Substitute back into both equations.
        let lhs_f = f11.matmul(&x).sub(&y.scale(f22.get(0, 0)));
        let lhs_g = g11.matmul(&x).sub(&y.scale(g22.get(0, 0)));
        assert!(lhs_f.max_abs_diff(&f12) < 1e-14);
        assert!(lhs_g.max_abs_diff(&g12) < 1e-14);
    }

    #[test]
    fn swap_degenerate_common_zero_is_noop() {
        // Trailing 1x1 with both diagonal entries zero: no eigenvalue there.
        let f = DenseMatrix::from_rows(&[
            vec![0.0, -1.0, 0.5],
            vec![1.0, 0.0, -0.25],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let g = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 2.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let mut qz = PencilQZ {
            q: DenseMatrix::identity(3),
            z: DenseMatrix::identity(3),
            f: f.clone(),
            g,
            blocks: vec![Block { start: 0, size: 2 }, Block { start: 2, size: 1 }],
        };
        let rep = qz.swap_adjacent_blocks(0).unwrap();
        assert!(!rep.performed);
        assert_eq!(qz.f, f);
    }
}
