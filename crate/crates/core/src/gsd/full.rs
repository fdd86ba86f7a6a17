//! Constructive full GSD for identically singular pencils: reduce to
//! quasi-triangular form, split every real-eigenvalue 2x2 block, then
//! dissolve each remaining complex-pair block against a common zero on the
//! diagonals using a 3x3 one-sided elimination.

use super::Gsd;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::pencil::{is_singular_pencil, real_qz, singularity_score, PencilQZ, QzOptions};
use crate::tensor::Tensor3;

/// Full GSD of an n x n x 2 array whose pencil (Y1, Y2) is identically
/// singular. The reduction always succeeds in exact arithmetic; numerically
/// it reports `NumericalBreakdown` when no common zero can be located on
/// the diagonals within `tol` (relative).
pub fn full_gsd_singular_pencil(y: &Tensor3, tol: f64) -> Result<Gsd> {
    let (n, m, k) = y.dims();
    if n != m || k != 2 {
        return Err(Error::DimensionMismatch {
            context: "singular-pencil GSD input",
            expected: "n x n x 2".to_string(),
            got: format!("{n}x{m}x{k}"),
        });
    }
    let y1 = y.frontal_slice(0)?;
    let y2 = y.frontal_slice(1)?;
    if !is_singular_pencil(&y1, &y2, tol)? {
        return Err(Error::NotSingularPencil {
            max_scaled_det: singularity_score(&y1, &y2)?,
        });
    }

    let mut qz = real_qz(&y1, &y2, &QzOptions::default())?;
    let fz_tol = tol * qz.f.frobenius_norm().max(f64::MIN_POSITIVE);
    let gz_tol = tol * qz.g.frobenius_norm().max(f64::MIN_POSITIVE);

    // Each round dissolves one complex-pair block. A round costs at most n
    // swaps; n/2 blocks bounds the work.
    for _round in 0..=n {
        let zeros = common_zero_positions(&qz, fz_tol, gz_tol);
        let pairs = qz
            .blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.size == 2)
            .collect::<Vec<_>>();
        if pairs.is_empty() {
            break;
        }
        // Nearest (zero, block) pair; nothing can sit strictly between the
        // two, so the corridor contains only regular 1x1 blocks.
        let mut best: Option<(usize, usize, usize)> = None; // (dist, zero_block_idx, pair_block_idx)
        for &(bi, _) in &pairs {
            for &zi in &zeros {
                let dist = bi.abs_diff(zi);
                if best.map_or(true, |(d, _, _)| dist < d) {
                    best = Some((dist, zi, bi));
                }
            }
        }
        let Some((_, zero_idx, block_idx)) = best else {
            let (min_f, min_g) = smallest_diagonal_magnitudes(&qz);
            return Err(Error::NumericalBreakdown {
                min_f_diag: min_f,
                min_g_diag: min_g,
            });
        };
        move_block_adjacent_to_zero(&mut qz, block_idx, zero_idx)?;
        // Positions may have shifted; rediscover the pair now adjacent.
        let zeros = common_zero_positions(&qz, fz_tol, gz_tol);
        let adjacency = find_adjacent_block_and_zero(&qz, &zeros).ok_or_else(|| {
            let (min_f, min_g) = smallest_diagonal_magnitudes(&qz);
            Error::NumericalBreakdown {
                min_f_diag: min_f,
                min_g_diag: min_g,
            }
        })?;
        match adjacency {
            Adjacency::ZeroBelow { block_start } => eliminate_with_zero_below(&mut qz, block_start),
            Adjacency::ZeroAbove { zero_pos } => eliminate_with_zero_above(&mut qz, zero_pos),
        }
        qz.rescan_blocks();
    }

    if qz.blocks.iter().any(|b| b.size == 2) {
        let (min_f, min_g) = smallest_diagonal_magnitudes(&qz);
        return Err(Error::NumericalBreakdown {
            min_f_diag: min_f,
            min_g_diag: min_g,
        });
    }

    let mut r1 = qz.f;
    let mut r2 = qz.g;
    r1.zero_strict_lower();
    r2.zero_strict_lower();
    Gsd::new(qz.q.transpose(), qz.z, r1, r2)
}

/// Block indices of 1x1 blocks whose F and G diagonal entries both vanish.
fn common_zero_positions(qz: &PencilQZ, fz_tol: f64, gz_tol: f64) -> Vec<usize> {
    qz.blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| {
            b.size == 1
                && qz.f.get(b.start, b.start).abs() <= fz_tol
                && qz.g.get(b.start, b.start).abs() <= gz_tol
        })
        .map(|(i, _)| i)
        .collect()
}

fn smallest_diagonal_magnitudes(qz: &PencilQZ) -> (f64, f64) {
    let mut min_f = f64::INFINITY;
    let mut min_g = f64::INFINITY;
    for b in &qz.blocks {
        if b.size == 1 {
            min_f = min_f.min(qz.f.get(b.start, b.start).abs());
            min_g = min_g.min(qz.g.get(b.start, b.start).abs());
        }
    }
    (min_f, min_g)
}

/// Swap the 2x2 block at `block_idx` past regular 1x1 neighbours until it
/// is adjacent to the common zero at block index `zero_idx`.
fn move_block_adjacent_to_zero(
    qz: &mut PencilQZ,
    mut block_idx: usize,
    zero_idx: usize,
) -> Result<()> {
    if zero_idx < block_idx {
        while block_idx > zero_idx + 1 {
            let rep = qz.swap_adjacent_blocks(block_idx - 1)?;
            if !rep.performed {
                // The neighbour is itself a common zero; adjacency reached.
                return Ok(());
            }
            block_idx -= 1;
        }
    } else {
        while block_idx + 1 < zero_idx {
            let rep = qz.swap_adjacent_blocks(block_idx)?;
            if !rep.performed {
                return Ok(());
            }
            block_idx += 1;
        }
    }
    Ok(())
}

enum Adjacency {
    /// 2x2 block at rows/cols (block_start, block_start+1), zero right below.
    ZeroBelow { block_start: usize },
    /// Zero at `zero_pos`, 2x2 block right after it.
    ZeroAbove { zero_pos: usize },
}

fn find_adjacent_block_and_zero(qz: &PencilQZ, zeros: &[usize]) -> Option<Adjacency> {
    for &zi in zeros {
        if zi > 0 && qz.blocks[zi - 1].size == 2 {
            return Some(Adjacency::ZeroBelow {
                block_start: qz.blocks[zi - 1].start,
            });
        }
        if zi + 1 < qz.blocks.len() && qz.blocks[zi + 1].size == 2 {
            return Some(Adjacency::ZeroAbove {
                zero_pos: qz.blocks[zi].start,
            });
        }
    }
    None
}

/// Unit 3-vector orthogonal to both inputs (cross product, with a fallback
/// basis completion when the inputs are parallel).
fn orthogonal_to_both(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    let cross = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let norm = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let scale = (u[0].hypot(u[1]).hypot(u[2])) * (v[0].hypot(v[1]).hypot(v[2]));
    if norm > 1e-12 * scale.max(1e-300) {
        return [cross[0] / norm, cross[1] / norm, cross[2] / norm];
    }
    // Inputs parallel: orthogonalize a standard basis vector against u (or
    // v when u vanishes).
    let base = if u[0].hypot(u[1]).hypot(u[2]) >= v[0].hypot(v[1]).hypot(v[2]) {
        u
    } else {
        v
    };
    let bn = base[0].hypot(base[1]).hypot(base[2]);
    if bn == 0.0 {
        return [1.0, 0.0, 0.0];
    }
    let b = [base[0] / bn, base[1] / bn, base[2] / bn];
    for cand in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let dot = cand[0] * b[0] + cand[1] * b[1] + cand[2] * b[2];
        let w = [cand[0] - dot * b[0], cand[1] - dot * b[1], cand[2] - dot * b[2]];
        let wn = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        if wn > 1e-6 {
            return [w[0] / wn, w[1] / wn, w[2] / wn];
        }
    }
    [1.0, 0.0, 0.0]
}

/// Complete a unit 3-vector to a right-handed orthonormal basis, returned
/// as the columns of a 3x3 matrix with `first` in the requested position.
fn orthonormal_3x3_with_column(v: [f64; 3], position: usize) -> DenseMatrix {
    // Build [v | a | b] then rotate columns so v sits at `position`.
    let pick = if v[0].abs() <= v[1].abs() && v[0].abs() <= v[2].abs() {
        [1.0, 0.0, 0.0]
    } else if v[1].abs() <= v[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let a = orthogonal_to_both(v, pick);
    let b = [
        v[1] * a[2] - v[2] * a[1],
        v[2] * a[0] - v[0] * a[2],
        v[0] * a[1] - v[1] * a[0],
    ];
    let cols: [[f64; 3]; 3] = match position {
        0 => [v, a, b],
        2 => [a, b, v],
        _ => [a, v, b],
    };
    let mut m = DenseMatrix::zeros(3, 3);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            m.set(i, j, col[i]);
        }
    }
    m
}

/// Common zero right below the block: postmultiply the 3x3 corner at
/// (p..p+3) by an orthonormal matrix whose first column is orthogonal to
/// the second rows of both corner matrices. Both corners become upper
/// triangular and the zero stays at position p+2.
fn eliminate_with_zero_below(qz: &mut PencilQZ, p: usize) {
    let z = p + 2;
    qz.f.set(z, z, 0.0);
    qz.g.set(z, z, 0.0);
    let row_f = [qz.f.get(p + 1, p), qz.f.get(p + 1, p + 1), qz.f.get(p + 1, z)];
    let row_g = [0.0, qz.g.get(p + 1, p + 1), qz.g.get(p + 1, z)];
    let z1 = orthogonal_to_both(row_f, row_g);
    let ztilde = orthonormal_3x3_with_column(z1, 0);
    postmultiply_cols3(&mut qz.f, p, &ztilde);
    postmultiply_cols3(&mut qz.g, p, &ztilde);
    postmultiply_cols3(&mut qz.z, p, &ztilde);
    clear_corner(qz, p);
}

/// Common zero right before the block: premultiply the 3x3 corner at
/// (p..p+3) by the transpose of an orthonormal matrix whose last column is
/// orthogonal to the second columns of both corner matrices. The zero
/// stays at position p because the first columns of the corner vanish.
fn eliminate_with_zero_above(qz: &mut PencilQZ, p: usize) {
    qz.f.set(p, p, 0.0);
    qz.g.set(p, p, 0.0);
    let col_f = [qz.f.get(p, p + 1), qz.f.get(p + 1, p + 1), qz.f.get(p + 2, p + 1)];
    let col_g = [qz.g.get(p, p + 1), qz.g.get(p + 1, p + 1), 0.0];
    let q3 = orthogonal_to_both(col_f, col_g);
    let qtilde = orthonormal_3x3_with_column(q3, 2);
    let qt = qtilde.transpose();
    premultiply_rows3(&mut qz.f, p, &qt);
    premultiply_rows3(&mut qz.g, p, &qt);
    premultiply_rows3(&mut qz.q, p, &qt);
    clear_corner(qz, p);
}

/// Zero the structurally-eliminated lower entries of the 3x3 corner.
fn clear_corner(qz: &mut PencilQZ, p: usize) {
    for i in 1..3 {
        for j in 0..i {
            qz.f.set(p + i, p + j, 0.0);
            qz.g.set(p + i, p + j, 0.0);
        }
    }
}

fn postmultiply_cols3(target: &mut DenseMatrix, p: usize, m: &DenseMatrix) {
    let rows = target.rows();
    for i in 0..rows {
        let old = [target.get(i, p), target.get(i, p + 1), target.get(i, p + 2)];
        for c in 0..3 {
            let mut s = 0.0;
            for r in 0..3 {
                s += old[r] * m.get(r, c);
            }
            target.set(i, p + c, s);
        }
    }
}

fn premultiply_rows3(target: &mut DenseMatrix, p: usize, m: &DenseMatrix) {
    let cols = target.cols();
    for j in 0..cols {
        let old = [target.get(p, j), target.get(p + 1, j), target.get(p + 2, j)];
        for r in 0..3 {
            let mut s = 0.0;
            for c in 0..3 {
                s += m.get(r, c) * old[c];
            }
            target.set(p + r, j, s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_orthonormal, seeded_rng};
    use crate::tensor::frobenius_distance;

    #[test]
    fn trivial_zero_1x1() {
        let y = Tensor3::zeros(1, 1, 2).unwrap();
        let d = full_gsd_singular_pencil(&y, 1e-10).unwrap();
        assert_eq!(d.rank(), 1);
        assert_eq!(d.r1().get(0, 0), 0.0);
        assert_eq!(d.r2().get(0, 0), 0.0);
    }

    #[test]
    fn already_triangular_with_shared_zero() {
        let y1 = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let y2 = DenseMatrix::from_rows(&[vec![3.0, -1.0], vec![0.0, 0.0]]).unwrap();
        let y = Tensor3::from_slices(&y1, &y2).unwrap();
        let d = full_gsd_singular_pencil(&y, 1e-10).unwrap();
        let resid = frobenius_distance(&y, &d.reconstruct()).unwrap();
        assert!(resid <= 1e-10 * y.frobenius_norm().max(1.0), "residual {resid:.2e}");
    }

    #[test]
    fn rejects_regular_pencil() {
        let y = Tensor3::from_slices(&DenseMatrix::identity(2), &DenseMatrix::identity(2)).unwrap();
        assert!(matches!(
            full_gsd_singular_pencil(&y, 1e-10),
            Err(Error::NotSingularPencil { .. })
        ));
    }

    #[test]
    fn dissolves_complex_block_next_to_common_zero() {
        // Quasi-triangular corner with a rotation block and a shared zero,
        // hidden behind random orthonormal transforms.
        let f0 = DenseMatrix::from_rows(&[
            vec![0.0, -1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let g0 = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let mut rng = seeded_rng(21);
        let q0 = random_orthonormal(&mut rng, 3, 3);
        let z0 = random_orthonormal(&mut rng, 3, 3);
        let y1 = q0.transpose().matmul(&f0).matmul(&z0.transpose());
        let y2 = q0.transpose().matmul(&g0).matmul(&z0.transpose());
        let y = Tensor3::from_slices(&y1, &y2).unwrap();

        let d = full_gsd_singular_pencil(&y, 1e-10).unwrap();
        assert!(d.r1().is_upper_triangular(0.0));
        assert!(d.r2().is_upper_triangular(0.0));
        let resid = frobenius_distance(&y, &d.reconstruct()).unwrap();
        assert!(
            resid <= 1e-10 * y.frobenius_norm(),
            "residual {resid:.2e} vs norm {:.2e}",
            y.frobenius_norm()
        );
    }
}
