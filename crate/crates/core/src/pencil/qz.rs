//! Hessenberg-triangular reduction and implicit-shift QZ iteration.

use super::givens::{apply_left, apply_right, make_givens};
use super::{pencil_quadratic, PencilQZ};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone)]
pub struct QzOptions {
    /// Iteration budget is `max_iter_factor * n`.
    pub max_iter_factor: usize,
    /// Relative tolerance deciding that a 2x2 block's discriminant is zero,
    /// i.e. that a borderline block has a real (double) eigenvalue.
    pub real_disc_tol: f64,
}

impl Default for QzOptions {
    fn default() -> Self {
        Self {
            max_iter_factor: 30,
            real_disc_tol: 1e-10,
        }
    }
}

/// Working state: F quasi-triangular-to-be, G upper triangular, with the
/// orthonormal accumulators satisfying F = Q A Z, G = Q B Z at all times.
struct QzState {
    f: DenseMatrix,
    g: DenseMatrix,
    q: DenseMatrix,
    z: DenseMatrix,
}

impl QzState {
    fn n(&self) -> usize {
        self.f.rows()
    }

    fn left(&mut self, i1: usize, i2: usize, c: f64, s: f64) {
        apply_left(&mut self.f, i1, i2, c, s);
        apply_left(&mut self.g, i1, i2, c, s);
        apply_left(&mut self.q, i1, i2, c, s);
    }

    fn right(&mut self, j1: usize, j2: usize, c: f64, s: f64) {
        apply_right(&mut self.f, j1, j2, c, s);
        apply_right(&mut self.g, j1, j2, c, s);
        apply_right(&mut self.z, j1, j2, c, s);
    }

    /// Left rotation on adjacent rows (r-1, r) zeroing F[r][col], followed
    /// by the right rotation restoring the G fill-in at (r, r-1).
    fn left_zero_f_with_restore(&mut self, r: usize, col: usize) {
        let (c, s, _) = make_givens(self.f.get(r - 1, col), self.f.get(r, col));
        self.left(r - 1, r, c, s);
        self.f.set(r, col, 0.0);
        self.restore_g(r);
    }

    /// Right rotation on columns (r-1, r) zeroing G[r][r-1].
    fn restore_g(&mut self, r: usize) {
        let a = self.g.get(r, r);
        let b = self.g.get(r, r - 1);
        if b != 0.0 {
            let (c, s, _) = make_givens(a, -b);
            self.right(r - 1, r, c, s);
        }
        self.g.set(r, r - 1, 0.0);
    }
}

/// Real generalized Schur decomposition of a square pair (A, B):
/// Hessenberg-triangular reduction, implicit double-shift QZ iteration with
/// deflation (including infinite-eigenvalue deflation on zero G diagonals),
/// then a final pass splitting every 2x2 block that admits a real
/// generalized eigenvalue, so the surviving 2x2 blocks are strictly
/// complex-pair blocks.
pub fn real_qz(a: &DenseMatrix, b: &DenseMatrix, opts: &QzOptions) -> Result<PencilQZ> {
    super::check_pair(a, b)?;
    let n = a.rows();
    let mut st = QzState {
        f: a.clone(),
        g: b.clone(),
        q: DenseMatrix::identity(n),
        z: DenseMatrix::identity(n),
    };

    if n > 1 {
        hessenberg_triangular(&mut st);
        iterate(&mut st, opts)?;
    }

    st.g.zero_strict_lower();
    let mut qz = PencilQZ {
        q: st.q,
        z: st.z,
        f: st.f,
        g: st.g,
        blocks: Vec::new(),
    };
    qz.rescan_blocks();
    split_real_blocks(&mut qz, opts);
    Ok(qz)
}

/// Reduce (F, G) to Hessenberg-triangular form.
fn hessenberg_triangular(st: &mut QzState) {
    let n = st.n();
    // G -> upper triangular via left rotations (QR by Givens).
    for k in 0..n {
        for i in ((k + 1)..n).rev() {
            if st.g.get(i, k) != 0.0 {
                let (c, s, _) = make_givens(st.g.get(i - 1, k), st.g.get(i, k));
                st.left(i - 1, i, c, s);
            }
            st.g.set(i, k, 0.0);
        }
    }
    // F -> upper Hessenberg, keeping G triangular.
    for k in 0..n.saturating_sub(2) {
        for i in ((k + 2)..n).rev() {
            if st.f.get(i, k) != 0.0 {
                let (c, s, _) = make_givens(st.f.get(i - 1, k), st.f.get(i, k));
                st.left(i - 1, i, c, s);
                st.f.set(i, k, 0.0);
                st.restore_g(i);
            }
        }
    }
}

fn subdiag_negligible(f: &DenseMatrix, i: usize, fnorm: f64) -> bool {
    let neighbor = f.get(i - 1, i - 1).abs() + f.get(i, i).abs();
    let thresh = if neighbor > 0.0 {
        EPS * neighbor
    } else {
        EPS * fnorm
    };
    f.get(i, i - 1).abs() <= thresh
}

/// Main QZ loop: deflate from the bottom, push out infinite eigenvalues,
/// run double-shift sweeps on the active window.
fn iterate(st: &mut QzState, opts: &QzOptions) -> Result<()> {
    let n = st.n();
    let fnorm = st.f.frobenius_norm().max(f64::MIN_POSITIVE);
    let gnorm = st.g.frobenius_norm();
    let max_total = opts.max_iter_factor.max(1) * n;
    let mut total = 0usize;
    let mut stall = 0usize;
    let mut ihi = n;

    while ihi > 0 {
        for i in 1..ihi {
            if st.f.get(i, i - 1) != 0.0 && subdiag_negligible(&st.f, i, fnorm) {
                st.f.set(i, i - 1, 0.0);
            }
        }
        if ihi == 1 {
            ihi = 0;
            continue;
        }
        if st.f.get(ihi - 1, ihi - 2) == 0.0 {
            ihi -= 1;
            stall = 0;
            continue;
        }
        if ihi == 2 || st.f.get(ihi - 2, ihi - 3) == 0.0 {
            // Converged 2x2 block; real/complex resolution happens later.
            ihi -= 2;
            stall = 0;
            continue;
        }

        let mut ilo = ihi - 2;
        while ilo > 0 && st.f.get(ilo, ilo - 1) != 0.0 {
            ilo -= 1;
        }

        // Zero diagonal in G inside the window: deflate one infinite
        // eigenvalue by chasing the zero to the bottom of the window.
        if let Some(l) = (ilo..ihi).find(|&j| st.g.get(j, j).abs() <= EPS * gnorm) {
            deflate_infinite(st, l, ilo, ihi);
            ihi -= 1;
            stall = 0;
            continue;
        }

        if std::env::var("QZ_TRACE").is_ok() {
            let subs: Vec<String> = (1..st.n())
                .map(|i| format!("{:.1e}", st.f.get(i, i - 1)))
                .collect();
            let mut below = 0.0f64;
            for i in 0..st.n() {
                for j in 0..i.saturating_sub(1) {
                    below = below.max(st.f.get(i, j).abs());
                }
            }
            eprintln!(
                "iter {total} window [{ilo},{ihi}) sub: {} | below-hess {below:.1e}",
                subs.join(" ")
            );
        }
        double_shift_sweep(st, ilo, ihi, stall > 0 && stall % 10 == 0);
        total += 1;
        stall += 1;
        if total > max_total {
            return Err(Error::QzIterationFailure {
                iterations: total,
                n,
            });
        }
    }
    Ok(())
}

/// Push a zero on G's diagonal from position l down to the bottom of the
/// window, then rotate the last F subdiagonal away; the trailing position
/// becomes a deflated infinite eigenvalue.
fn deflate_infinite(st: &mut QzState, l: usize, ilo: usize, ihi: usize) {
    st.g.set(l, l, 0.0);
    for j in l..(ihi - 1) {
        // Move the zero from (j, j) to (j+1, j+1).
        let a = st.g.get(j, j + 1);
        let b = st.g.get(j + 1, j + 1);
        if a != 0.0 || b != 0.0 {
            let (c, s, _) = make_givens(a, b);
            st.left(j, j + 1, c, s);
        }
        st.g.set(j + 1, j + 1, 0.0);
        // The row mix disturbs F's Hessenberg pattern at (j+1, j-1).
        if j > ilo && st.f.get(j + 1, j - 1) != 0.0 {
            let (c, s, _) = make_givens(st.f.get(j + 1, j), -st.f.get(j + 1, j - 1));
            st.right(j - 1, j, c, s);
            st.f.set(j + 1, j - 1, 0.0);
            st.g.set(j, j - 1, 0.0);
        }
    }
    // Zero F[ihi-1][ihi-2] with a column rotation; G's trailing diagonal is
    // zero so no fill appears in G.
    let r = ihi - 1;
    if st.f.get(r, r - 1) != 0.0 {
        let (c, s, _) = make_givens(st.f.get(r, r), -st.f.get(r, r - 1));
        st.right(r - 1, r, c, s);
        st.f.set(r, r - 1, 0.0);
        st.g.set(r, r - 1, 0.0);
    }
}

/// One implicit double-shift sweep on the window [lo, hi).
fn double_shift_sweep(st: &mut QzState, lo: usize, hi: usize, exceptional: bool) {
    let (v0, v1, v2) = if exceptional {
        // Deterministic kick to break symmetric stalls.
        (0.7357, 0.5243, 0.3111)
    } else {
        shift_vector(st, lo, hi)
    };

    // Two left rotations send the shift vector to a multiple of e_lo.
    let (c1, s1, v1r) = make_givens(v1, v2);
    if v2 != 0.0 || v1 != 0.0 {
        st.left(lo + 1, lo + 2, c1, s1);
        st.restore_g(lo + 2);
    }
    let (c2, s2, _) = make_givens(v0, v1r);
    st.left(lo, lo + 1, c2, s2);
    st.restore_g(lo + 1);

    // Chase the bulge down the window. The bulge is a triangle occupying
    // (k+2, k), (k+3, k), (k+3, k+1); clearing column k bottom-up moves it
    // one column to the right via the G-restoring column rotations.
    for k in lo..(hi - 2) {
        if k + 3 < hi && st.f.get(k + 3, k) != 0.0 {
            st.left_zero_f_with_restore(k + 3, k);
        }
        if st.f.get(k + 2, k) != 0.0 {
            st.left_zero_f_with_restore(k + 2, k);
        }
    }
}

/// First three entries of (M - s1 I)(M - s2 I) e_1 restricted to the window,
/// where M = F G^{-1} and s1, s2 are the eigenvalues of M's trailing 2x2
/// block (the Francis double shift). Falls back to shifts from F alone when
/// G's relevant diagonal entries are too small to divide by.
fn shift_vector(st: &mut QzState, lo: usize, hi: usize) -> (f64, f64, f64) {
    let f = &st.f;
    let g = &st.g;
    let gnorm = g.frobenius_norm().max(f64::MIN_POSITIVE);
    let tiny = EPS * gnorm;

    let p = hi - 2;
    let q = hi - 1;
    let (s_tr, p_det) = if g.get(p, p).abs() > tiny
        && g.get(q, q).abs() > tiny
        && g.get(p - 1, p - 1).abs() > tiny
    {
        // Exact trailing 2x2 of M = F G^{-1} for Hessenberg M: the (p, p-1)
        // entry of M couples into this block and cannot be dropped.
        let mpp1 = f.get(p, p - 1) / g.get(p - 1, p - 1);
        let ipp = 1.0 / g.get(p, p);
        let iqq = 1.0 / g.get(q, q);
        let m00 = (f.get(p, p) - mpp1 * g.get(p - 1, p)) * ipp;
        let m10 = f.get(q, p) * ipp;
        let m01 = (f.get(p, q) - mpp1 * g.get(p - 1, q) - m00 * g.get(p, q)) * iqq;
        let m11 = (f.get(q, q) - m10 * g.get(p, q)) * iqq;
        (m00 + m11, m00 * m11 - m01 * m10)
    } else {
        let a = f.get(p, p);
        let b = f.get(p, q);
        let c = f.get(q, p);
        let d = f.get(q, q);
        (a + d, a * d - b * c)
    };

    let (m00, m10, m01, m11, m21) = if g.get(lo, lo).abs() > tiny && g.get(lo + 1, lo + 1).abs() > tiny
    {
        let i00 = 1.0 / g.get(lo, lo);
        let i11 = 1.0 / g.get(lo + 1, lo + 1);
        let m00 = f.get(lo, lo) * i00;
        let m10 = f.get(lo + 1, lo) * i00;
        let m01 = (f.get(lo, lo + 1) - m00 * g.get(lo, lo + 1)) * i11;
        let m11 = (f.get(lo + 1, lo + 1) - m10 * g.get(lo, lo + 1)) * i11;
        let m21 = f.get(lo + 2, lo + 1) * i11;
        (m00, m10, m01, m11, m21)
    } else {
        (
            f.get(lo, lo),
            f.get(lo + 1, lo),
            f.get(lo, lo + 1),
            f.get(lo + 1, lo + 1),
            f.get(lo + 2, lo + 1),
        )
    };

    let v0 = m00 * m00 + m01 * m10 - s_tr * m00 + p_det;
    let v1 = m10 * (m00 + m11 - s_tr);
    let v2 = m21 * m10;
    if v0 == 0.0 && v1 == 0.0 && v2 == 0.0 {
        (1.0, 1.0, 1.0)
    } else {
        (v0, v1, v2)
    }
}

/// Split every 2x2 diagonal block that admits a real generalized eigenvalue.
fn split_real_blocks(qz: &mut PencilQZ, opts: &QzOptions) {
    let starts: Vec<usize> = qz
        .blocks
        .iter()
        .filter(|b| b.size == 2)
        .map(|b| b.start)
        .collect();
    let mut changed = false;
    for p in starts {
        let fb = qz.f.block(p, p + 2, p, p + 2);
        let gb = qz.g.block(p, p + 2, p, p + 2);
        if let Some((qt, zt)) = triangularize_real_2x2(&fb, &gb, opts.real_disc_tol) {
            apply_2x2_left(&mut qz.f, p, &qt);
            apply_2x2_left(&mut qz.g, p, &qt);
            apply_2x2_left(&mut qz.q, p, &qt);
            apply_2x2_right(&mut qz.f, p, &zt);
            apply_2x2_right(&mut qz.g, p, &zt);
            apply_2x2_right(&mut qz.z, p, &zt);
            qz.f.set(p + 1, p, 0.0);
            qz.g.set(p + 1, p, 0.0);
            changed = true;
        }
    }
    if changed {
        qz.rescan_blocks();
    }
}

/// Premultiply rows (p, p+1) by the 2x2 matrix m.
pub(crate) fn apply_2x2_left(target: &mut DenseMatrix, p: usize, m: &DenseMatrix) {
    let cols = target.cols();
    for j in 0..cols {
        let a = target.get(p, j);
        let b = target.get(p + 1, j);
        target.set(p, j, m.get(0, 0) * a + m.get(0, 1) * b);
        target.set(p + 1, j, m.get(1, 0) * a + m.get(1, 1) * b);
    }
}

/// Postmultiply columns (p, p+1) by the 2x2 matrix m.
pub(crate) fn apply_2x2_right(target: &mut DenseMatrix, p: usize, m: &DenseMatrix) {
    let rows = target.rows();
    for i in 0..rows {
        let a = target.get(i, p);
        let b = target.get(i, p + 1);
        target.set(i, p, a * m.get(0, 0) + b * m.get(1, 0));
        target.set(i, p + 1, a * m.get(0, 1) + b * m.get(1, 1));
    }
}

/// If the 2x2 pencil (Fi, Gi) has a real generalized eigenvalue (in the
/// homogeneous sense, so infinite counts as real), returns orthonormal
/// (Qt, Zt) such that Qt*Fi*Zt and Qt*Gi*Zt are both upper triangular.
/// Returns None when the eigenvalues form a strict complex pair.
///
/// A discriminant within `disc_tol` (relative) of zero is treated as a real
/// double eigenvalue so borderline blocks are not misrouted.
pub fn triangularize_real_2x2(
    fi: &DenseMatrix,
    gi: &DenseMatrix,
    disc_tol: f64,
) -> Option<(DenseMatrix, DenseMatrix)> {
    assert!(fi.rows() == 2 && fi.cols() == 2 && gi.rows() == 2 && gi.cols() == 2);
    let (df, dg, mixed) = pencil_quadratic(fi, gi);
    let scale = (fi.max_abs() * gi.max_abs()).powi(2).max(f64::MIN_POSITIVE);
    let disc = mixed * mixed - 4.0 * df * dg;
    let band = disc_tol * scale;
    if disc < -band {
        return None;
    }
    // Inside the tolerance band the pair is a real double eigenvalue: take
    // the exact double root rather than splitting it by sqrt(noise).
    let d = if disc <= band { 0.0 } else { disc.sqrt() };

    // Homogeneous root (alpha, beta) of beta^2 df - beta alpha mixed + alpha^2 dg.
    let (alpha, beta) = if mixed.abs() + d == 0.0 {
        if df.abs() <= dg.abs() {
            (0.0, 1.0)
        } else {
            (1.0, 0.0)
        }
    } else {
        let qv = 0.5 * (mixed + if mixed >= 0.0 { d } else { -d });
        // Candidate roots (qv, dg) and (df, qv); keep the better-scaled one.
        let cand = [(qv, dg), (df, qv)];
        let mut best = cand[0];
        let mut best_res = f64::INFINITY;
        for &(a0, b0) in &cand {
            let norm = a0.hypot(b0);
            if norm == 0.0 {
                continue;
            }
            let (a1, b1) = (a0 / norm, b0 / norm);
            let res = (b1 * b1 * df - b1 * a1 * mixed + a1 * a1 * dg).abs();
            if res < best_res {
                best_res = res;
                best = (a1, b1);
            }
        }
        best
    };

    // z1 spans the null space of beta*Fi - alpha*Gi; the adjugate's larger
    // column gives it without cancellation games.
    let m = fi.scale(beta).sub(&gi.scale(alpha));
    let adj_cols = [
        (m.get(1, 1), -m.get(1, 0)),
        (-m.get(0, 1), m.get(0, 0)),
    ];
    let (z0, z1v) = if adj_cols[0].0.hypot(adj_cols[0].1) >= adj_cols[1].0.hypot(adj_cols[1].1) {
        adj_cols[0]
    } else {
        adj_cols[1]
    };
    let znorm = z0.hypot(z1v);
    let (z0, z1v) = if znorm > 0.0 {
        (z0 / znorm, z1v / znorm)
    } else {
        (1.0, 0.0)
    };

    // q1 is the common direction of Fi z1 and Gi z1.
    let fz = (
        fi.get(0, 0) * z0 + fi.get(0, 1) * z1v,
        fi.get(1, 0) * z0 + fi.get(1, 1) * z1v,
    );
    let gz = (
        gi.get(0, 0) * z0 + gi.get(0, 1) * z1v,
        gi.get(1, 0) * z0 + gi.get(1, 1) * z1v,
    );
    let (q0, q1v) = if fz.0.hypot(fz.1) >= gz.0.hypot(gz.1) {
        fz
    } else {
        gz
    };
    let qnorm = q0.hypot(q1v);
    let (q0, q1v) = if qnorm > 0.0 {
        (q0 / qnorm, q1v / qnorm)
    } else {
        (1.0, 0.0)
    };

    // Qt rows are (q1, q1_perp); Zt columns are (z1, z1_perp).
    let qt = DenseMatrix::from_2x2(q0, q1v, -q1v, q0);
    let zt = DenseMatrix::from_2x2(z0, -z1v, z1v, z0);
    Some((qt, zt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, seeded_rng};

    fn check_invariants(qz: &PencilQZ, a: &DenseMatrix, b: &DenseMatrix) {
        assert!(qz.q.orthonormality_residual() < 1e-12, "Q orthonormality");
        assert!(qz.z.orthonormality_residual() < 1e-12, "Z orthonormality");
        let scale = a.frobenius_norm() + b.frobenius_norm();
        let ra = qz.reconstruct_a().max_abs_diff(a);
        let rb = qz.reconstruct_b().max_abs_diff(b);
        assert!(ra <= 1e-10 * scale.max(1.0), "A residual {ra:.3e}");
        assert!(rb <= 1e-10 * scale.max(1.0), "B residual {rb:.3e}");
        assert!(qz.g.is_upper_triangular(0.0), "G strictly triangular");
        // F zero below its block diagonal.
        let n = qz.order();
        for b in &qz.blocks {
            for i in (b.start + b.size)..n {
                for j in b.start..(b.start + b.size) {
                    assert_eq!(qz.f.get(i, j), 0.0, "F below block ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn already_triangular_pair_is_accepted() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 3.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![2.0, -1.0], vec![0.0, 1.0]]).unwrap();
        let qz = real_qz(&a, &b, &QzOptions::default()).unwrap();
        check_invariants(&qz, &a, &b);
        assert_eq!(qz.blocks.len(), 2);
    }

    #[test]
    fn rotation_pair_keeps_one_complex_block() {
        let a = DenseMatrix::from_2x2(0.0, -1.0, 1.0, 0.0);
        let b = DenseMatrix::identity(2);
        let qz = real_qz(&a, &b, &QzOptions::default()).unwrap();
        check_invariants(&qz, &a, &b);
        assert_eq!(qz.blocks.len(), 1);
        assert_eq!(qz.blocks[0].size, 2);
        // det(F1 - l G1) = l^2 + 1 has no real root: discriminant < 0.
        let fb = qz.f.block(0, 2, 0, 2);
        let gb = qz.g.block(0, 2, 0, 2);
        let (df, dg, mixed) = pencil_quadratic(&fb, &gb);
        assert!(mixed * mixed - 4.0 * df * dg < 0.0);
    }

    #[test]
    fn random_pairs_satisfy_invariants() {
        for seed in 0..30 {
            let mut rng = seeded_rng(900 + seed);
            let a = random_matrix(&mut rng, 6, 6);
            let b = random_matrix(&mut rng, 6, 6);
            let qz = real_qz(&a, &b, &QzOptions::default()).unwrap();
            check_invariants(&qz, &a, &b);
        }
    }

    #[test]
    fn singular_b_yields_infinite_eigenvalues() {
        let mut rng = seeded_rng(77);
        let a = random_matrix(&mut rng, 4, 4);
        let mut b = random_matrix(&mut rng, 4, 4);
        // Force rank deficiency: third row becomes a copy of the second.
        for j in 0..4 {
            let v = b.get(1, j);
            b.set(2, j, v);
        }
        let qz = real_qz(&a, &b, &QzOptions::default()).unwrap();
        check_invariants(&qz, &a, &b);
        let eigs = qz.eigenvalues();
        assert!(eigs.iter().any(|e| e.is_infinite()));
    }

    #[test]
    fn triangularize_identity_like_block() {
        let fi = DenseMatrix::from_2x2(1.0, 0.0, 0.0, 2.0);
        let gi = DenseMatrix::identity(2);
        let (qt, zt) = triangularize_real_2x2(&fi, &gi, 1e-10).unwrap();
        let tf = qt.matmul(&fi).matmul(&zt);
        let tg = qt.matmul(&gi).matmul(&zt);
        assert!(tf.get(1, 0).abs() < 1e-14);
        assert!(tg.get(1, 0).abs() < 1e-14);
    }

    #[test]
    fn triangularize_swap_block_with_real_pair() {
        // det(Fi - l I) = l^2 - 1: real eigenvalues +/-1.
        let fi = DenseMatrix::from_2x2(0.0, 1.0, 1.0, 0.0);
        let gi = DenseMatrix::identity(2);
        let (qt, zt) = triangularize_real_2x2(&fi, &gi, 1e-10).unwrap();
        assert!(qt.orthonormality_residual() < 1e-14);
        assert!(zt.orthonormality_residual() < 1e-14);
        let tf = qt.matmul(&fi).matmul(&zt);
        let tg = qt.matmul(&gi).matmul(&zt);
        assert!(tf.get(1, 0).abs() < 1e-14, "F not triangularized: {tf:?}");
        assert!(tg.get(1, 0).abs() < 1e-14, "G not triangularized: {tg:?}");
    }

    #[test]
    fn triangularize_rejects_complex_block() {
        // det(Fi - l I) = l^2 + 1: no real root.
        let fi = DenseMatrix::from_2x2(0.0, -1.0, 1.0, 0.0);
        let gi = DenseMatrix::identity(2);
        assert!(triangularize_real_2x2(&fi, &gi, 1e-10).is_none());
    }

    #[test]
    fn triangularize_handles_infinite_eigenvalue() {
        // Gi singular: homogeneous real eigenvalue at infinity.
        let fi = DenseMatrix::from_2x2(1.0, 0.5, 2.0, 1.5);
        let gi = DenseMatrix::from_2x2(0.0, 1.0, 0.0, 0.0);
        let (qt, zt) = triangularize_real_2x2(&fi, &gi, 1e-10).unwrap();
        let tf = qt.matmul(&fi).matmul(&zt);
        let tg = qt.matmul(&gi).matmul(&zt);
        assert!(tf.get(1, 0).abs() < 1e-14);
        assert!(tg.get(1, 0).abs() < 1e-14);
    }
}
