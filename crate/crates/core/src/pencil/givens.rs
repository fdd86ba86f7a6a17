//! Givens rotation primitives shared by the pencil kernels.

use crate::matrix::DenseMatrix;

/// (c, s, r) with c*a + s*b = r >= 0 and -s*a + c*b = 0.
pub(crate) fn make_givens(a: f64, b: f64) -> (f64, f64, f64) {
    if b == 0.0 {
        if a >= 0.0 {
            (1.0, 0.0, a)
        } else {
            (-1.0, 0.0, -a)
        }
    } else if a == 0.0 {
        if b >= 0.0 {
            (0.0, 1.0, b)
        } else {
            (0.0, -1.0, -b)
        }
    } else {
        let r = a.hypot(b);
        (a / r, b / r, r)
    }
}

/// Rows i1 and i2: (row_i1, row_i2) <- (c*row_i1 + s*row_i2, -s*row_i1 + c*row_i2).
pub(crate) fn apply_left(m: &mut DenseMatrix, i1: usize, i2: usize, c: f64, s: f64) {
    let cols = m.cols();
    for j in 0..cols {
        let a = m.get(i1, j);
        let b = m.get(i2, j);
        m.set(i1, j, c * a + s * b);
        m.set(i2, j, -s * a + c * b);
    }
}

/// Columns j1 and j2: (col_j1, col_j2) <- (c*col_j1 + s*col_j2, -s*col_j1 + c*col_j2).
pub(crate) fn apply_right(m: &mut DenseMatrix, j1: usize, j2: usize, c: f64, s: f64) {
    let rows = m.rows();
    for i in 0..rows {
        let a = m.get(i, j1);
        let b = m.get(i, j2);
        m.set(i, j1, c * a + s * b);
        m.set(i, j2, -s * a + c * b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_rotation_zeroes_target() {
        let mut m = DenseMatrix::from_rows(&[vec![3.0, 1.0], vec![4.0, 2.0]]).unwrap();
        let (c, s, r) = make_givens(m.get(0, 0), m.get(1, 0));
        apply_left(&mut m, 0, 1, c, s);
        assert!((m.get(0, 0) - r).abs() < 1e-15);
        assert!(m.get(1, 0).abs() < 1e-15);
        assert!((r - 5.0).abs() < 1e-15);
    }

    #[test]
    fn right_rotation_zeroes_target() {
        let mut m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![-0.5, 4.0]]).unwrap();
        // Zero m[1][0] against m[1][1] using a column rotation.
        let (c, s, _) = make_givens(m.get(1, 1), -m.get(1, 0));
        apply_right(&mut m, 0, 1, c, s);
        assert!(m.get(1, 0).abs() < 1e-15);
    }
}
