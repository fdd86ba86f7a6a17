//! Shared oracles for the integration suites: an independent polynomial
//! route to generalized eigenvalues (determinant sampling + Durand-Kerner
//! root finding), kept free of the QZ code paths it checks.

use gsdfit::matrix::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }

    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Self::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

/// Coefficients of p(l) = det(A - l B), low order first, via determinant
/// evaluation at n+1 integer points and a Vandermonde solve.
pub fn pencil_polynomial(a: &DenseMatrix, b: &DenseMatrix) -> Vec<f64> {
    let n = a.rows();
    let points: Vec<f64> = (0..=n).map(|j| j as f64 - (n as f64) / 2.0).collect();
    let mut vander = DenseMatrix::zeros(n + 1, n + 1);
    let mut rhs = DenseMatrix::zeros(n + 1, 1);
    for (row, &x) in points.iter().enumerate() {
        let mut pw = 1.0;
        for col in 0..=n {
            vander.set(row, col, pw);
            pw *= x;
        }
        let shifted = a.linear_combination(1.0, b, -x);
        rhs.set(row, 0, shifted.det());
    }
    let coef = vander.solve(&rhs, 1e-13).expect("Vandermonde is regular");
    (0..=n).map(|k| coef.get(k, 0)).collect()
}

/// All complex roots of the polynomial (low order first, exact degree
/// assumed: the leading coefficient must be meaningfully nonzero), by
/// Durand-Kerner iteration.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    assert!(
        lead.abs() > 1e-10 * scale.max(1e-300),
        "degree-deficient polynomial: leading {lead:.3e} vs scale {scale:.3e}"
    );
    let eval = |z: Complex| -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(z).add_re(c);
        }
        acc
    };
    let mut roots: Vec<Complex> = (0..degree)
        .map(|k| {
            // Standard staggered initialization off the real axis.
            let base = Complex::new(0.4, 0.9);
            let mut z = Complex::new(1.0, 0.0);
            for _ in 0..=k {
                z = z.mul(base);
            }
            z
        })
        .collect();
    for _iter in 0..500 {
        let mut max_step = 0.0f64;
        for k in 0..degree {
            let zk = roots[k];
            let mut denom = Complex::new(lead, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != k {
                    denom = denom.mul(zk.sub(zj));
                }
            }
            let step = eval(zk).div(denom);
            roots[k] = zk.sub(step);
            max_step = max_step.max(step.abs() / zk.abs().max(1.0));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    roots
}

impl Complex {
    fn add_re(self, c: f64) -> Self {
        Self::new(self.re + c, self.im)
    }
}

/// Greedy multiset match: every oracle root must have a computed
/// eigenvalue within tol * (1 + |root|); returns the worst distance.
pub fn match_multisets(oracle: &[Complex], computed: &[(f64, f64)], tol: f64) -> f64 {
    assert_eq!(oracle.len(), computed.len());
    let mut remaining: Vec<Complex> = computed
        .iter()
        .map(|&(re, im)| Complex::new(re, im))
        .collect();
    let mut worst: f64 = 0.0;
    for root in oracle {
        let (idx, dist) = remaining
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.sub(*root).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        let rel = dist / (1.0 + root.abs());
        assert!(
            rel <= tol,
            "no eigenvalue within {tol:.1e} of oracle root {root:?} (nearest {dist:.3e})"
        );
        worst = worst.max(rel);
        remaining.swap_remove(idx);
    }
    worst
}
