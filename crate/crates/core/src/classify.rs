//! Interior/boundary/exterior classification of I x I x 2 arrays with
//! respect to the rank-I set, the nonsingular-slicemix search, and the
//! boundary-approaching perturbation of singular triangular pairs.

use crate::error::{Error, Result};
use crate::gsd::{closure_membership, FitOptions};
use crate::matrix::DenseMatrix;
use crate::pencil::{
    is_singular_pencil, real_qz, singularity_score, GeneralizedEigenvalue, QzOptions,
};
use crate::tensor::{slicemix, Tensor3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    Interior,
    Boundary,
    Exterior,
}

/// The classification case: a1/a2/a3 after a nonsingular slicemix exists,
/// b when the pencil is identically singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionCase {
    A1,
    A2,
    A3,
    B,
}

#[derive(Debug, Clone)]
pub struct RankRegionClass {
    pub label: RegionLabel,
    pub case: RegionCase,
    /// Generalized eigenvalues of the mixed pair (X2, X1); empty in case b.
    pub eigenvalues: Vec<GeneralizedEigenvalue>,
    /// Distance to the nearest classification threshold: the smallest
    /// relative eigenvalue gap for a1/a2, the smallest relative imaginary
    /// magnitude among complex pairs for a3, the singularity score for b.
    pub margin: f64,
    /// The slicemix that produced the nonsingular first slice (cases a*).
    pub slicemix: Option<DenseMatrix>,
}

#[derive(Debug, Clone)]
pub struct RankRegionOptions {
    /// Relative eigenvalue distinctness / imaginary-part threshold.
    pub tol: f64,
    /// Identically-singular-pencil detection threshold.
    pub sing_tol: f64,
}

impl Default for RankRegionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            sing_tol: 1e-10,
        }
    }
}

/// Search for a 2x2 rotation U such that the first slice of (I, I, U) . Y
/// is as far from singular as possible: the angle maximizing the smallest
/// singular value of cos(t) Y1 + sin(t) Y2 over a 64-point grid on [0, pi)
/// with two local refinement passes. Returns None exactly when the pencil
/// is identically singular.
pub fn find_nonsingular_slicemix(y: &Tensor3, sing_tol: f64) -> Result<Option<DenseMatrix>> {
    let (n, m, k) = y.dims();
    if n != m || k != 2 {
        return Err(Error::DimensionMismatch {
            context: "slicemix search input",
            expected: "I x I x 2".to_string(),
            got: format!("{n}x{m}x{k}"),
        });
    }
    let y1 = y.frontal_slice(0)?;
    let y2 = y.frontal_slice(1)?;
    if is_singular_pencil(&y1, &y2, sing_tol)? {
        return Ok(None);
    }
    let score = |theta: f64| {
        y1.linear_combination(theta.cos(), &y2, theta.sin())
            .smallest_singular_value()
    };
    let mut best_theta = 0.0;
    let mut best = f64::NEG_INFINITY;
    let coarse = 64;
    for i in 0..coarse {
        let theta = std::f64::consts::PI * i as f64 / coarse as f64;
        let s = score(theta);
        if s > best {
            best = s;
            best_theta = theta;
        }
    }
    let mut half_width = std::f64::consts::PI / coarse as f64;
    for _ in 0..2 {
        let lo = best_theta - half_width;
        for i in 0..=16 {
            let theta = lo + 2.0 * half_width * i as f64 / 16.0;
            let s = score(theta);
            if s > best {
                best = s;
                best_theta = theta;
            }
        }
        half_width /= 8.0;
    }
    let (c, s) = (best_theta.cos(), best_theta.sin());
    Ok(Some(DenseMatrix::from_2x2(c, s, -s, c)))
}

/// The complete trichotomy for square-slice arrays: with a nonsingular
/// slicemix, the eigenvalues of the mixed pair decide interior (distinct
/// real), boundary (real with a repeat), or exterior (a complex pair);
/// without one, the array is a boundary point (case b).
pub fn classify_square(y: &Tensor3, opts: &RankRegionOptions) -> Result<RankRegionClass> {
    let (n, m, k) = y.dims();
    if n != m || k != 2 {
        return Err(Error::DimensionMismatch {
            context: "classification input",
            expected: "I x I x 2".to_string(),
            got: format!("{n}x{m}x{k}"),
        });
    }
    let Some(u) = find_nonsingular_slicemix(y, opts.sing_tol)? else {
        let y1 = y.frontal_slice(0)?;
        let y2 = y.frontal_slice(1)?;
        return Ok(RankRegionClass {
            label: RegionLabel::Boundary,
            case: RegionCase::B,
            eigenvalues: Vec::new(),
            margin: singularity_score(&y1, &y2)?,
            slicemix: None,
        });
    };
    let x = slicemix(y, &u)?;
    let x1 = x.frontal_slice(0)?;
    let x2 = x.frontal_slice(1)?;
    let qz = real_qz(&x2, &x1, &QzOptions::default())?;
    let eigenvalues = qz.eigenvalues();

    let lambda_scale = eigenvalues
        .iter()
        .map(|e| {
            let (re, im) = e.value();
            if re.is_finite() {
                re.hypot(im)
            } else {
                0.0
            }
        })
        .fold(1.0f64, f64::max);

    let complex_margin = eigenvalues
        .iter()
        .filter(|e| e.is_complex())
        .map(|e| e.value().1.abs() / lambda_scale)
        .fold(f64::INFINITY, f64::min);
    if complex_margin.is_finite() && complex_margin >= opts.tol {
        return Ok(RankRegionClass {
            label: RegionLabel::Exterior,
            case: RegionCase::A3,
            eigenvalues,
            margin: complex_margin,
            slicemix: Some(u),
        });
    }

    // All real (or negligibly complex): measure the smallest pairwise gap.
    // Infinite eigenvalues coincide with each other at the projective point
    // (1, 0) and are infinitely far from every finite value.
    let mut values: Vec<f64> = eigenvalues.iter().map(|e| e.value().0).collect();
    values.sort_by(f64::total_cmp);
    let mut min_gap = f64::INFINITY;
    for w in values.windows(2) {
        let gap = if w[0].is_infinite() && w[1].is_infinite() {
            if w[0] == w[1] {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (w[1] - w[0]).abs()
        };
        min_gap = min_gap.min(gap / lambda_scale);
    }
    let (label, case) = if min_gap >= opts.tol {
        (RegionLabel::Interior, RegionCase::A1)
    } else {
        (RegionLabel::Boundary, RegionCase::A2)
    };
    Ok(RankRegionClass {
        label,
        case,
        eigenvalues,
        margin: if min_gap.is_finite() { min_gap } else { f64::MAX },
        slicemix: Some(u),
    })
}

/// Membership verdict for general I x J x 2 arrays at rank R; the finer
/// interior/boundary/exterior structure is defined only for I = J = R,
/// where it is attached as `square_detail`.
#[derive(Debug, Clone)]
pub struct GeneralClassification {
    pub in_closure: bool,
    pub residual: f64,
    pub square_detail: Option<RankRegionClass>,
}

pub fn classify_general(
    y: &Tensor3,
    rank: usize,
    tol: f64,
    fit_opts: &FitOptions,
    region_opts: &RankRegionOptions,
) -> Result<GeneralClassification> {
    let (i_dim, j_dim, _) = y.dims();
    let (in_closure, residual) = closure_membership(y, rank, tol, fit_opts)?;
    let square_detail = if i_dim == j_dim && rank == i_dim {
        Some(classify_square(y, region_opts)?)
    } else {
        None
    };
    Ok(GeneralClassification {
        in_closure,
        residual,
        square_detail,
    })
}

/// Which of the three diagonal patterns drove the perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationCase {
    /// Some other position has both diagonal entries nonzero.
    CommonNonzero,
    /// Some other position has R1 nonzero, R2 zero.
    R1Nonzero,
    /// Some other position has R1 zero, R2 nonzero.
    R2Nonzero,
}

#[derive(Debug, Clone)]
pub struct PerturbationPlan {
    /// The common-zero diagonal position receiving (delta1, delta2).
    pub position_i: usize,
    /// The partner position pinning the repeated eigenvalue.
    pub position_j: usize,
    pub case: PerturbationCase,
    pub delta1: f64,
    pub delta2: f64,
    pub eta: Option<f64>,
    /// The repeated eigenvalue produced by the construction.
    pub repeated_eigenvalue: f64,
    pub perturbation_norm: f64,
    pub h1_smallest_singular_value: f64,
}

/// Perturb an identically singular upper-triangular pair so that H1 is
/// nonsingular, ||(R1, R2) - (H1, H2)|| <= eps, and H2 H1^{-1} has n real
/// eigenvalues with at least one repeated pair: the constructive route
/// from singular triangular pairs to nearby boundary (a2) points.
pub fn boundary_perturbation(
    r1: &DenseMatrix,
    r2: &DenseMatrix,
    eps: f64,
    sing_tol: f64,
) -> Result<(DenseMatrix, DenseMatrix, PerturbationPlan)> {
    if !r1.is_square() || r1.rows() != r2.rows() || r1.cols() != r2.cols() {
        return Err(Error::DimensionMismatch {
            context: "perturbation input shapes",
            expected: format!("{0}x{0} pair", r1.rows()),
            got: format!(
                "{}x{} and {}x{}",
                r1.rows(),
                r1.cols(),
                r2.rows(),
                r2.cols()
            ),
        });
    }
    let n = r1.rows();
    let scale = r1
        .frobenius_norm()
        .max(r2.frobenius_norm())
        .max(f64::MIN_POSITIVE);
    let tri_tol = 1e-10 * scale;
    if !r1.is_upper_triangular(tri_tol) || !r2.is_upper_triangular(tri_tol) {
        return Err(Error::NotUpperTriangular {
            context: "perturbation input",
        });
    }
    if eps <= 0.0 {
        return Err(Error::InvalidInput("eps must be positive".to_string()));
    }
    let ztol = sing_tol * scale;
    let zero_at = |m: &DenseMatrix, i: usize| m.get(i, i).abs() <= ztol;
    let common_zeros: Vec<usize> = (0..n)
        .filter(|&i| zero_at(r1, i) && zero_at(r2, i))
        .collect();
    if common_zeros.is_empty() {
        return Err(Error::NotSingularPencil {
            max_scaled_det: singularity_score(r1, r2)?,
        });
    }
    if n < 2 {
        return Err(Error::InvalidInput(
            "a repeated eigenvalue needs n >= 2".to_string(),
        ));
    }

    let anchor = common_zeros[0];
    let both_nonzero = (0..n).find(|&j| j != anchor && !zero_at(r1, j) && !zero_at(r2, j));
    let r1_only = (0..n).find(|&j| j != anchor && !zero_at(r1, j) && zero_at(r2, j));
    let r2_only = (0..n).find(|&j| j != anchor && zero_at(r1, j) && !zero_at(r2, j));

    let (case, partner) = if let Some(j) = both_nonzero {
        (PerturbationCase::CommonNonzero, j)
    } else if let Some(j) = r1_only {
        (PerturbationCase::R1Nonzero, j)
    } else if let Some(j) = r2_only {
        (PerturbationCase::R2Nonzero, j)
    } else {
        // Every diagonal position is a common zero: promote a second one to
        // a both-nonzero pair and fall back to the first case against it.
        (PerturbationCase::CommonNonzero, common_zeros[1])
    };

    let mut t = eps / (2.0 * (n as f64)).sqrt().max(1.0);
    for _ in 0..256 {
        let (h1, h2, plan) =
            build_perturbation(r1, r2, anchor, partner, case, t, &common_zeros, ztol);
        if plan.perturbation_norm <= eps {
            return Ok((h1, h2, plan));
        }
        t *= 0.5;
    }
    Err(Error::InvalidInput(format!(
        "could not fit the perturbation within eps = {eps:.3e}"
    )))
}

#[allow(clippy::too_many_arguments)]
fn build_perturbation(
    r1: &DenseMatrix,
    r2: &DenseMatrix,
    anchor: usize,
    partner: usize,
    case: PerturbationCase,
    t: f64,
    common_zeros: &[usize],
    ztol: f64,
) -> (DenseMatrix, DenseMatrix, PerturbationPlan) {
    let n = r1.rows();
    let mut h1 = r1.clone();
    let mut h2 = r2.clone();

    let (delta1, delta2, eta, repeated) = match case {
        PerturbationCase::CommonNonzero => {
            // The partner may itself be a promoted common zero.
            let lambda = if common_zeros.contains(&partner) {
                h1.set(partner, partner, t);
                h2.set(partner, partner, t);
                1.0
            } else {
                r2.get(partner, partner) / r1.get(partner, partner)
            };
            (t, lambda * t, None, lambda)
        }
        PerturbationCase::R1Nonzero => {
            // delta1 = eta * R1_jj, delta2 = eta^2; both eigenvalues equal
            // eta / R1_jj.
            let r1_jj = r1.get(partner, partner);
            h2.set(partner, partner, t);
            (t * r1_jj, t * t, Some(t), t / r1_jj)
        }
        PerturbationCase::R2Nonzero => {
            // Mirror case: delta2 = eta * R2_jj, delta1 = eta^2.
            let r2_jj = r2.get(partner, partner);
            h1.set(partner, partner, t);
            (t * t, t * r2_jj, Some(t), r2_jj / t)
        }
    };
    h1.set(anchor, anchor, delta1);
    h2.set(anchor, anchor, delta2);

    // Remaining zero diagonal entries of R1 are perturbed minimally so that
    // H1 is nonsingular; the resulting eigenvalues stay real.
    for j in 0..n {
        if j == anchor || j == partner {
            continue;
        }
        if h1.get(j, j).abs() <= ztol {
            h1.set(j, j, t);
        }
    }

    let mut norm_sq = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d1 = h1.get(i, j) - r1.get(i, j);
            let d2 = h2.get(i, j) - r2.get(i, j);
            norm_sq += d1 * d1 + d2 * d2;
        }
    }
    let plan = PerturbationPlan {
        position_i: anchor,
        position_j: partner,
        case,
        delta1,
        delta2,
        eta,
        repeated_eigenvalue: repeated,
        perturbation_norm: norm_sq.sqrt(),
        h1_smallest_singular_value: h1.smallest_singular_value(),
    };
    (h1, h2, plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_nonsingular_2x2, random_well_conditioned, seeded_rng};
    use crate::tensor::multilinear_multiply;

    fn classify_default(y: &Tensor3) -> RankRegionClass {
        classify_square(y, &RankRegionOptions::default()).unwrap()
    }

    #[test]
    fn slicemix_search_basics() {
        // Nonsingular first slice: the identity angle already works.
        let y = Tensor3::from_slices(
            &DenseMatrix::identity(2),
            &DenseMatrix::diagonal(&[1.0, 2.0]),
        )
        .unwrap();
        let u = find_nonsingular_slicemix(&y, 1e-10).unwrap().unwrap();
        let x = slicemix(&y, &u).unwrap();
        assert!(x.frontal_slice(0).unwrap().det().abs() > 0.1);

        // Singular slices whose sum is nonsingular.
        let y1 = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let y2 = DenseMatrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let y = Tensor3::from_slices(&y1, &y2).unwrap();
        let u = find_nonsingular_slicemix(&y, 1e-10).unwrap().unwrap();
        let x = slicemix(&y, &u).unwrap();
        assert!(x.frontal_slice(0).unwrap().det().abs() > 0.3);

        // Identically singular pencil: no mix exists.
        let y1 = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let y2 = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let y = Tensor3::from_slices(&y1, &y2).unwrap();
        assert!(find_nonsingular_slicemix(&y, 1e-10).unwrap().is_none());
    }

    #[test]
    fn canonical_instances_classify_correctly() {
        let diag = Tensor3::from_slices(
            &DenseMatrix::identity(2),
            &DenseMatrix::diagonal(&[1.0, 2.0]),
        )
        .unwrap();
        let c = classify_default(&diag);
        assert_eq!(c.case, RegionCase::A1);
        assert_eq!(c.label, RegionLabel::Interior);
        assert_eq!(c.eigenvalues.len(), 2);

        let ident =
            Tensor3::from_slices(&DenseMatrix::identity(2), &DenseMatrix::identity(2)).unwrap();
        let c = classify_default(&ident);
        assert_eq!(c.case, RegionCase::A2);
        assert_eq!(c.label, RegionLabel::Boundary);

        let rot = Tensor3::from_slices(
            &DenseMatrix::identity(2),
            &DenseMatrix::from_2x2(0.0, -1.0, 1.0, 0.0),
        )
        .unwrap();
        let c = classify_default(&rot);
        assert_eq!(c.case, RegionCase::A3);
        assert_eq!(c.label, RegionLabel::Exterior);

        let y1 = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let y2 = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let shared = Tensor3::from_slices(&y1, &y2).unwrap();
        let c = classify_default(&shared);
        assert_eq!(c.case, RegionCase::B);
        assert_eq!(c.label, RegionLabel::Boundary);
        assert!(c.eigenvalues.is_empty());
    }

    #[test]
    fn labels_invariant_under_equivalence_transforms() {
        let instances = [
            (
                Tensor3::from_slices(
                    &DenseMatrix::identity(3),
                    &DenseMatrix::diagonal(&[1.0, 2.0, 3.5]),
                )
                .unwrap(),
                RegionCase::A1,
            ),
            (
                Tensor3::from_slices(
                    &DenseMatrix::identity(2),
                    &DenseMatrix::from_2x2(0.0, -1.0, 1.0, 0.0),
                )
                .unwrap(),
                RegionCase::A3,
            ),
        ];
        let mut rng = seeded_rng(610);
        for (y, case) in &instances {
            let (n, _, _) = y.dims();
            for _ in 0..20 {
                let u = random_nonsingular_2x2(&mut rng);
                let s = random_well_conditioned(&mut rng, n);
                let t = random_well_conditioned(&mut rng, n);
                let x = multilinear_multiply(y, &s, &t, &u).unwrap();
                let c = classify_default(&x);
                assert_eq!(c.case, *case, "case changed under equivalence");
            }
        }
    }

    #[test]
    fn perturbation_case_common_nonzero() {
        // (R1)_11 = (R2)_11 = 0, (R1)_22 = 1, (R2)_22 = 3: the repeated
        // eigenvalue is lambda = 3 regardless of the step size.
        let r1 = DenseMatrix::from_rows(&[vec![0.0, 0.4], vec![0.0, 1.0]]).unwrap();
        let r2 = DenseMatrix::from_rows(&[vec![0.0, -0.2], vec![0.0, 3.0]]).unwrap();
        let (h1, h2, plan) = boundary_perturbation(&r1, &r2, 1e-3, 1e-10).unwrap();
        assert_eq!(plan.case, PerturbationCase::CommonNonzero);
        assert!((plan.delta2 / plan.delta1 - 3.0).abs() < 1e-12);
        assert!((plan.repeated_eigenvalue - 3.0).abs() < 1e-12);
        // Triangular pair: eigenvalues are the diagonal ratios.
        let e0 = h2.get(0, 0) / h1.get(0, 0);
        let e1 = h2.get(1, 1) / h1.get(1, 1);
        assert!((e0 - 3.0).abs() < 1e-12 && (e1 - 3.0).abs() < 1e-12);
        assert!(plan.perturbation_norm <= 1e-3);
        assert!(plan.h1_smallest_singular_value > 0.0);
    }

    #[test]
    fn perturbation_case_r1_nonzero() {
        // (R1)_22 = 2, (R2)_22 = 0: both eigenvalues become eta / 2.
        let r1 = DenseMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let r2 = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let (h1, h2, plan) = boundary_perturbation(&r1, &r2, 1e-4, 1e-10).unwrap();
        assert_eq!(plan.case, PerturbationCase::R1Nonzero);
        let eta = plan.eta.unwrap();
        assert!((plan.delta1 - eta * 2.0).abs() < 1e-15);
        assert!((plan.delta2 - eta * eta).abs() < 1e-15);
        let e0 = h2.get(0, 0) / h1.get(0, 0);
        let e1 = h2.get(1, 1) / h1.get(1, 1);
        assert!(
            (e0 - e1).abs() <= 1e-10 * e0.abs().max(1e-300),
            "eigenvalues {e0:.6e} vs {e1:.6e}"
        );
        assert!((e0 - eta / 2.0).abs() < 1e-12 * (eta / 2.0).abs().max(1e-300));
    }

    #[test]
    fn perturbation_reclassifies_as_boundary_a2() {
        let r1 = DenseMatrix::from_rows(&[
            vec![0.0, 0.3, -0.1],
            vec![0.0, 1.5, 0.2],
            vec![0.0, 0.0, 0.7],
        ])
        .unwrap();
        let r2 = DenseMatrix::from_rows(&[
            vec![0.0, 0.1, 0.4],
            vec![0.0, 0.75, -0.3],
            vec![0.0, 0.0, 2.1],
        ])
        .unwrap();
        for eps in [1e-4, 1e-6] {
            let (h1, h2, plan) = boundary_perturbation(&r1, &r2, eps, 1e-10).unwrap();
            assert!(plan.perturbation_norm <= eps);
            let h = Tensor3::from_slices(&h1, &h2).unwrap();
            let c = classify_default(&h);
            assert_eq!(c.case, RegionCase::A2, "eps {eps:.1e}: case {:?}", c.case);
        }
    }

    #[test]
    fn perturbation_rejects_regular_pairs() {
        let r1 = DenseMatrix::identity(2);
        let r2 = DenseMatrix::diagonal(&[1.0, 2.0]);
        assert!(matches!(
            boundary_perturbation(&r1, &r2, 1e-6, 1e-10),
            Err(Error::NotSingularPencil { .. })
        ));
    }
}
