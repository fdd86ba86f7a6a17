//! Seeded instance constructions for every classification case. Each
//! generator is deterministic in the seed; callers that advertise a class
//! should self-check the output (the CLI does).

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::random::{gaussian, random_orthonormal, seeded_rng};
use crate::tensor::{cp_reconstruct, CpFactors, Tensor3};
use rand::Rng;

/// The instance kinds the generators cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// Distinct real eigenvalues at I = J = R (case a1).
    Interior,
    /// A repeated real eigenvalue at I = J = R (case a2).
    BoundaryA2,
    /// A complex eigenvalue pair at I = J = R (case a3).
    Exterior,
    /// Identically singular pencil: triangular pair with a shared zero
    /// diagonal position plus optional complex 2x2 blocks, conjugated by
    /// random orthonormal transforms (case b).
    SingularPencil,
    /// Reconstruction of a random full GSD at the given (I, J, R).
    GsdRandom,
    /// Reconstruction of random well-conditioned CP factors.
    CpRandom,
}

impl InstanceKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "interior" => Some(Self::Interior),
            "boundary-a2" => Some(Self::BoundaryA2),
            "exterior" => Some(Self::Exterior),
            "singular-pencil" => Some(Self::SingularPencil),
            "gsd-random" => Some(Self::GsdRandom),
            "cp-random" => Some(Self::CpRandom),
        _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Interior => "interior",
            Self::BoundaryA2 => "boundary-a2",
            Self::Exterior => "exterior",
            Self::SingularPencil => "singular-pencil",
            Self::GsdRandom => "gsd-random",
            Self::CpRandom => "cp-random",
        }
    }
}

/// Seeded instance of the requested kind. `rank` is interpreted per kind;
/// the square kinds require I = J = R.
pub fn generate_instance(
    kind: InstanceKind,
    i_dim: usize,
    j_dim: usize,
    rank: usize,
    seed: u64,
) -> Result<Tensor3> {
    match kind {
        InstanceKind::Interior | InstanceKind::BoundaryA2 | InstanceKind::Exterior => {
            if i_dim != j_dim || rank != i_dim {
                return Err(Error::InvalidInput(format!(
                    "kind {} needs I = J = R, got I={i_dim}, J={j_dim}, R={rank}",
                    kind.name()
                )));
            }
            if i_dim < 2 && kind != InstanceKind::Interior {
                return Err(Error::InvalidInput(format!(
                    "kind {} needs I >= 2",
                    kind.name()
                )));
            }
        }
        InstanceKind::SingularPencil => {
            if i_dim != j_dim {
                return Err(Error::InvalidInput(format!(
                    "kind singular-pencil needs I = J, got I={i_dim}, J={j_dim}"
                )));
            }
        }
        InstanceKind::GsdRandom | InstanceKind::CpRandom => {
            if rank == 0 || rank > i_dim.min(j_dim) {
                return Err(Error::InvalidRank {
                    rank,
                    limit: i_dim.min(j_dim),
                });
            }
        }
    }
    let mut rng = seeded_rng(seed);
    match kind {
        InstanceKind::Interior => Ok(eigenvalue_instance(&mut rng, i_dim, EigenPattern::Distinct)),
        InstanceKind::BoundaryA2 => {
            Ok(eigenvalue_instance(&mut rng, i_dim, EigenPattern::Repeated))
        }
        InstanceKind::Exterior => Ok(eigenvalue_instance(
            &mut rng,
            i_dim,
            EigenPattern::ComplexPair,
        )),
        InstanceKind::SingularPencil => Ok(singular_pencil_instance(&mut rng, i_dim)),
        InstanceKind::GsdRandom => Ok(gsd_random_instance(&mut rng, i_dim, j_dim, rank)),
        InstanceKind::CpRandom => cp_random_instance(&mut rng, i_dim, j_dim, rank),
    }
}

enum EigenPattern {
    Distinct,
    Repeated,
    ComplexPair,
}

/// Y1 = Qa R1 Qb^T, Y2 = Qa R2 Qb^T with upper-triangular R1 (well
/// conditioned) and R2 whose diagonal realizes the requested eigenvalue
/// pattern of Y2 Y1^{-1}.
fn eigenvalue_instance(rng: &mut impl Rng, n: usize, pattern: EigenPattern) -> Tensor3 {
    let qa = random_orthonormal(rng, n, n);
    let qb = random_orthonormal(rng, n, n);
    let mut r1 = DenseMatrix::zeros(n, n);
    let mut r2 = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            r1.set(i, j, 0.5 * gaussian(rng));
            r2.set(i, j, 0.5 * gaussian(rng));
        }
        let d = 1.0 + rng.random_range(0.0..0.5);
        r1.set(i, i, if rng.random_range(0.0..1.0) < 0.5 { d } else { -d });
    }
    // Distinct, well-separated eigenvalue targets.
    let mut lambdas: Vec<f64> = (0..n)
        .map(|i| (i as f64 + 1.0) + rng.random_range(0.0..0.4))
        .collect();
    if let EigenPattern::Repeated = pattern {
        // A semisimple double eigenvalue: the leading 2x2 of R2 is an exact
        // multiple of R1's, so the coincidence survives roundoff. A
        // defective double would split by sqrt(eps) under perturbation.
        lambdas[1] = lambdas[0];
        r2.set(0, 1, lambdas[0] * r1.get(0, 1));
    }
    if let EigenPattern::ComplexPair = pattern {
        // Leading 2x2 of (R2, R1) becomes a rotation-like pair with a solid
        // imaginary part; the rest stays diagonal-real.
        let a = 1.0 + rng.random_range(0.0..0.5);
        let b = 1.0 + rng.random_range(0.0..0.5);
        r1.set(0, 0, 1.0);
        r1.set(1, 1, 1.0);
        r1.set(0, 1, 0.0);
        r1.set(1, 0, 0.0);
        r2.set(0, 0, a);
        r2.set(0, 1, -b);
        r2.set(1, 0, b);
        r2.set(1, 1, a);
        for i in 2..n {
            r2.set(i, i, lambdas[i] * r1.get(i, i));
        }
        // R2's leading block breaks triangularity on purpose: fold it back
        // into dense slices through the orthonormal factors.
        let y1 = qa.matmul(&r1).matmul(&qb.transpose());
        let y2 = qa.matmul(&r2).matmul(&qb.transpose());
        return Tensor3::from_slices(&y1, &y2).expect("consistent dims");
    }
    for i in 0..n {
        r2.set(i, i, lambdas[i] * r1.get(i, i));
    }
    let y1 = qa.matmul(&r1).matmul(&qb.transpose());
    let y2 = qa.matmul(&r2).matmul(&qb.transpose());
    Tensor3::from_slices(&y1, &y2).expect("consistent dims")
}

/// Quasi-triangular pair with one shared zero diagonal position and, for
/// n >= 4, a complex-pair 2x2 block, conjugated by random orthonormal Q, Z.
fn singular_pencil_instance(rng: &mut impl Rng, n: usize) -> Tensor3 {
    let mut f = DenseMatrix::zeros(n, n);
    let mut g = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            f.set(i, j, 0.5 * gaussian(rng));
            g.set(i, j, 0.5 * gaussian(rng));
        }
    }
    // Positions: a complex 2x2 block at (0, 1) when room allows, the shared
    // zero somewhere after it, regular entries elsewhere.
    let block = n >= 4;
    let zero_pos = if block {
        rng.random_range(2..n)
    } else {
        rng.random_range(0..n)
    };
    let mut i = 0;
    while i < n {
        if block && i == 0 {
            let a = 1.0 + rng.random_range(0.0..0.5);
            let b = 1.0 + rng.random_range(0.0..0.5);
            f.set(0, 0, a);
            f.set(0, 1, -b);
            f.set(1, 0, b);
            f.set(1, 1, a);
            g.set(0, 0, 1.0);
            g.set(1, 1, 1.0);
            g.set(1, 0, 0.0);
            i = 2;
            continue;
        }
        if i == zero_pos {
            f.set(i, i, 0.0);
            g.set(i, i, 0.0);
        } else {
            f.set(i, i, 1.0 + rng.random_range(0.0..1.0));
            g.set(i, i, 1.0 + rng.random_range(0.0..1.0));
        }
        i += 1;
    }
    let q0 = random_orthonormal(rng, n, n);
    let z0 = random_orthonormal(rng, n, n);
    let y1 = q0.transpose().matmul(&f).matmul(&z0.transpose());
    let y2 = q0.transpose().matmul(&g).matmul(&z0.transpose());
    Tensor3::from_slices(&y1, &y2).expect("consistent dims")
}

fn gsd_random_instance(rng: &mut impl Rng, i_dim: usize, j_dim: usize, rank: usize) -> Tensor3 {
    let qa = random_orthonormal(rng, i_dim, rank);
    let qb = random_orthonormal(rng, j_dim, rank);
    let mut r1 = DenseMatrix::zeros(rank, rank);
    let mut r2 = DenseMatrix::zeros(rank, rank);
    for i in 0..rank {
        for j in i..rank {
            r1.set(i, j, gaussian(rng));
            r2.set(i, j, gaussian(rng));
        }
    }
    let qbt = qb.transpose();
    let y1 = qa.matmul(&r1).matmul(&qbt);
    let y2 = qa.matmul(&r2).matmul(&qbt);
    Tensor3::from_slices(&y1, &y2).expect("consistent dims")
}

fn cp_random_instance(
    rng: &mut impl Rng,
    i_dim: usize,
    j_dim: usize,
    rank: usize,
) -> Result<Tensor3> {
    // Well-conditioned A, B (redrawn on near rank deficiency) and third-mode
    // columns with distinct, well-separated ratios.
    fn draw(rng: &mut impl Rng, rows: usize, rank: usize) -> DenseMatrix {
        loop {
            let m = crate::random::random_matrix(rng, rows, rank);
            if m.transpose().matmul(&m).smallest_singular_value().sqrt() > 0.25 {
                return m;
            }
        }
    }
    let a = draw(rng, i_dim, rank);
    let b = draw(rng, j_dim, rank);
    let mut c = DenseMatrix::zeros(2, rank);
    for r in 0..rank {
        c.set(0, r, 1.0);
        c.set(1, r, (r as f64 + 1.0) + rng.random_range(0.0..0.4));
    }
    let f = CpFactors::new(a, b, c)?;
    cp_reconstruct(&f)
}
