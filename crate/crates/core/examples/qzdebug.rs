use gsdfit::matrix::DenseMatrix;
use gsdfit::pencil::{real_qz, QzOptions};
use gsdfit::random::{random_matrix, seeded_rng};
use std::time::Instant;

fn main() {
    // Acceptance-scale stress: 200 seeded pairs across n = 2..=8.
    let start = Instant::now();
    let mut worst_res = 0.0f64;
    let mut worst_ortho = 0.0f64;
    let mut fails = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 7);
        let mut rng = seeded_rng(seed);
        let a = random_matrix(&mut rng, n, n);
        let b = random_matrix(&mut rng, n, n);
        match real_qz(&a, &b, &QzOptions::default()) {
            Ok(qz) => {
                let scale = a.frobenius_norm() + b.frobenius_norm();
                let res = qz
                    .reconstruct_a()
                    .sub(&a)
                    .frobenius_norm()
                    .max(qz.reconstruct_b().sub(&b).frobenius_norm())
                    / scale;
                worst_res = worst_res.max(res);
                worst_ortho = worst_ortho
                    .max(qz.q.orthonormality_residual())
                    .max(qz.z.orthonormality_residual());
                // Every remaining 2x2 block must be a strict complex pair.
                for blk in &qz.blocks {
                    if blk.size == 2 {
                        let i = blk.start;
                        let fb = qz.f.block(i, i + 2, i, i + 2);
                        let gb = qz.g.block(i, i + 2, i, i + 2);
                        let df = fb.det();
                        let dg = gb.det();
                        let m = fb.get(0, 0) * gb.get(1, 1) + fb.get(1, 1) * gb.get(0, 0)
                            - fb.get(0, 1) * gb.get(1, 0)
                            - fb.get(1, 0) * gb.get(0, 1);
                        assert!(m * m - 4.0 * df * dg < 0.0, "seed {seed}: real block left");
                    }
                }
                let _ = DenseMatrix::identity(1);
            }
            Err(e) => {
                fails += 1;
                println!("seed {seed} (n={n}): FAIL {e}");
            }
        }
    }
    println!(
        "200 pairs in {:?}: fails {fails}, worst residual {worst_res:.2e}, worst ortho {worst_ortho:.2e}",
        start.elapsed()
    );
}
