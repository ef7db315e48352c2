//! Deterministic test problems.
//!
//! Small constructors used by the benchmark harness and the test suites:
//! seeded random sparse systems with controllable diagonal dominance, and a
//! nonsymmetric convection-diffusion stencil that stands in for the harder
//! collection matrices when those files are not on disk.

use crate::linalg::{Scalar, SparseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random square sparse matrix with `extra_per_row` off-diagonal entries
/// per row and a diagonal that dominates its row by at least `dominance`.
///
/// Entries are real; the generator stream is fixed by `seed`.
pub fn diag_dominant(n: usize, extra_per_row: usize, dominance: f64, seed: u64) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets: Vec<(usize, usize, Scalar)> = Vec::with_capacity(n * (extra_per_row + 1));
    for i in 0..n {
        let mut off_sum = 0.0;
        for _ in 0..extra_per_row {
            let j = rng.random_range(0..n);
            if j == i {
                continue;
            }
            let v: f64 = rng.random_range(-1.0..1.0);
            off_sum += v.abs();
            triplets.push((i, j, Scalar::new(v, 0.0)));
        }
        let sign = if rng.random_range(0..2) == 0 { 1.0 } else { -1.0 };
        let d = sign * (off_sum + dominance + rng.random_range(0.0..1.0));
        triplets.push((i, i, Scalar::new(d, 0.0)));
    }
    SparseMatrix::from_triplets(n, n, &triplets).expect("gallery matrix is structurally valid")
}

/// Five-point convection-diffusion stencil on an `nx` x `ny` grid with
/// first-order upwind convection coefficients `(px, py)`. Nonsymmetric for
/// nonzero convection; `N = nx * ny` unknowns.
pub fn convection_diffusion(nx: usize, ny: usize, px: f64, py: f64) -> SparseMatrix {
    let n = nx * ny;
    let idx = |ix: usize, iy: usize| iy * nx + ix;
    let mut triplets: Vec<(usize, usize, Scalar)> = Vec::with_capacity(5 * n);
    for iy in 0..ny {
        for ix in 0..nx {
            let row = idx(ix, iy);
            triplets.push((row, row, Scalar::new(4.0 + px + py, 0.0)));
            if ix > 0 {
                triplets.push((row, idx(ix - 1, iy), Scalar::new(-1.0 - px, 0.0)));
            }
            if ix + 1 < nx {
                triplets.push((row, idx(ix + 1, iy), Scalar::new(-1.0, 0.0)));
            }
            if iy > 0 {
                triplets.push((row, idx(ix, iy - 1), Scalar::new(-1.0 - py, 0.0)));
            }
            if iy + 1 < ny {
                triplets.push((row, idx(ix, iy + 1), Scalar::new(-1.0, 0.0)));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, &triplets).expect("stencil is structurally valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_dominant_is_deterministic_and_dominant() {
        let a = diag_dominant(30, 3, 1.0, 7);
        let b = diag_dominant(30, 3, 1.0, 7);
        assert_eq!(a, b);
        for i in 0..30 {
            let mut diag = 0.0;
            let mut off = 0.0;
            for (j, v) in a.row(i) {
                if j == i {
                    diag = v.norm();
                } else {
                    off += v.norm();
                }
            }
            assert!(diag >= off + 1.0 - 1e-12, "row {i} not dominant");
        }
    }

    #[test]
    fn stencil_has_expected_shape() {
        let a = convection_diffusion(4, 3, 0.5, 0.0);
        assert_eq!(a.nrows(), 12);
        assert!(a.nnz() <= 5 * 12);
        // interior row has all five entries
        let entries: Vec<_> = a.row(5).collect();
        assert_eq!(entries.len(), 5);
    }
}
