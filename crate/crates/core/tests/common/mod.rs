//! Shared fixtures and independent dense oracles for the integration
//! suites. Everything here is deliberately naive (triple loops, textbook
//! elimination) so it cannot share a failure mode with the CSR kernels it
//! checks.

#![allow(dead_code)]

use mlkrylov::linalg::{cx, norm2, vec_sub, DenseVector, Scalar, SparseMatrix};
use mlkrylov::solvers::SolveObserver;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn random_complex_dense(n: usize, seed: u64, diag_boost: f64) -> Vec<Vec<Scalar>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut m: Vec<Vec<Scalar>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] += cx(diag_boost, 0.0);
    }
    m
}

pub fn random_real_dense(n: usize, seed: u64, diag_boost: f64) -> Vec<Vec<Scalar>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut m: Vec<Vec<Scalar>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| cx(rng.random_range(-1.0..1.0), 0.0))
                .collect()
        })
        .collect();
    for (i, row) in m.iter_mut().enumerate() {
        let s = if row[i].re >= 0.0 { 1.0 } else { -1.0 };
        row[i] += cx(s * diag_boost, 0.0);
    }
    m
}

pub fn to_sparse(dense: &[Vec<Scalar>]) -> SparseMatrix {
    SparseMatrix::from_dense(dense).expect("dense fixture is rectangular")
}

pub fn random_complex_vec(n: usize, rng: &mut StdRng) -> DenseVector {
    DenseVector::from_complex(
        (0..n)
            .map(|_| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

pub fn random_real_vec(n: usize, rng: &mut StdRng) -> DenseVector {
    DenseVector::from_complex(
        (0..n)
            .map(|_| cx(rng.random_range(-1.0..1.0), 0.0))
            .collect(),
    )
}

pub fn dense_matvec(a: &[Vec<Scalar>], v: &DenseVector) -> DenseVector {
    let mut y = DenseVector::zeros(a.len());
    for (i, row) in a.iter().enumerate() {
        for (j, &aij) in row.iter().enumerate() {
            y[i] += aij * v[j];
        }
    }
    y
}

pub fn dense_adjoint_matvec(a: &[Vec<Scalar>], v: &DenseVector) -> DenseVector {
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut y = DenseVector::zeros(ncols);
    for (i, row) in a.iter().enumerate() {
        for (j, &aij) in row.iter().enumerate() {
            y[j] += aij.conj() * v[i];
        }
    }
    y
}

pub fn dense_transpose_conj(a: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let nrows = a.len();
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![cx(0.0, 0.0); nrows]; ncols];
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            out[j][i] = v.conj();
        }
    }
    out
}

/// Textbook Gaussian elimination with partial pivoting.
pub fn dense_solve(a: &[Vec<Scalar>], b: &DenseVector) -> DenseVector {
    let n = a.len();
    let mut m = a.to_vec();
    let mut rhs: Vec<Scalar> = b.as_slice().to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| m[p][col].norm().total_cmp(&m[q][col].norm()))
            .expect("nonempty pivot range");
        m.swap(col, piv);
        rhs.swap(col, piv);
        assert!(m[col][col].norm() > 0.0, "oracle hit a singular matrix");
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                let sub = f * m[col][k];
                m[row][k] -= sub;
            }
            let sub = f * rhs[col];
            rhs[row] -= sub;
        }
    }
    let mut x = vec![cx(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    DenseVector::from_complex(x)
}

/// Numerical rank of a set of columns, by elimination with a relative
/// pivot threshold.
pub fn rank_of_columns(cols: &[DenseVector], rtol: f64) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let nrows = cols[0].len();
    let ncols = cols.len();
    let mut m: Vec<Vec<Scalar>> = (0..nrows)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    let tol = rtol * scale.max(1e-300);
    let mut rank = 0usize;
    for col in 0..ncols {
        let (piv, mag) = (rank..nrows)
            .map(|row| (row, m[row][col].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((rank, 0.0));
        if mag <= tol {
            continue;
        }
        m.swap(rank, piv);
        for row in (rank + 1)..nrows {
            let f = m[row][col] / m[rank][col];
            for k in col..ncols {
                let sub = f * m[rank][k];
                m[row][k] -= sub;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

pub fn rel_vec_err(got: &DenseVector, want: &DenseVector) -> f64 {
    norm2(&vec_sub(got, want)) / norm2(want).max(1e-300)
}

/// Observer capturing everything the invariant suites need.
#[derive(Default)]
pub struct Recorder {
    pub iterates: Vec<(usize, DenseVector, DenseVector)>,
    pub us: Vec<(usize, DenseVector)>,
    pub omegas: Vec<(usize, Scalar)>,
    pub beta_tildes: Vec<(usize, usize, Scalar)>,
    pub directions: Vec<(usize, DenseVector, DenseVector)>,
}

impl SolveObserver for Recorder {
    fn on_iterate(&mut self, k: usize, x: &DenseVector, r: &DenseVector) {
        self.iterates.push((k, x.clone(), r.clone()));
    }
    fn on_u(&mut self, k: usize, u: &DenseVector) {
        self.us.push((k, u.clone()));
    }
    fn on_omega(&mut self, j: usize, omega: Scalar) {
        self.omegas.push((j, omega));
    }
    fn on_beta_tilde(&mut self, k: usize, s: usize, beta_tilde: Scalar) {
        self.beta_tildes.push((k, s, beta_tilde));
    }
    fn on_direction(&mut self, k: usize, g: &DenseVector, w: &DenseVector) {
        self.directions.push((k, g.clone(), w.clone()));
    }
}

impl Recorder {
    pub fn x_at(&self, k: usize) -> Option<&DenseVector> {
        self.iterates.iter().find(|(kk, _, _)| *kk == k).map(|(_, x, _)| x)
    }
    pub fn r_at(&self, k: usize) -> Option<&DenseVector> {
        self.iterates.iter().find(|(kk, _, _)| *kk == k).map(|(_, _, r)| r)
    }
    pub fn w_at(&self, k: usize) -> Option<&DenseVector> {
        self.directions
            .iter()
            .find(|(kk, _, _)| *kk == k)
            .map(|(_, _, w)| w)
    }
    pub fn g_at(&self, k: usize) -> Option<&DenseVector> {
        self.directions
            .iter()
            .find(|(kk, _, _)| *kk == k)
            .map(|(_, g, _)| g)
    }
    pub fn omega_for_cycle(&self, j: usize) -> Option<Scalar> {
        self.omegas.iter().find(|(jj, _)| *jj == j).map(|(_, o)| *o)
    }
}
