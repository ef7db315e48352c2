//! Preconditioners `M` with forward (`M^{-1} v`) and adjoint (`M^{-H} v`)
//! application.
//!
//! Three variants: identity, Jacobi (diagonal), and a threshold incomplete
//! LU with partial pivoting that plays the role of the `[L,U,P] = luinc(A,
//! droptol)` factorizations used in the experiments. A factorized
//! preconditioner is immutable and can be shared across threads.

mod ilut;

pub use ilut::{ilut_factorize, IlutFactors};

use crate::linalg::{DenseVector, OpCounters, Scalar, SparseMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PrecondError {
    #[error("matrix must be square, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("droptol must be finite and >= 0, got {0}")]
    InvalidDropTol(f64),
    #[error("factorization breakdown: no admissible nonzero pivot for row {row}")]
    ZeroPivot { row: usize },
    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },
}

/// A preconditioner `M ~ A`, applied through its inverse.
#[derive(Clone, Debug)]
pub enum Preconditioner {
    Identity,
    Jacobi { diag: DenseVector },
    Ilut(IlutFactors),
}

impl Preconditioner {
    /// Jacobi preconditioner from the diagonal of `a`.
    pub fn jacobi_from(a: &SparseMatrix) -> Result<Self, PrecondError> {
        if !a.is_square() {
            return Err(PrecondError::NotSquare {
                nrows: a.nrows(),
                ncols: a.ncols(),
            });
        }
        let mut diag = DenseVector::zeros(a.nrows());
        for i in 0..a.nrows() {
            for (j, v) in a.row(i) {
                if j == i {
                    diag[i] = v;
                }
            }
            if diag[i] == Scalar::new(0.0, 0.0) {
                return Err(PrecondError::ZeroDiagonal { row: i });
            }
        }
        Ok(Preconditioner::Jacobi { diag })
    }

    /// Problem size the preconditioner applies to, if it constrains one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Preconditioner::Identity => None,
            Preconditioner::Jacobi { diag } => Some(diag.len()),
            Preconditioner::Ilut(f) => Some(f.dim()),
        }
    }

    /// `M^{-1} v`: permute, forward solve, backward solve.
    pub fn apply_inv(&self, v: &DenseVector, counters: &mut OpCounters) -> DenseVector {
        counters.precond_solves += 1;
        match self {
            Preconditioner::Identity => v.clone(),
            Preconditioner::Jacobi { diag } => {
                assert_eq!(diag.len(), v.len(), "apply_inv: dimension mismatch");
                let mut out = DenseVector::zeros(v.len());
                for i in 0..v.len() {
                    out[i] = v[i] / diag[i];
                }
                out
            }
            Preconditioner::Ilut(f) => f.solve(v),
        }
    }

    /// `M^{-H} v`: adjoint triangular solves in reversed order, then the
    /// inverse permutation.
    pub fn apply_inv_adjoint(&self, v: &DenseVector, counters: &mut OpCounters) -> DenseVector {
        counters.precond_solves += 1;
        match self {
            Preconditioner::Identity => v.clone(),
            Preconditioner::Jacobi { diag } => {
                assert_eq!(diag.len(), v.len(), "apply_inv_adjoint: dimension mismatch");
                let mut out = DenseVector::zeros(v.len());
                for i in 0..v.len() {
                    out[i] = v[i] / diag[i].conj();
                }
                out
            }
            Preconditioner::Ilut(f) => f.solve_adjoint(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cx, dot_conj};

    #[test]
    fn identity_is_a_passthrough() {
        let mut c = OpCounters::default();
        let v = DenseVector::from_real(&[1.0, -2.0]);
        let m = Preconditioner::Identity;
        assert_eq!(m.apply_inv(&v, &mut c), v);
        assert_eq!(m.apply_inv_adjoint(&v, &mut c), v);
        assert_eq!(c.precond_solves, 2);
    }

    #[test]
    fn jacobi_divides_by_the_diagonal() {
        let a = SparseMatrix::from_diag(&[cx(2.0, 0.0), cx(4.0, 0.0)]);
        let m = Preconditioner::jacobi_from(&a).unwrap();
        let mut c = OpCounters::default();
        let out = m.apply_inv(&DenseVector::from_real(&[2.0, 4.0]), &mut c);
        assert_eq!(out, DenseVector::from_real(&[1.0, 1.0]));
    }

    #[test]
    fn jacobi_adjoint_conjugates() {
        let a = SparseMatrix::from_diag(&[cx(0.0, 2.0)]);
        let m = Preconditioner::jacobi_from(&a).unwrap();
        let mut c = OpCounters::default();
        let u = DenseVector::from_complex(vec![cx(1.0, 0.0)]);
        let w = DenseVector::from_complex(vec![cx(0.0, 1.0)]);
        let lhs = dot_conj(&m.apply_inv_adjoint(&u, &mut c), &w, &mut c);
        let rhs = dot_conj(&u, &m.apply_inv(&w, &mut c), &mut c);
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn jacobi_rejects_zero_diagonal() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, cx(1.0, 0.0))]).unwrap();
        assert!(matches!(
            Preconditioner::jacobi_from(&a),
            Err(PrecondError::ZeroDiagonal { row: 1 })
        ));
    }
}
