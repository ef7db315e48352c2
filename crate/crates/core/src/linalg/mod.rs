//! Scalar field, dense vectors/blocks, CSR matrices and the instrumented
//! BLAS-1/2 kernels the solvers are written against.
//!
//! All arithmetic is complex double precision. The kernels that the cost
//! model of the solvers tracks (matvec, adjoint matvec, conjugated dot,
//! saxpy, preconditioner solve) take an [`OpCounters`] and increment it;
//! norms and plain vector sums are bookkeeping-free. Summation order is
//! fixed (sequential, per row) so solver histories are reproducible.

mod counters;
mod dense;
mod sparse;

pub use counters::OpCounters;
pub use dense::{
    axpy, axpy_into, axpy_onto, dot_conj, norm2, scale_into, scaled_sub, vec_sub, DenseBlock,
    DenseVector,
};
pub use sparse::SparseMatrix;

use thiserror::Error;

/// Complex double precision scalar; the field over which everything lives.
pub type Scalar = num_complex::Complex64;

/// Shorthand constructor used pervasively in tests and builders.
pub fn cx(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("{context}: dimension mismatch ({left} vs {right})")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },
    #[error("invalid sparse structure: {0}")]
    InvalidStructure(String),
}
