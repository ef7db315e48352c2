//! File ingestion and machine-readable reports.
//!
//! Matrix Market is the one matrix exchange format supported, per the NIST
//! specification: coordinate and array formats; real, complex, integer and
//! pattern fields; general, symmetric, skew-symmetric and hermitian
//! symmetry. Reports serialize to CSV (iteration history) or JSON (the
//! full [`crate::solvers::ConvergenceReport`], round-trippable).

mod matrix_market;
mod report;

pub use matrix_market::{
    read_matrix_market, read_matrix_market_detailed, read_rhs, write_matrix_market, MmError,
    MmField, MmFormat, MmSymmetry, ParsedMatrix,
};
pub use report::{parse_json_report, render_csv, render_json, write_report, ReportFormat};

use crate::linalg::{DenseVector, OpCounters, SparseMatrix};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    MatrixMarket(#[from] MmError),
    #[error("right-hand side has length {got}, matrix has {want} rows")]
    RhsLength { got: usize, want: usize },
    #[error("writing {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

/// A named linear system ready to be handed to a solver.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    pub a: SparseMatrix,
    pub b: DenseVector,
    pub name: String,
    pub source: PathBuf,
}

/// How the right-hand side is obtained.
#[derive(Clone, Debug)]
pub enum RhsSpec {
    /// `b = A e`, the convention when the data set ships no right-hand side.
    Ones,
    /// Load from a Matrix Market file, selecting a 1-based column.
    File { path: PathBuf, col: usize },
}

/// `b = A e` where `e` is the vector of ones.
pub fn default_rhs(a: &SparseMatrix) -> DenseVector {
    let mut scratch = OpCounters::default();
    a.matvec(&DenseVector::ones(a.ncols()), &mut scratch)
}

/// Loads a matrix file and attaches a right-hand side.
pub fn load_problem(matrix_path: &Path, rhs: &RhsSpec) -> Result<ProblemInstance, IoError> {
    let a = read_matrix_market(matrix_path)?;
    let b = match rhs {
        RhsSpec::Ones => default_rhs(&a),
        RhsSpec::File { path, col } => read_rhs(path, *col)?,
    };
    if b.len() != a.nrows() {
        return Err(IoError::RhsLength {
            got: b.len(),
            want: a.nrows(),
        });
    }
    let name = matrix_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| matrix_path.display().to_string());
    Ok(ProblemInstance {
        a,
        b,
        name,
        source: matrix_path.to_path_buf(),
    })
}
