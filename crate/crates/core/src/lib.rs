//! Sparse iterative solvers built around the ML(n)BiCGStab family.
//!
//! The centerpiece is ML(n)BiCGStabt, a variant of ML(n)BiCGStab that keeps
//! the search directions consistent with `w_k = A g_k` on every iteration by
//! reintroducing `A^H` through a precomputed block `F = M^{-H} A^H Q` of
//! transformed shadow vectors. The crate also ships the ML(n)BiCG ancestor it
//! is derived from, classical BiCG/BiCGStab baselines, a threshold ILU
//! preconditioner, Matrix Market ingestion and machine-readable convergence
//! reports.
//!
//! Everything is complex `f64`: real data embeds losslessly and all inner
//! products are conjugated, so a single scalar type covers both cases.
//!
//! Quick tour:
//!
//! * [`linalg`] — dense vectors/blocks, CSR matrices, instrumented kernels.
//! * [`indexing`] — the `g_n` / `r_n` cycle-phase index functions.
//! * [`shadow`] — shadow-block construction and left Lanczos vectors.
//! * [`precond`] — identity / Jacobi / ILUT preconditioners.
//! * [`solvers`] — the four iterative methods and the omega selection rule.
//! * [`io`] — Matrix Market files, right-hand sides, report serialization.
//! * [`gallery`] — deterministic test problems used by benchmarks and tests.

pub mod gallery;
pub mod indexing;
pub mod io;
pub mod linalg;
pub mod precond;
pub mod shadow;
pub mod solvers;

pub use linalg::{DenseBlock, DenseVector, OpCounters, Scalar, SparseMatrix};
pub use precond::Preconditioner;
pub use shadow::{ShadowMode, ShadowSpec};
pub use solvers::{ConvergenceReport, SolverConfig, TerminationFlag};
