//! The iterative methods and their shared machinery.
//!
//! Four solvers share one report contract:
//!
//! * [`solve_ml_bicg`] — the multiple-starting BiCG ancestor, driven by the
//!   left Lanczos vectors. Mostly used as the reference for polynomial and
//!   orthogonality checks.
//! * [`solve_ml_bicgstabt`] — the flat-counter form of the transposed
//!   ML(n)BiCGStab variant, without preconditioning.
//! * [`solve_ml_bicgstabt_prec`] — the cycle/phase split form with a
//!   preconditioner; with the identity it reproduces the unpreconditioned
//!   solver's history to round-off.
//! * [`solve_bicgstab`] / [`solve_bicg`] — classical baselines.
//!
//! Convergence is tested on the recursive residual `||r_k|| / ||b||`; the
//! report separately records the true error `||b - A x|| / ||b||` and the
//! gap between the two at exit. Solvers terminate with a flag rather than
//! an error on numerical breakdowns; `Err` is reserved for structural
//! problems (dimension mismatches, invalid configuration).

mod bicg;
mod bicgstab;
mod ml_bicg;
mod ml_bicgstabt;
mod ml_bicgstabt_prec;

pub use bicg::{solve_bicg, solve_bicg_observed};
pub use bicgstab::{solve_bicgstab, solve_bicgstab_observed};
pub use ml_bicg::{solve_ml_bicg, solve_ml_bicg_observed};
pub use ml_bicgstabt::{solve_ml_bicgstabt, solve_ml_bicgstabt_observed};
pub use ml_bicgstabt_prec::{solve_ml_bicgstabt_prec, solve_ml_bicgstabt_prec_observed};

use crate::linalg::{dot_conj, norm2, vec_sub, DenseBlock, DenseVector, OpCounters, Scalar, SparseMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Solver parameters. Defaults mirror the experimental protocol: relative
/// tolerance `1e-7`, standard minimization (`kappa = 0`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Number of shadow vectors for the ML(n) methods.
    pub n: usize,
    /// Relative residual threshold.
    pub tol: f64,
    /// Maximum number of k-iterations.
    pub max_it: usize,
    /// Sleijpen-van der Vorst minimization control; `0` keeps the plain
    /// residual-minimizing omega.
    pub kappa: f64,
    /// Seed threaded through to shadow-block construction by the harness.
    pub seed: u64,
    /// Relative near-zero threshold for breakdown divisors.
    pub breakdown_eps: f64,
    /// Relative floor applied to omega when it comes out near zero.
    pub omega_perturb: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: 8,
            tol: 1e-7,
            max_it: 10_000,
            kappa: 0.0,
            seed: 0,
            breakdown_eps: 1e-14,
            omega_perturb: 1e-14,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.n < 1 {
            return Err(SolverError::InvalidConfig("n must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(SolverError::InvalidConfig("tol must be > 0".into()));
        }
        if self.max_it < 1 {
            return Err(SolverError::InvalidConfig("max_it must be >= 1".into()));
        }
        if !(self.kappa >= 0.0) {
            return Err(SolverError::InvalidConfig("kappa must be >= 0".into()));
        }
        if !(self.breakdown_eps >= 0.0) || !(self.omega_perturb >= 0.0) {
            return Err(SolverError::InvalidConfig(
                "breakdown thresholds must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("{context}: dimension mismatch ({left} vs {right})")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },
    #[error("coefficient matrix must be square, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
}

/// Which divisor degenerated when a solve broke down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakdownSite {
    /// `c_k = q^H w_k` in the ML(n)BiCGStabt recurrences.
    CDivisor,
    /// `||A u||` vanished while `u` itself was not converged.
    OmegaDenominator,
    /// The BiCG-type `rho` inner product.
    Rho,
    /// The `alpha` divisor (`p~^H A p` or `r~^H v`).
    AlphaDivisor,
    /// The ML(n)BiCG divisor `p_{k+1}^H A g_k`.
    PAg,
}

impl std::fmt::Display for BreakdownSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BreakdownSite::CDivisor => "c_divisor",
            BreakdownSite::OmegaDenominator => "omega_denominator",
            BreakdownSite::Rho => "rho",
            BreakdownSite::AlphaDivisor => "alpha_divisor",
            BreakdownSite::PAg => "p_ag",
        };
        f.write_str(s)
    }
}

/// How a solve terminated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationFlag {
    Converged,
    MaxIterations,
    Breakdown(BreakdownSite),
}

impl TerminationFlag {
    /// The conventional integer flag: 0 converged, 1 out of iterations,
    /// -1 breakdown.
    pub fn as_int(&self) -> i32 {
        match self {
            TerminationFlag::Converged => 0,
            TerminationFlag::MaxIterations => 1,
            TerminationFlag::Breakdown(_) => -1,
        }
    }
}

/// Everything a solve reports besides the solution vector itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub flag: TerminationFlag,
    /// Completed k-iterations; equals `residual_history.len() - 1`.
    pub iterations: usize,
    /// `||r_k|| / ||b||` for k = 0 (initial) through the last iteration.
    pub residual_history: Vec<f64>,
    /// `||b - A x|| / ||b||` at exit.
    pub true_error: f64,
    /// `||(b - A x) - r|| / ||b||` at exit.
    pub residual_gap: f64,
    /// Total operation counts, setup included.
    pub counters: OpCounters,
    /// Counts at the end of setup (everything before the first
    /// k-iteration), so `counters.since(&setup_counters)` is the loop cost.
    pub setup_counters: OpCounters,
    /// The omega chosen at each cycle end, in order.
    pub omega_history: Vec<Scalar>,
}

/// A computed solution plus its report.
#[derive(Clone, Debug)]
pub struct Solution {
    pub x: DenseVector,
    pub report: ConvergenceReport,
}

impl ConvergenceReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        a: &SparseMatrix,
        b: &DenseVector,
        x: &DenseVector,
        r: &DenseVector,
        bnrm: f64,
        flag: TerminationFlag,
        iterations: usize,
        residual_history: Vec<f64>,
        omega_history: Vec<Scalar>,
        counters: OpCounters,
        setup_counters: OpCounters,
    ) -> Self {
        debug_assert_eq!(iterations + 1, residual_history.len());
        let mut scratch = OpCounters::default();
        let true_r = vec_sub(b, &a.matvec(x, &mut scratch));
        let true_error = norm2(&true_r) / bnrm;
        let residual_gap = norm2(&vec_sub(&true_r, r)) / bnrm;
        ConvergenceReport {
            flag,
            iterations,
            residual_history,
            true_error,
            residual_gap,
            counters,
            setup_counters,
            omega_history,
        }
    }
}

/// Observation points inside a solve, for instrumentation and tests.
/// All hooks default to no-ops.
pub trait SolveObserver {
    /// After the residual update of iteration `k`: the recurred `x_k`, `r_k`.
    fn on_iterate(&mut self, _k: usize, _x: &DenseVector, _r: &DenseVector) {}
    /// The intermediate `u_k` of an end-of-cycle step.
    fn on_u(&mut self, _k: usize, _u: &DenseVector) {}
    /// The omega selected for cycle `j` (1-based), after perturbation.
    fn on_omega(&mut self, _j: usize, _omega: Scalar) {}
    /// A beta-tilde coefficient tying iteration `k` to direction `s`.
    fn on_beta_tilde(&mut self, _k: usize, _s: usize, _beta_tilde: Scalar) {}
    /// A new direction pair: `g_k` and `w_k = A (M^{-1}) g_k`.
    fn on_direction(&mut self, _k: usize, _g: &DenseVector, _w: &DenseVector) {}
}

/// The do-nothing observer used by the plain entry points.
pub struct NoopObserver;

impl SolveObserver for NoopObserver {}

/// Residual-minimizing omega: `(Au)^H u / ||Au||^2`, with the
/// Sleijpen-van der Vorst adjustment when `kappa > 0`. Returns `None` when
/// `||Au|| = 0`, which the caller maps to either an exact-solution event
/// (when `u` itself is negligible) or a breakdown.
pub fn select_omega(
    u: &DenseVector,
    au: &DenseVector,
    kappa: f64,
    counters: &mut OpCounters,
) -> Option<Scalar> {
    let denom = dot_conj(au, au, counters).re;
    if denom == 0.0 {
        return None;
    }
    let rho = dot_conj(au, u, counters);
    let mut omega = rho / denom;
    if kappa > 0.0 {
        let rho_hat = rho.norm() / (norm2(au) * norm2(u));
        if rho_hat > 0.0 && rho_hat < kappa {
            omega *= kappa / rho_hat;
        }
    }
    Some(omega)
}

/// Pushes a near-zero omega away from zero: below `eps * ||u|| / ||Au||`
/// the magnitude is raised to that threshold keeping the original phase
/// (or `+threshold` when omega is exactly zero).
pub(crate) fn perturb_omega(omega: Scalar, u_norm: f64, au_norm: f64, eps: f64) -> Scalar {
    let threshold = eps * u_norm / au_norm;
    let mag = omega.norm();
    if mag >= threshold || threshold == 0.0 {
        omega
    } else if mag == 0.0 {
        Scalar::new(threshold, 0.0)
    } else {
        omega * (threshold / mag)
    }
}

/// `||(b - A x) - r_computed|| / ||b||`: how far the recurred residual has
/// drifted from the true one. Uses an uncounted matvec (measurement, not
/// part of any solve).
pub fn residual_gap(
    a: &SparseMatrix,
    x: &DenseVector,
    b: &DenseVector,
    r_computed: &DenseVector,
) -> f64 {
    let mut scratch = OpCounters::default();
    let true_r = vec_sub(b, &a.matvec(x, &mut scratch));
    let mut bnrm = norm2(b);
    if bnrm == 0.0 {
        bnrm = 1.0;
    }
    norm2(&vec_sub(&true_r, r_computed)) / bnrm
}

/// Near-zero test for the `c_k` divisor, scaled by the magnitudes of its
/// factors (the concrete scale is a pragmatic choice; exact breakdowns are
/// probability-zero events).
pub(crate) fn c_is_degenerate(c: Scalar, q: &DenseVector, w: &DenseVector, eps: f64) -> bool {
    c.norm() <= eps * norm2(q) * norm2(w)
}

pub(crate) fn validate_system(
    a: &SparseMatrix,
    b: &DenseVector,
    x0: &DenseVector,
) -> Result<(), SolverError> {
    if !a.is_square() {
        return Err(SolverError::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
    }
    if b.len() != a.nrows() {
        return Err(SolverError::DimensionMismatch {
            context: "right-hand side",
            left: a.nrows(),
            right: b.len(),
        });
    }
    if x0.len() != a.ncols() {
        return Err(SolverError::DimensionMismatch {
            context: "initial guess",
            left: a.ncols(),
            right: x0.len(),
        });
    }
    Ok(())
}

pub(crate) fn validate_shadow(
    a: &SparseMatrix,
    q: &DenseBlock,
    n: usize,
) -> Result<(), SolverError> {
    if q.ncols() != n {
        return Err(SolverError::DimensionMismatch {
            context: "shadow block columns vs config.n",
            left: q.ncols(),
            right: n,
        });
    }
    if q.nrows() != a.nrows() {
        return Err(SolverError::DimensionMismatch {
            context: "shadow block rows",
            left: q.nrows(),
            right: a.nrows(),
        });
    }
    Ok(())
}

/// `||b||`, with the zero right-hand side mapped to 1 so relative
/// residuals stay finite.
pub(crate) fn rhs_norm(b: &DenseVector) -> f64 {
    let bnrm = norm2(b);
    if bnrm == 0.0 {
        1.0
    } else {
        bnrm
    }
}
