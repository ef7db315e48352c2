//! Preconditioned BiCG baseline.
//!
//! Classical two-sided Lanczos formulation: the dual sequence runs on `A^H`
//! and `M^{-H}` with conjugated coefficients, so this is the one baseline
//! that exercises the adjoint matvec every iteration. Shadow residual fixed
//! to the initial residual.

use super::{
    rhs_norm, validate_system, BreakdownSite, ConvergenceReport, NoopObserver, Solution,
    SolveObserver, SolverConfig, SolverError, TerminationFlag,
};
use crate::linalg::{
    axpy_into, axpy_onto, dot_conj, norm2, vec_sub, DenseVector, OpCounters, SparseMatrix,
};
use crate::precond::Preconditioner;

pub fn solve_bicg(
    a: &SparseMatrix,
    b: &DenseVector,
    x0: &DenseVector,
    m: &Preconditioner,
    config: &SolverConfig,
) -> Result<Solution, SolverError> {
    solve_bicg_observed(a, b, x0, m, config, &mut NoopObserver)
}

pub fn solve_bicg_observed(
    a: &SparseMatrix,
    b: &DenseVector,
    x0: &DenseVector,
    m: &Preconditioner,
    config: &SolverConfig,
    obs: &mut dyn SolveObserver,
) -> Result<Solution, SolverError> {
    config.validate()?;
    validate_system(a, b, x0)?;
    if let Some(dim) = m.dim() {
        if dim != a.nrows() {
            return Err(SolverError::DimensionMismatch {
                context: "preconditioner",
                left: dim,
                right: a.nrows(),
            });
        }
    }

    let mut ctrs = OpCounters::default();
    let bnrm = rhs_norm(b);
    let mut x = x0.clone();
    let mut r = vec_sub(b, &a.matvec(&x, &mut ctrs));
    let mut history = vec![norm2(&r) / bnrm];
    if history[0] < config.tol {
        let setup = ctrs;
        let report = ConvergenceReport::assemble(
            a,
            b,
            &x,
            &r,
            bnrm,
            TerminationFlag::Converged,
            0,
            history,
            Vec::new(),
            ctrs,
            setup,
        );
        return Ok(Solution { x, report });
    }
    let mut r_shadow = r.clone();

    let z = m.apply_inv(&r, &mut ctrs);
    let z_shadow = m.apply_inv_adjoint(&r_shadow, &mut ctrs);
    let mut p = z.clone();
    let mut p_shadow = z_shadow.clone();
    let mut rho = dot_conj(&r_shadow, &z, &mut ctrs);
    let setup = ctrs;

    let mut iterations = 0usize;
    let mut flag = TerminationFlag::MaxIterations;
    for k in 1..=config.max_it {
        if rho.norm() <= config.breakdown_eps * norm2(&r_shadow) * norm2(&r) {
            flag = TerminationFlag::Breakdown(BreakdownSite::Rho);
            break;
        }
        let q = a.matvec(&p, &mut ctrs);
        let q_shadow = a.matvec_adjoint(&p_shadow, &mut ctrs);
        let denom = dot_conj(&p_shadow, &q, &mut ctrs);
        if denom.norm() <= config.breakdown_eps * norm2(&p_shadow) * norm2(&q) {
            flag = TerminationFlag::Breakdown(BreakdownSite::AlphaDivisor);
            break;
        }
        let alpha = rho / denom;
        axpy_into(alpha, &p, &mut x, &mut ctrs);
        axpy_into(-alpha, &q, &mut r, &mut ctrs);
        axpy_into(-alpha.conj(), &q_shadow, &mut r_shadow, &mut ctrs);
        let err = norm2(&r) / bnrm;
        history.push(err);
        iterations = k;
        obs.on_iterate(k, &x, &r);
        if err < config.tol {
            flag = TerminationFlag::Converged;
            break;
        }
        if k == config.max_it {
            flag = TerminationFlag::MaxIterations;
            break;
        }
        let z = m.apply_inv(&r, &mut ctrs);
        let z_shadow = m.apply_inv_adjoint(&r_shadow, &mut ctrs);
        let rho_next = dot_conj(&r_shadow, &z, &mut ctrs);
        let beta = rho_next / rho;
        // p = z + beta p; dual direction with the conjugated coefficient
        axpy_onto(&mut p, &z, beta, &mut ctrs);
        axpy_onto(&mut p_shadow, &z_shadow, beta.conj(), &mut ctrs);
        rho = rho_next;
    }

    let report = ConvergenceReport::assemble(
        a,
        b,
        &x,
        &r,
        bnrm,
        flag,
        iterations,
        history,
        Vec::new(),
        ctrs,
        setup,
    );
    Ok(Solution { x, report })
}
