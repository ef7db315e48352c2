//! Preconditioned BiCGStab baseline.
//!
//! Right-preconditioned van der Vorst formulation with the shadow vector
//! fixed to the initial residual. The stabilization parameter comes from
//! the shared [`super::select_omega`] so the `kappa` control behaves
//! identically across solvers. One iteration is two matvecs and two
//! preconditioner solves; when the intermediate residual `s` already meets
//! the tolerance the half-updated iterate is returned, mirroring the
//! `u_k ~ 0` exit of the ML(n) solvers.

use super::{
    perturb_omega, rhs_norm, select_omega, validate_system, BreakdownSite, ConvergenceReport,
    NoopObserver, Solution, SolveObserver, SolverConfig, SolverError, TerminationFlag,
};
use crate::linalg::{
    axpy, axpy_into, axpy_onto, dot_conj, norm2, vec_sub, DenseVector, OpCounters, Scalar,
    SparseMatrix,
};
use crate::precond::Preconditioner;

pub fn solve_bicgstab(
    a: &SparseMatrix,
    b: &DenseVector,
    x0: &DenseVector,
    m: &Preconditioner,
    config: &SolverConfig,
) -> Result<Solution, SolverError> {
    solve_bicgstab_observed(a, b, x0, m, config, &mut NoopObserver)
}

pub fn solve_bicgstab_observed(
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
    let r_shadow = r.clone();
    let setup = ctrs;

    let mut p = DenseVector::zeros(a.nrows());
    let mut v = DenseVector::zeros(a.nrows());
    let mut rho_prev = Scalar::new(1.0, 0.0);
    let mut alpha = Scalar::new(1.0, 0.0);
    let mut omega = Scalar::new(1.0, 0.0);
    let mut omegas: Vec<Scalar> = Vec::new();

    let mut iterations = 0usize;
    let mut flag = TerminationFlag::MaxIterations;
    for k in 1..=config.max_it {
        let rho = dot_conj(&r_shadow, &r, &mut ctrs);
        if rho.norm() <= config.breakdown_eps * norm2(&r_shadow) * norm2(&r) {
            flag = TerminationFlag::Breakdown(BreakdownSite::Rho);
            break;
        }
        if k == 1 {
            p = r.clone();
        } else {
            let beta = (rho / rho_prev) * (alpha / omega);
            // p = r + beta * (p - omega * v)
            axpy_into(-omega, &v, &mut p, &mut ctrs);
            axpy_onto(&mut p, &r, beta, &mut ctrs);
        }
        let p_hat = m.apply_inv(&p, &mut ctrs);
        v = a.matvec(&p_hat, &mut ctrs);
        let rv = dot_conj(&r_shadow, &v, &mut ctrs);
        if rv.norm() <= config.breakdown_eps * norm2(&r_shadow) * norm2(&v) {
            flag = TerminationFlag::Breakdown(BreakdownSite::AlphaDivisor);
            break;
        }
        alpha = rho / rv;
        axpy_into(alpha, &p_hat, &mut x, &mut ctrs);
        let s = axpy(-alpha, &v, &r, &mut ctrs);
        let err_s = norm2(&s) / bnrm;
        if err_s < config.tol {
            r = s;
            history.push(err_s);
            iterations = k;
            obs.on_iterate(k, &x, &r);
            flag = TerminationFlag::Converged;
            break;
        }
        let s_hat = m.apply_inv(&s, &mut ctrs);
        let t = a.matvec(&s_hat, &mut ctrs);
        let Some(raw) = select_omega(&s, &t, config.kappa, &mut ctrs) else {
            r = s;
            flag = TerminationFlag::Breakdown(BreakdownSite::OmegaDenominator);
            break;
        };
        omega = perturb_omega(raw, norm2(&s), norm2(&t), config.omega_perturb);
        omegas.push(omega);
        obs.on_omega(k, omega);
        axpy_into(omega, &s_hat, &mut x, &mut ctrs);
        r = axpy(-omega, &t, &s, &mut ctrs);
        let err = norm2(&r) / bnrm;
        history.push(err);
        iterations = k;
        obs.on_iterate(k, &x, &r);
        rho_prev = rho;
        if err < config.tol {
            flag = TerminationFlag::Converged;
            break;
        }
        if k == config.max_it {
            flag = TerminationFlag::MaxIterations;
            break;
        }
    }

    let report = ConvergenceReport::assemble(
        a, b, &x, &r, bnrm, flag, iterations, history, omegas, ctrs, setup,
    );
    Ok(Solution { x, report })
}
