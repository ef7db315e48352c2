//! ML(n)BiCGStabt without preconditioning, in flat-counter form.
//!
//! One k-iteration per phase. Within a cycle the first `n - 1` steps update
//! `x`/`r` along the stored directions and rebuild `g_k` from two
//! recurrences: a `z_w` accumulation over the previous cycle's directions
//! (the beta-tilde coefficients, `beta~ = -omega * beta`) and an f-driven
//! sweep over the current cycle's (`beta_s = -f^H g_k / c_s`, the step that
//! needs `F = A^H Q` and keeps `w_k = A g_k` affordable on every
//! iteration). The n-th step picks the new omega from the residual
//! minimization and closes the cycle.
//!
//! If the intermediate `u_k` of a closing step is already converged, the
//! half-updated `x_k` solves the system and the solve stops there.

use super::{
    c_is_degenerate, perturb_omega, rhs_norm, select_omega, validate_shadow, validate_system,
    BreakdownSite, ConvergenceReport, NoopObserver, Solution, SolveObserver, SolverConfig,
    SolverError, TerminationFlag,
};
use crate::indexing;
use crate::linalg::{
    axpy, axpy_into, dot_conj, norm2, scaled_sub, vec_sub, DenseBlock, DenseVector, OpCounters,
    Scalar,
};
use crate::linalg::SparseMatrix;

/// Solves `A x = b` with shadow block `q` (see [`crate::shadow`]).
pub fn solve_ml_bicgstabt(
    a: &SparseMatrix,
    b: &DenseVector,
    x0: &DenseVector,
    q: &DenseBlock,
    config: &SolverConfig,
) -> Result<Solution, SolverError> {
    solve_ml_bicgstabt_observed(a, b, x0, q, config, &mut NoopObserver)
}

/// [`solve_ml_bicgstabt`] with instrumentation hooks.
pub fn solve_ml_bicgstabt_observed(
    a: &SparseMatrix,
    b: &DenseVector,
    x0: &DenseVector,
    q: &DenseBlock,
    config: &SolverConfig,
    obs: &mut dyn SolveObserver,
) -> Result<Solution, SolverError> {
    config.validate()?;
    validate_system(a, b, x0)?;
    validate_shadow(a, q, config.n)?;

    let n = config.n;
    let n_i = n as i64;
    let nrows = a.nrows();
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

    // F = A^H [q_1 ... q_{n-1}]; column n is never needed
    let f_cols: Vec<DenseVector> = (0..n.saturating_sub(1))
        .map(|i| a.matvec_adjoint(q.col(i), &mut ctrs))
        .collect();

    // circular storage: slot s % n holds g_s, w_s, c_s
    let mut g_cols: Vec<DenseVector> = vec![DenseVector::zeros(nrows); n];
    let mut w_cols: Vec<DenseVector> = vec![DenseVector::zeros(nrows); n];
    let mut c = vec![Scalar::new(0.0, 0.0); n];
    g_cols[0] = r.clone();
    w_cols[0] = a.matvec(&g_cols[0], &mut ctrs);
    c[0] = dot_conj(q.col(0), &w_cols[0], &mut ctrs);
    obs.on_direction(0, &g_cols[0], &w_cols[0]);
    let mut omega = Scalar::new(1.0, 0.0);
    let mut omegas: Vec<Scalar> = Vec::new();
    let setup = ctrs;

    if c_is_degenerate(c[0], q.col(0), &w_cols[0], config.breakdown_eps) {
        let report = ConvergenceReport::assemble(
            a,
            b,
            &x,
            &r,
            bnrm,
            TerminationFlag::Breakdown(BreakdownSite::CDivisor),
            0,
            history,
            omegas,
            ctrs,
            setup,
        );
        return Ok(Solution { x, report });
    }

    let mut iterations = 0usize;
    let mut flag = TerminationFlag::MaxIterations;
    for k in 1..=config.max_it {
        let ki = k as i64;
        let phase = indexing::r(n_i, ki) as usize;
        let cycle = indexing::g(n_i, ki);
        let prev = (k - 1) % n;

        let alpha = dot_conj(q.col(phase - 1), &r, &mut ctrs) / c[prev];

        if phase < n {
            axpy_into(alpha, &g_cols[prev], &mut x, &mut ctrs);
            axpy_into(-alpha, &w_cols[prev], &mut r, &mut ctrs);
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

            // directions from the previous cycle enter through z_w
            let mut zw = r.clone();
            let mut gk = DenseVector::zeros(nrows);
            let s_lo = (ki - n_i).max(0);
            let s_hi = cycle * n_i;
            for s in s_lo..s_hi {
                let slot = (s % n_i) as usize;
                let beta_t = -dot_conj(q.col(slot), &zw, &mut ctrs) / c[slot];
                obs.on_beta_tilde(k, s as usize, beta_t);
                axpy_into(beta_t, &w_cols[slot], &mut zw, &mut ctrs);
                axpy_into(beta_t, &g_cols[slot], &mut gk, &mut ctrs);
            }
            scaled_sub(&zw, Scalar::new(1.0, 0.0) / omega, &mut gk, &mut ctrs);
            // directions from the current cycle enter through F
            for s in (cycle * n_i)..ki {
                let slot = (s % n_i) as usize;
                let beta = -dot_conj(&f_cols[slot], &gk, &mut ctrs) / c[slot];
                axpy_into(beta, &g_cols[slot], &mut gk, &mut ctrs);
            }
            g_cols[k % n] = gk;
        } else {
            // end of cycle: the omega step
            axpy_into(alpha, &g_cols[prev], &mut x, &mut ctrs);
            let u = axpy(-alpha, &w_cols[prev], &r, &mut ctrs);
            obs.on_u(k, &u);
            let err_u = norm2(&u) / bnrm;
            if err_u < config.tol {
                // u ~ 0: the half-updated x is already the solution
                r = u;
                history.push(err_u);
                iterations = k;
                obs.on_iterate(k, &x, &r);
                flag = TerminationFlag::Converged;
                break;
            }
            let au = a.matvec(&u, &mut ctrs);
            let Some(raw) = select_omega(&u, &au, config.kappa, &mut ctrs) else {
                r = u;
                flag = TerminationFlag::Breakdown(BreakdownSite::OmegaDenominator);
                break;
            };
            omega = perturb_omega(raw, norm2(&u), norm2(&au), config.omega_perturb);
            omegas.push(omega);
            obs.on_omega((cycle + 1) as usize, omega);

            axpy_into(omega, &u, &mut x, &mut ctrs);
            r = axpy(-omega, &au, &u, &mut ctrs);
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

            let mut zw = r.clone();
            let mut gk = DenseVector::zeros(nrows);
            for s in (cycle * n_i)..ki {
                let slot = (s % n_i) as usize;
                let beta_t = -dot_conj(q.col(slot), &zw, &mut ctrs) / c[slot];
                obs.on_beta_tilde(k, s as usize, beta_t);
                axpy_into(beta_t, &w_cols[slot], &mut zw, &mut ctrs);
                axpy_into(beta_t, &g_cols[slot], &mut gk, &mut ctrs);
            }
            scaled_sub(&zw, Scalar::new(1.0, 0.0) / omega, &mut gk, &mut ctrs);
            g_cols[k % n] = gk;
        }

        // w_k = A g_k and the next divisor, every iteration
        let slot = k % n;
        w_cols[slot] = a.matvec(&g_cols[slot], &mut ctrs);
        c[slot] = dot_conj(q.col(slot), &w_cols[slot], &mut ctrs);
        obs.on_direction(k, &g_cols[slot], &w_cols[slot]);
        if c_is_degenerate(c[slot], q.col(slot), &w_cols[slot], config.breakdown_eps) {
            flag = TerminationFlag::Breakdown(BreakdownSite::CDivisor);
            break;
        }
    }

    let report = ConvergenceReport::assemble(
        a, b, &x, &r, bnrm, flag, iterations, history, omegas, ctrs, setup,
    );
    Ok(Solution { x, report })
}
