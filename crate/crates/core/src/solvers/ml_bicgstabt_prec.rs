//! ML(n)BiCGStabt with (right) preconditioning.
//!
//! Same method as [`super::solve_ml_bicgstabt`] applied to `A M^{-1} y = b`
//! with `x = M^{-1} y` recovered on the fly, written with the k-loop split
//! into a cycle loop and a phase loop so the index functions never need to
//! be evaluated. The transformed shadow block becomes
//! `F = M^{-H} A^H [q_1 ... q_{n-1}]`, computed once up front. The `e`
//! inner product `q^H r` is carried across steps instead of recomputed, and
//! the `z_w` accumulation reuses the direction column it is about to
//! retire, exactly like the reference formulation. With `M = Identity` the
//! iterates coincide with the unpreconditioned solver to round-off.

use super::{
    c_is_degenerate, perturb_omega, rhs_norm, select_omega, validate_shadow, validate_system,
    BreakdownSite, ConvergenceReport, NoopObserver, Solution, SolveObserver, SolverConfig,
    SolverError, TerminationFlag,
};
use crate::linalg::{
    axpy, axpy_into, axpy_onto, dot_conj, norm2, scale_into, scaled_sub, vec_sub, DenseBlock,
    DenseVector, OpCounters, Scalar, SparseMatrix,
};
use crate::precond::Preconditioner;

/// `dst_col += alpha * src_col` between two columns of one ring.
fn axpy_cols(
    cols: &mut [DenseVector],
    alpha: Scalar,
    src: usize,
    dst: usize,
    ctrs: &mut OpCounters,
) {
    debug_assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = cols.split_at_mut(dst);
        axpy_into(alpha, &lo[src], &mut hi[0], ctrs);
    } else {
        let (lo, hi) = cols.split_at_mut(src);
        axpy_into(alpha, &hi[0], &mut lo[dst], ctrs);
    }
}

/// Solves `A x = b` with preconditioner `m` and shadow block `q`.
pub fn solve_ml_bicgstabt_prec(
    a: &SparseMatrix,
    b: &DenseVector,
    x0: &DenseVector,
    q: &DenseBlock,
    m: &Preconditioner,
    config: &SolverConfig,
) -> Result<Solution, SolverError> {
    solve_ml_bicgstabt_prec_observed(a, b, x0, q, m, config, &mut NoopObserver)
}

/// [`solve_ml_bicgstabt_prec`] with instrumentation hooks.
pub fn solve_ml_bicgstabt_prec_observed(
    a: &SparseMatrix,
    b: &DenseVector,
    x0: &DenseVector,
    q: &DenseBlock,
    m: &Preconditioner,
    config: &SolverConfig,
    obs: &mut dyn SolveObserver,
) -> Result<Solution, SolverError> {
    config.validate()?;
    validate_system(a, b, x0)?;
    validate_shadow(a, q, config.n)?;
    if let Some(dim) = m.dim() {
        if dim != a.nrows() {
            return Err(SolverError::DimensionMismatch {
                context: "preconditioner",
                left: dim,
                right: a.nrows(),
            });
        }
    }

    let n = config.n;
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

    // F = M^{-H} A^H [q_1 ... q_{n-1}]
    let f_cols: Vec<DenseVector> = (0..n.saturating_sub(1))
        .map(|i| {
            let ah_q = a.matvec_adjoint(q.col(i), &mut ctrs);
            m.apply_inv_adjoint(&ah_q, &mut ctrs)
        })
        .collect();

    let mut g_cols: Vec<DenseVector> = vec![DenseVector::zeros(nrows); n];
    let mut w_cols: Vec<DenseVector> = vec![DenseVector::zeros(nrows); n];
    let mut c = vec![Scalar::new(0.0, 0.0); n];
    g_cols[0] = r.clone();
    let mut g_h = m.apply_inv(&r, &mut ctrs);
    w_cols[0] = a.matvec(&g_h, &mut ctrs);
    c[0] = dot_conj(q.col(0), &w_cols[0], &mut ctrs);
    obs.on_direction(0, &g_cols[0], &w_cols[0]);
    let mut e = dot_conj(q.col(0), &r, &mut ctrs);
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

    let mut iter = 0usize;
    let mut j = 0usize;
    let flag = 'cycles: loop {
        for i in 1..n {
            let k = j * n + i;
            let alpha = e / c[i - 1];
            axpy_into(alpha, &g_h, &mut x, &mut ctrs);
            axpy_into(-alpha, &w_cols[i - 1], &mut r, &mut ctrs);
            let err = norm2(&r) / bnrm;
            history.push(err);
            iter = k;
            obs.on_iterate(k, &x, &r);
            if err < config.tol {
                break 'cycles TerminationFlag::Converged;
            }
            if iter >= config.max_it {
                break 'cycles TerminationFlag::MaxIterations;
            }

            e = dot_conj(q.col(i), &r, &mut ctrs);
            if j >= 1 {
                // z_w builds in the w column being retired, g in its pair
                let beta0 = -e / c[i];
                obs.on_beta_tilde(k, (j - 1) * n + i, beta0);
                axpy_onto(&mut w_cols[i], &r, beta0, &mut ctrs);
                scale_into(beta0, &mut g_cols[i]);
                for s in (i + 1)..n {
                    let beta = -dot_conj(q.col(s), &w_cols[i], &mut ctrs) / c[s];
                    obs.on_beta_tilde(k, (j - 1) * n + s, beta);
                    axpy_cols(&mut w_cols, beta, s, i, &mut ctrs);
                    axpy_cols(&mut g_cols, beta, s, i, &mut ctrs);
                }
                scaled_sub(
                    &w_cols[i],
                    Scalar::new(1.0, 0.0) / omega,
                    &mut g_cols[i],
                    &mut ctrs,
                );
                for s in 0..i {
                    let beta = -dot_conj(&f_cols[s], &g_cols[i], &mut ctrs) / c[s];
                    axpy_cols(&mut g_cols, beta, s, i, &mut ctrs);
                }
            } else {
                // first cycle: no previous directions, the F sweep alone
                let beta = -dot_conj(&f_cols[0], &r, &mut ctrs) / c[0];
                g_cols[i] = axpy(beta, &g_cols[0], &r, &mut ctrs);
                for s in 1..i {
                    let beta = -dot_conj(&f_cols[s], &g_cols[i], &mut ctrs) / c[s];
                    axpy_cols(&mut g_cols, beta, s, i, &mut ctrs);
                }
            }
            g_h = m.apply_inv(&g_cols[i], &mut ctrs);
            w_cols[i] = a.matvec(&g_h, &mut ctrs);
            c[i] = dot_conj(q.col(i), &w_cols[i], &mut ctrs);
            obs.on_direction(k, &g_cols[i], &w_cols[i]);
            if c_is_degenerate(c[i], q.col(i), &w_cols[i], config.breakdown_eps) {
                break 'cycles TerminationFlag::Breakdown(BreakdownSite::CDivisor);
            }
        }

        // end of cycle: k = jn + n
        let k = j * n + n;
        let alpha = e / c[n - 1];
        axpy_into(alpha, &g_h, &mut x, &mut ctrs);
        axpy_into(-alpha, &w_cols[n - 1], &mut r, &mut ctrs); // r now holds u_k
        obs.on_u(k, &r);
        let err_u = norm2(&r) / bnrm;
        if err_u < config.tol {
            // u ~ 0: x is already exact, stop before the omega step
            history.push(err_u);
            iter = k;
            obs.on_iterate(k, &x, &r);
            break 'cycles TerminationFlag::Converged;
        }
        g_h = m.apply_inv(&r, &mut ctrs); // u_hat
        let z = a.matvec(&g_h, &mut ctrs); // A u_hat
        let Some(raw) = select_omega(&r, &z, config.kappa, &mut ctrs) else {
            break 'cycles TerminationFlag::Breakdown(BreakdownSite::OmegaDenominator);
        };
        omega = perturb_omega(raw, norm2(&r), norm2(&z), config.omega_perturb);
        omegas.push(omega);
        obs.on_omega(j + 1, omega);
        axpy_into(omega, &g_h, &mut x, &mut ctrs);
        axpy_into(-omega, &z, &mut r, &mut ctrs); // r = u - omega * A u_hat
        let err = norm2(&r) / bnrm;
        history.push(err);
        iter = k;
        obs.on_iterate(k, &x, &r);
        if err < config.tol {
            break 'cycles TerminationFlag::Converged;
        }
        if iter >= config.max_it {
            break 'cycles TerminationFlag::MaxIterations;
        }

        // close the cycle: rebuild slot 0 for the next one
        e = dot_conj(q.col(0), &r, &mut ctrs);
        let beta0 = -e / c[0];
        obs.on_beta_tilde(k, j * n, beta0);
        axpy_onto(&mut w_cols[0], &r, beta0, &mut ctrs);
        scale_into(beta0, &mut g_cols[0]);
        for s in 1..n {
            let beta = -dot_conj(q.col(s), &w_cols[0], &mut ctrs) / c[s];
            obs.on_beta_tilde(k, j * n + s, beta);
            axpy_cols(&mut w_cols, beta, s, 0, &mut ctrs);
            axpy_cols(&mut g_cols, beta, s, 0, &mut ctrs);
        }
        scaled_sub(
            &w_cols[0],
            Scalar::new(1.0, 0.0) / omega,
            &mut g_cols[0],
            &mut ctrs,
        );
        g_h = m.apply_inv(&g_cols[0], &mut ctrs);
        w_cols[0] = a.matvec(&g_h, &mut ctrs);
        c[0] = dot_conj(q.col(0), &w_cols[0], &mut ctrs);
        obs.on_direction(k, &g_cols[0], &w_cols[0]);
        if c_is_degenerate(c[0], q.col(0), &w_cols[0], config.breakdown_eps) {
            break 'cycles TerminationFlag::Breakdown(BreakdownSite::CDivisor);
        }
        j += 1;
    };

    let report = ConvergenceReport::assemble(
        a, b, &x, &r, bnrm, flag, iter, history, omegas, ctrs, setup,
    );
    Ok(Solution { x, report })
}
