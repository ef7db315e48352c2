//! ML(n)BiCG: the multiple-starting BiCG-like ancestor.
//!
//! A band Lanczos process with `n` left starting vectors (the shadow block)
//! and one right starting vector. The left space is spanned by
//! `p_k = (A^H)^{g_n(k)} q_{r_n(k)}`, produced incrementally; the right
//! residuals and directions satisfy
//!
//! ```text
//! alpha_k = p_k^H r_{k-1} / p_k^H A g_{k-1}
//! g_k     = r_k + sum_{s = max(k-n,0)}^{k-1} beta_s g_s
//! ```
//!
//! with the `beta` numerators accumulated through `A r_k + sum beta A g_s`
//! so each coefficient costs one inner product. The last `n` direction
//! pairs `(g_s, A g_s)` and alpha denominators are kept in circular
//! storage. This solver exists as the algebraic reference for the
//! stabilized variants; it applies `A^H` once per iteration and is not
//! meant to win benchmarks.

use super::{
    rhs_norm, validate_shadow, validate_system, BreakdownSite, ConvergenceReport, NoopObserver,
    Solution, SolveObserver, SolverConfig, SolverError, TerminationFlag,
};
use crate::linalg::{
    axpy_into, dot_conj, norm2, vec_sub, DenseBlock, DenseVector, OpCounters, Scalar, SparseMatrix,
};
use crate::shadow::LeftLanczosSequence;

/// Solves `A x = b` with the shadow block `q`.
pub fn solve_ml_bicg(
    a: &SparseMatrix,
    b: &DenseVector,
    x0: &DenseVector,
    q: &DenseBlock,
    config: &SolverConfig,
) -> Result<Solution, SolverError> {
    solve_ml_bicg_observed(a, b, x0, q, config, &mut NoopObserver)
}

/// [`solve_ml_bicg`] with instrumentation hooks.
pub fn solve_ml_bicg_observed(
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

    let mut p_seq = LeftLanczosSequence::new(a, q);
    p_seq.advance(&mut ctrs); // p_1 = q_1

    // circular windows over the last n direction pairs and alpha divisors
    let mut g_ring: Vec<DenseVector> = vec![DenseVector::zeros(a.nrows()); n];
    let mut ag_ring: Vec<DenseVector> = vec![DenseVector::zeros(a.nrows()); n];
    let mut d_ring = vec![Scalar::new(0.0, 0.0); n];
    g_ring[0] = r.clone();
    ag_ring[0] = a.matvec(&r, &mut ctrs);
    obs.on_direction(0, &g_ring[0], &ag_ring[0]);
    let setup = ctrs;

    let mut iterations = 0usize;
    let mut flag = TerminationFlag::MaxIterations;
    for k in 1..=config.max_it {
        let prev = (k - 1) % n;
        let denom = dot_conj(p_seq.p(k), &ag_ring[prev], &mut ctrs);
        if denom.norm()
            <= config.breakdown_eps * norm2(p_seq.p(k)) * norm2(&ag_ring[prev])
        {
            flag = TerminationFlag::Breakdown(BreakdownSite::PAg);
            break;
        }
        d_ring[prev] = denom;
        let alpha = dot_conj(p_seq.p(k), &r, &mut ctrs) / denom;
        axpy_into(alpha, &g_ring[prev], &mut x, &mut ctrs);
        axpy_into(-alpha, &ag_ring[prev], &mut r, &mut ctrs);
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

        // g_k = r_k + sum beta_s g_s; v tracks A applied to the partial sum
        let mut v = a.matvec(&r, &mut ctrs);
        let mut gk = r.clone();
        let s_lo = k.saturating_sub(n);
        for s in s_lo..k {
            let slot = s % n;
            let beta = -dot_conj(p_seq.p(s + 1), &v, &mut ctrs) / d_ring[slot];
            axpy_into(beta, &ag_ring[slot], &mut v, &mut ctrs);
            axpy_into(beta, &g_ring[slot], &mut gk, &mut ctrs);
        }
        let slot = k % n;
        ag_ring[slot] = a.matvec(&gk, &mut ctrs);
        g_ring[slot] = gk;
        obs.on_direction(k, &g_ring[slot], &ag_ring[slot]);
        p_seq.advance(&mut ctrs); // p_{k+1}
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
