//! Shadow-vector block construction and left Lanczos vectors.
//!
//! The experimental recipe takes `Q = [r_0, sign-of-normal columns]`: the
//! first shadow vector is the initial residual itself (unnormalized), the
//! remaining `n-1` columns are Rademacher vectors obtained as signs of
//! seeded standard normal draws, with `sign(0)` mapped to `+1`. The stream
//! is a ChaCha8 generator seeded directly from the spec's 64-bit seed, so a
//! block is bit-reproducible across platforms for a fixed seed.
//!
//! The left Lanczos vectors `p_k = (A^H)^{g_n(k)} q_{r_n(k)}` drive the
//! ML(n)BiCG recursion; [`LeftLanczosSequence`] produces them incrementally,
//! keeping one adjoint product per step by advancing the column that is
//! `n` indices behind.

use crate::indexing;
use crate::linalg::{DenseBlock, DenseVector, OpCounters, Scalar, SparseMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

/// How the shadow block is produced.
#[derive(Clone, Debug)]
pub enum ShadowMode {
    /// `[r_0, sign(randn(N, n-1))]` — the default recipe.
    Rademacher,
    /// Use the given columns verbatim (reproduction studies).
    ProvidedColumns(DenseBlock),
}

/// Specification for building the shadow block `Q`.
#[derive(Clone, Debug)]
pub struct ShadowSpec {
    /// Number of shadow vectors.
    pub n: usize,
    /// Seed for the Rademacher columns.
    pub seed: u64,
    pub mode: ShadowMode,
}

impl ShadowSpec {
    pub fn rademacher(n: usize, seed: u64) -> Self {
        ShadowSpec {
            n,
            seed,
            mode: ShadowMode::Rademacher,
        }
    }
}

#[derive(Debug, Error)]
pub enum ShadowError {
    #[error("initial residual is zero: the initial guess already solves the system")]
    ZeroInitialResidual,
    #[error("shadow spec requires n >= 1, got {0}")]
    InvalidN(usize),
    #[error("provided shadow block is {got_cols} columns of length {got_rows}, expected {want_cols} of length {want_rows}")]
    ProvidedShapeMismatch {
        got_rows: usize,
        got_cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
}

/// Builds the shadow block for an initial residual `r0`.
///
/// In Rademacher mode column 1 is `r0` itself and columns `2..=n` have all
/// entries in `{-1, +1}`, deterministic for a fixed seed.
pub fn build_shadow(r0: &DenseVector, spec: &ShadowSpec) -> Result<DenseBlock, ShadowError> {
    if spec.n == 0 {
        return Err(ShadowError::InvalidN(0));
    }
    if r0.is_zero() {
        return Err(ShadowError::ZeroInitialResidual);
    }
    match &spec.mode {
        ShadowMode::ProvidedColumns(block) => {
            if block.ncols() != spec.n || block.nrows() != r0.len() {
                return Err(ShadowError::ProvidedShapeMismatch {
                    got_rows: block.nrows(),
                    got_cols: block.ncols(),
                    want_rows: r0.len(),
                    want_cols: spec.n,
                });
            }
            Ok(block.clone())
        }
        ShadowMode::Rademacher => {
            let nrows = r0.len();
            let mut cols = Vec::with_capacity(spec.n);
            cols.push(r0.clone());
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            for _ in 1..spec.n {
                let mut col = DenseVector::zeros(nrows);
                for t in 0..nrows {
                    let draw: f64 = StandardNormal.sample(&mut rng);
                    let s = if draw < 0.0 { -1.0 } else { 1.0 };
                    col[t] = Scalar::new(s, 0.0);
                }
                cols.push(col);
            }
            Ok(DenseBlock::from_columns(cols).expect("columns share r0's length"))
        }
    }
}

/// `p_k = (A^H)^{g_n(k)} q_{r_n(k)}`, computed from scratch.
///
/// `n` is the number of columns of `q`. Intended for verification; the
/// solvers use [`LeftLanczosSequence`] which caches the previous power of
/// each column.
pub fn left_lanczos_vector(
    a: &SparseMatrix,
    q: &DenseBlock,
    k: usize,
    counters: &mut OpCounters,
) -> DenseVector {
    assert!(k >= 1, "left Lanczos vectors are indexed from 1");
    let n = q.ncols() as i64;
    let pair = indexing::IndexPair::of(n, k as i64);
    let mut p = q.col((pair.phase - 1) as usize).clone();
    for _ in 0..pair.cycle {
        p = a.matvec_adjoint(&p, counters);
    }
    p
}

/// Incremental generator of the `p_k` sequence.
///
/// Keeps the last `n + 1` vectors; `p_{k+1}` costs one adjoint product
/// (`p_{k+1} = A^H p_{k+1-n}`) once the first cycle of plain shadow columns
/// is exhausted.
pub struct LeftLanczosSequence<'a> {
    a: &'a SparseMatrix,
    q: &'a DenseBlock,
    ring: Vec<Option<DenseVector>>,
    produced: usize,
}

impl<'a> LeftLanczosSequence<'a> {
    pub fn new(a: &'a SparseMatrix, q: &'a DenseBlock) -> Self {
        let n = q.ncols();
        LeftLanczosSequence {
            a,
            q,
            ring: vec![None; n + 1],
            produced: 0,
        }
    }

    /// Produces `p_{k}` for the next `k` (starting at 1) and returns it.
    pub fn advance(&mut self, counters: &mut OpCounters) -> &DenseVector {
        let n = self.q.ncols();
        let k = self.produced + 1;
        let next = if k <= n {
            self.q.col(k - 1).clone()
        } else {
            let prev = self.ring[(k - n) % (n + 1)]
                .as_ref()
                .expect("p_{k-n} is retained in the ring");
            self.a.matvec_adjoint(prev, counters)
        };
        let slot = k % (n + 1);
        self.ring[slot] = Some(next);
        self.produced = k;
        self.ring[slot].as_ref().unwrap()
    }

    /// The retained vector `p_m`; `m` must lie within the last `n + 1`
    /// produced indices.
    pub fn p(&self, m: usize) -> &DenseVector {
        let n = self.q.ncols();
        assert!(
            m >= 1 && m <= self.produced && self.produced - m <= n,
            "p_{m} is outside the retained window (produced {})",
            self.produced
        );
        self.ring[m % (n + 1)].as_ref().unwrap()
    }
}
