//! Cycle/phase index functions.
//!
//! An iteration counter `k` decomposes as `k = j*n + i` with `1 <= i <= n`.
//! `g(n, k)` recovers the cycle `j` and `r(n, k)` the phase `i`. Both are
//! defined for every integer `k`, which requires flooring division (toward
//! minus infinity) rather than Rust's truncating `/` so that the identity
//! `k = n*g(n,k) + r(n,k)` also holds for `k <= 0`.

/// Cycle/phase coordinates of a flat iteration counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexPair {
    /// The cycle `j = g_n(k)`.
    pub cycle: i64,
    /// The phase `i = r_n(k)`, always in `1..=n`.
    pub phase: i64,
}

impl IndexPair {
    /// Decomposes `k` as `k = n*cycle + phase` with `1 <= phase <= n`.
    ///
    /// Panics if `n <= 0`.
    pub fn of(n: i64, k: i64) -> Self {
        IndexPair {
            cycle: g(n, k),
            phase: r(n, k),
        }
    }
}

/// `g_n(k) = floor((k - 1) / n)`.
///
/// Panics if `n <= 0`.
pub fn g(n: i64, k: i64) -> i64 {
    assert!(n > 0, "index function g requires n >= 1, got {n}");
    (k - 1).div_euclid(n)
}

/// `r_n(k) = k - n*g_n(k)`, with range `1..=n`.
///
/// Panics if `n <= 0`.
pub fn r(n: i64, k: i64) -> i64 {
    k - n * g(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_decomposition() {
        // k = j*n + i with j = 1, i = 1
        assert_eq!(g(4, 5), 1);
        assert_eq!(r(4, 5), 1);
    }

    #[test]
    fn small_cases() {
        assert_eq!(g(3, 1), 0);
        assert_eq!(r(3, 3), 3);
    }

    #[test]
    fn negative_k_floors_toward_minus_infinity() {
        // floor((-2 - 1)/3) = -1, not 0 as truncation would give
        assert_eq!(g(3, -2), -1);
        assert_eq!(r(3, -2), 1);
    }

    #[test]
    fn decomposition_identity_and_range() {
        for n in 1..=64i64 {
            for k in -1000..=1000i64 {
                let pair = IndexPair::of(n, k);
                assert_eq!(k, n * pair.cycle + pair.phase, "n={n} k={k}");
                assert!(pair.phase >= 1 && pair.phase <= n, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn periodicity() {
        for n in 1..=16i64 {
            for k in -200..=200i64 {
                assert_eq!(g(n, k + n), g(n, k) + 1);
                assert_eq!(r(n, k + n), r(n, k));
            }
        }
    }

    #[test]
    #[should_panic(expected = "n >= 1")]
    fn rejects_nonpositive_n() {
        g(0, 5);
    }
}
