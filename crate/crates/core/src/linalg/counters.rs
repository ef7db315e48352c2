use serde::{Deserialize, Serialize};

/// Operation counters for one solve context.
///
/// The counts follow the accounting of the solvers' per-iteration cost
/// model: `dot_products` covers conjugated inner products `u^H v`
/// (including `z^H z` inside the omega selection) but not the residual-norm
/// convergence checks, and `saxpys` covers `y + alpha*x` updates but not
/// pure scalings `alpha*v`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    /// Products `A v`.
    pub matvec_a: u64,
    /// Adjoint products `A^H v`.
    pub matvec_ah: u64,
    /// Preconditioner applications `M^{-1} v` or `M^{-H} v`.
    pub precond_solves: u64,
    /// Conjugated dot products `u^H v`.
    pub dot_products: u64,
    /// Vector updates of the form `y + alpha*x`.
    pub saxpys: u64,
}

impl OpCounters {
    /// Counts accumulated since an earlier snapshot of the same context.
    ///
    /// Panics if `earlier` is not a prefix of `self` (counters are monotone
    /// within a solve).
    pub fn since(&self, earlier: &OpCounters) -> OpCounters {
        let sub = |a: u64, b: u64, what: &str| {
            a.checked_sub(b)
                .unwrap_or_else(|| panic!("counter {what} went backwards"))
        };
        OpCounters {
            matvec_a: sub(self.matvec_a, earlier.matvec_a, "matvec_a"),
            matvec_ah: sub(self.matvec_ah, earlier.matvec_ah, "matvec_ah"),
            precond_solves: sub(self.precond_solves, earlier.precond_solves, "precond_solves"),
            dot_products: sub(self.dot_products, earlier.dot_products, "dot_products"),
            saxpys: sub(self.saxpys, earlier.saxpys, "saxpys"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn since_subtracts_fieldwise() {
        let a = OpCounters {
            matvec_a: 5,
            matvec_ah: 1,
            precond_solves: 4,
            dot_products: 10,
            saxpys: 7,
        };
        let b = OpCounters {
            matvec_a: 2,
            matvec_ah: 1,
            precond_solves: 1,
            dot_products: 3,
            saxpys: 0,
        };
        let d = a.since(&b);
        assert_eq!(d.matvec_a, 3);
        assert_eq!(d.matvec_ah, 0);
        assert_eq!(d.precond_solves, 3);
        assert_eq!(d.dot_products, 7);
        assert_eq!(d.saxpys, 7);
    }

    #[test]
    #[should_panic(expected = "went backwards")]
    fn since_rejects_non_monotone() {
        let a = OpCounters::default();
        let b = OpCounters {
            matvec_a: 1,
            ..OpCounters::default()
        };
        let _ = a.since(&b);
    }
}
