use super::{OpCounters, Scalar};
use serde::{Deserialize, Serialize};
use std::ops::{Index, IndexMut};

/// Dense column vector over [`Scalar`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseVector {
    data: Vec<Scalar>,
}

impl DenseVector {
    pub fn zeros(len: usize) -> Self {
        DenseVector {
            data: vec![Scalar::new(0.0, 0.0); len],
        }
    }

    pub fn ones(len: usize) -> Self {
        DenseVector {
            data: vec![Scalar::new(1.0, 0.0); len],
        }
    }

    pub fn from_complex(data: Vec<Scalar>) -> Self {
        DenseVector { data }
    }

    pub fn from_real(values: &[f64]) -> Self {
        DenseVector {
            data: values.iter().map(|&v| Scalar::new(v, 0.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Scalar] {
        &mut self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.data.iter()
    }

    /// True iff every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

impl Index<usize> for DenseVector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.data[i]
    }
}

impl IndexMut<usize> for DenseVector {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.data[i]
    }
}

/// Euclidean norm. Not counted as a dot product: the cost model tracks
/// convergence-check norms separately from algorithmic inner products.
pub fn norm2(v: &DenseVector) -> f64 {
    v.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Conjugated inner product `sum_i conj(u_i) v_i`.
pub fn dot_conj(u: &DenseVector, v: &DenseVector, counters: &mut OpCounters) -> Scalar {
    assert_eq!(u.len(), v.len(), "dot_conj: length mismatch");
    counters.dot_products += 1;
    let mut acc = Scalar::new(0.0, 0.0);
    for (a, b) in u.data.iter().zip(v.data.iter()) {
        acc += a.conj() * b;
    }
    acc
}

/// `y + alpha * x`, allocating.
pub fn axpy(
    alpha: Scalar,
    x: &DenseVector,
    y: &DenseVector,
    counters: &mut OpCounters,
) -> DenseVector {
    assert_eq!(x.len(), y.len(), "axpy: length mismatch");
    counters.saxpys += 1;
    DenseVector {
        data: x
            .data
            .iter()
            .zip(y.data.iter())
            .map(|(xi, yi)| yi + alpha * xi)
            .collect(),
    }
}

/// `y += alpha * x`, in place.
pub fn axpy_into(alpha: Scalar, x: &DenseVector, y: &mut DenseVector, counters: &mut OpCounters) {
    assert_eq!(x.len(), y.len(), "axpy_into: length mismatch");
    counters.saxpys += 1;
    for (yi, xi) in y.data.iter_mut().zip(x.data.iter()) {
        *yi += alpha * xi;
    }
}

/// `y = base + alpha * y`, in place; the circular-storage refresh used when
/// a retired column slot is rebuilt from the current residual.
pub fn axpy_onto(
    y: &mut DenseVector,
    base: &DenseVector,
    alpha: Scalar,
    counters: &mut OpCounters,
) {
    assert_eq!(base.len(), y.len(), "axpy_onto: length mismatch");
    counters.saxpys += 1;
    for (yi, bi) in y.data.iter_mut().zip(base.data.iter()) {
        *yi = bi + alpha * *yi;
    }
}

/// `g = z - scale * g`, in place.
pub fn scaled_sub(z: &DenseVector, scale: Scalar, g: &mut DenseVector, counters: &mut OpCounters) {
    assert_eq!(z.len(), g.len(), "scaled_sub: length mismatch");
    counters.saxpys += 1;
    for (gi, zi) in g.data.iter_mut().zip(z.data.iter()) {
        *gi = zi - scale * *gi;
    }
}

/// `v *= alpha`. A pure scaling, tracked outside the saxpy count.
pub fn scale_into(alpha: Scalar, v: &mut DenseVector) {
    for vi in v.data.iter_mut() {
        *vi *= alpha;
    }
}

/// `a - b`, allocating and uncounted (setup and measurement use only).
pub fn vec_sub(a: &DenseVector, b: &DenseVector) -> DenseVector {
    assert_eq!(a.len(), b.len(), "vec_sub: length mismatch");
    DenseVector {
        data: a
            .data
            .iter()
            .zip(b.data.iter())
            .map(|(ai, bi)| ai - bi)
            .collect(),
    }
}

/// Column-major collection of equally sized dense columns.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseBlock {
    nrows: usize,
    cols: Vec<DenseVector>,
}

impl DenseBlock {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseBlock {
            nrows,
            cols: (0..ncols).map(|_| DenseVector::zeros(nrows)).collect(),
        }
    }

    /// Builds a block from columns, which must all share one length.
    pub fn from_columns(cols: Vec<DenseVector>) -> Result<Self, super::LinalgError> {
        let nrows = cols.first().map(|c| c.len()).unwrap_or(0);
        for c in &cols {
            if c.len() != nrows {
                return Err(super::LinalgError::DimensionMismatch {
                    context: "DenseBlock::from_columns",
                    left: nrows,
                    right: c.len(),
                });
            }
        }
        Ok(DenseBlock { nrows, cols })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &DenseVector {
        &self.cols[j]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut DenseVector {
        &mut self.cols[j]
    }

    pub fn columns(&self) -> std::slice::Iter<'_, DenseVector> {
        self.cols.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;

    fn e(i: usize, n: usize) -> DenseVector {
        let mut v = DenseVector::zeros(n);
        v[i] = cx(1.0, 0.0);
        v
    }

    #[test]
    fn dot_conj_examples() {
        let mut c = OpCounters::default();
        assert_eq!(dot_conj(&e(0, 2), &e(0, 2), &mut c), cx(1.0, 0.0));
        assert_eq!(dot_conj(&e(0, 2), &e(1, 2), &mut c), cx(0.0, 0.0));
        // conj(i) * i = 1
        let vi = DenseVector::from_complex(vec![cx(0.0, 1.0), cx(0.0, 0.0)]);
        assert_eq!(dot_conj(&vi, &vi, &mut c), cx(1.0, 0.0));
        assert_eq!(c.dot_products, 3);
    }

    #[test]
    fn axpy_examples() {
        let mut c = OpCounters::default();
        let x = DenseVector::from_real(&[1.0, 2.0]);
        let y = DenseVector::from_real(&[3.0, 4.0]);
        assert_eq!(axpy(cx(0.0, 0.0), &x, &y, &mut c), y);
        let zero = DenseVector::zeros(2);
        assert_eq!(axpy(cx(1.0, 0.0), &x, &zero, &mut c), x);
        assert_eq!(c.saxpys, 2);
    }

    #[test]
    fn norm_is_pythagorean() {
        let v = DenseVector::from_real(&[3.0, 4.0]);
        assert_eq!(norm2(&v), 5.0);
        assert!(norm2(&DenseVector::zeros(4)) == 0.0);
    }

    #[test]
    fn in_place_kernels_match_definitions() {
        let mut c = OpCounters::default();
        let base = DenseVector::from_real(&[1.0, -1.0]);
        let mut y = DenseVector::from_real(&[2.0, 3.0]);
        axpy_onto(&mut y, &base, cx(2.0, 0.0), &mut c);
        assert_eq!(y, DenseVector::from_real(&[5.0, 5.0]));

        let z = DenseVector::from_real(&[1.0, 1.0]);
        let mut g = DenseVector::from_real(&[2.0, 4.0]);
        scaled_sub(&z, cx(0.5, 0.0), &mut g, &mut c);
        assert_eq!(g, DenseVector::from_real(&[0.0, -1.0]));

        scale_into(cx(-1.0, 0.0), &mut g);
        assert_eq!(g, DenseVector::from_real(&[0.0, 1.0]));
        // scaling is not a saxpy
        assert_eq!(c.saxpys, 2);
    }

    #[test]
    fn block_rejects_ragged_columns() {
        let cols = vec![DenseVector::zeros(3), DenseVector::zeros(2)];
        assert!(DenseBlock::from_columns(cols).is_err());
    }
}
