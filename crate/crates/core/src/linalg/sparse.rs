use super::{DenseVector, LinalgError, OpCounters, Scalar};

/// Compressed-sparse-row matrix over [`Scalar`].
///
/// Column indices are sorted within each row and duplicates have been
/// summed; explicitly stored zeros are kept, so `nnz` reflects stored
/// entries rather than structurally nonzero ones. The adjoint product is
/// computed by scattering over the rows of `A`, so `A^H` is never
/// materialized.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Scalar>,
}

impl SparseMatrix {
    /// Builds from raw CSR arrays, validating the structural invariants:
    /// monotone row pointers, in-range sorted column indices, matching
    /// lengths.
    pub fn from_csr(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<Scalar>,
    ) -> Result<Self, LinalgError> {
        if row_ptr.len() != nrows + 1 {
            return Err(LinalgError::InvalidStructure(format!(
                "row_ptr has length {}, expected {}",
                row_ptr.len(),
                nrows + 1
            )));
        }
        if row_ptr[0] != 0 || *row_ptr.last().unwrap() != col_idx.len() {
            return Err(LinalgError::InvalidStructure(
                "row_ptr must start at 0 and end at nnz".into(),
            ));
        }
        if col_idx.len() != values.len() {
            return Err(LinalgError::InvalidStructure(
                "col_idx and values lengths differ".into(),
            ));
        }
        for i in 0..nrows {
            if row_ptr[i] > row_ptr[i + 1] {
                return Err(LinalgError::InvalidStructure(format!(
                    "row_ptr not monotone at row {i}"
                )));
            }
            let row = &col_idx[row_ptr[i]..row_ptr[i + 1]];
            for w in row.windows(2) {
                if w[0] >= w[1] {
                    return Err(LinalgError::InvalidStructure(format!(
                        "row {i}: column indices not strictly increasing"
                    )));
                }
            }
            if let Some(&last) = row.last() {
                if last >= ncols {
                    return Err(LinalgError::InvalidStructure(format!(
                        "row {i}: column index {last} out of range (ncols = {ncols})"
                    )));
                }
            }
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Builds from (row, col, value) triplets. Duplicate coordinates are
    /// summed; explicit zeros are kept as stored entries.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: &[(usize, usize, Scalar)],
    ) -> Result<Self, LinalgError> {
        for &(i, j, _) in entries {
            if i >= nrows || j >= ncols {
                return Err(LinalgError::InvalidStructure(format!(
                    "entry ({i}, {j}) out of range for {nrows}x{ncols}"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, Scalar)> = entries.to_vec();
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut row_counts = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<Scalar> = Vec::with_capacity(sorted.len());
        let mut prev: Option<(usize, usize)> = None;
        for &(i, j, v) in &sorted {
            if prev == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_counts[i + 1] += 1;
                prev = Some((i, j));
            }
        }
        for i in 0..nrows {
            row_counts[i + 1] += row_counts[i];
        }
        SparseMatrix::from_csr(nrows, ncols, row_counts, col_idx, values)
    }

    pub fn identity(n: usize) -> Self {
        let row_ptr: Vec<usize> = (0..=n).collect();
        let col_idx: Vec<usize> = (0..n).collect();
        let values = vec![Scalar::new(1.0, 0.0); n];
        SparseMatrix {
            nrows: n,
            ncols: n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn from_diag(diag: &[Scalar]) -> Self {
        let n = diag.len();
        let row_ptr: Vec<usize> = (0..=n).collect();
        let col_idx: Vec<usize> = (0..n).collect();
        SparseMatrix {
            nrows: n,
            ncols: n,
            row_ptr,
            col_idx,
            values: diag.to_vec(),
        }
    }

    /// Dense row-major constructor; zero entries are not stored.
    pub fn from_dense(rows: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(LinalgError::InvalidStructure(format!(
                    "dense row {i} has length {}, expected {ncols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != Scalar::new(0.0, 0.0) {
                    triplets.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(nrows, ncols, &triplets)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Stored-entry count (explicit zeros included).
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Sorted `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Scalar)> + '_ {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        self.col_idx[lo..hi]
            .iter()
            .zip(self.values[lo..hi].iter())
            .map(|(&j, &v)| (j, v))
    }

    /// All stored entries as triplets, in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Scalar)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    /// `A v`.
    pub fn matvec(&self, v: &DenseVector, counters: &mut OpCounters) -> DenseVector {
        assert_eq!(
            self.ncols,
            v.len(),
            "matvec: A is {}x{} but v has length {}",
            self.nrows,
            self.ncols,
            v.len()
        );
        counters.matvec_a += 1;
        let mut y = DenseVector::zeros(self.nrows);
        for i in 0..self.nrows {
            let mut acc = Scalar::new(0.0, 0.0);
            for (j, a) in self.row(i) {
                acc += a * v[j];
            }
            y[i] = acc;
        }
        y
    }

    /// `A^H v`, computed as a scatter over the rows of `A`.
    pub fn matvec_adjoint(&self, v: &DenseVector, counters: &mut OpCounters) -> DenseVector {
        assert_eq!(
            self.nrows,
            v.len(),
            "matvec_adjoint: A is {}x{} but v has length {}",
            self.nrows,
            self.ncols,
            v.len()
        );
        counters.matvec_ah += 1;
        let mut y = DenseVector::zeros(self.ncols);
        for i in 0..self.nrows {
            let vi = v[i];
            for (j, a) in self.row(i) {
                y[j] += a.conj() * vi;
            }
        }
        y
    }

    /// Dense copy, for small oracles and debugging.
    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::new(0.0, 0.0); self.ncols]; self.nrows];
        for (i, j, v) in self.triplets() {
            out[i][j] += v;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cx, dot_conj, norm2, vec_sub};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn dense_matvec(a: &[Vec<Scalar>], v: &DenseVector) -> DenseVector {
        let mut y = DenseVector::zeros(a.len());
        for (i, row) in a.iter().enumerate() {
            for (j, &aij) in row.iter().enumerate() {
                y[i] += aij * v[j];
            }
        }
        y
    }

    fn dense_adjoint_matvec(a: &[Vec<Scalar>], v: &DenseVector) -> DenseVector {
        let n = a.first().map(|r| r.len()).unwrap_or(0);
        let mut y = DenseVector::zeros(n);
        for (i, row) in a.iter().enumerate() {
            for (j, &aij) in row.iter().enumerate() {
                y[j] += aij.conj() * v[i];
            }
        }
        y
    }

    fn random_dense(n: usize, rng: &mut StdRng) -> Vec<Vec<Scalar>> {
        (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect()
            })
            .collect()
    }

    fn random_vec(n: usize, rng: &mut StdRng) -> DenseVector {
        DenseVector::from_complex(
            (0..n)
                .map(|_| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
    }

    #[test]
    fn matvec_identity_and_diagonal() {
        let mut c = OpCounters::default();
        let v = DenseVector::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(SparseMatrix::identity(3).matvec(&v, &mut c), v);

        let d = SparseMatrix::from_diag(&[cx(2.0, 0.0), cx(3.0, 0.0)]);
        let w = d.matvec(&DenseVector::from_real(&[1.0, 1.0]), &mut c);
        assert_eq!(w, DenseVector::from_real(&[2.0, 3.0]));
        assert_eq!(c.matvec_a, 2);
    }

    #[test]
    fn matvec_matches_dense_oracle() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let dense = random_dense(5, &mut rng);
            let a = SparseMatrix::from_dense(&dense).unwrap();
            let v = random_vec(5, &mut rng);
            let mut c = OpCounters::default();
            let got = a.matvec(&v, &mut c);
            let want = dense_matvec(&dense, &v);
            let err = norm2(&vec_sub(&got, &want)) / norm2(&want).max(1e-300);
            assert!(err < 1e-13, "relative error {err}");
        }
    }

    #[test]
    fn adjoint_matches_dense_oracle() {
        let mut c = OpCounters::default();
        let v = DenseVector::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(SparseMatrix::identity(3).matvec_adjoint(&v, &mut c), v);

        let mut rng = StdRng::seed_from_u64(12);
        // real matrix: adjoint is the plain transpose
        let dense: Vec<Vec<Scalar>> = (0..4)
            .map(|_| (0..4).map(|_| cx(rng.random_range(-1.0..1.0), 0.0)).collect())
            .collect();
        let a = SparseMatrix::from_dense(&dense).unwrap();
        let v = DenseVector::from_real(&[1.0, -2.0, 0.5, 3.0]);
        let got = a.matvec_adjoint(&v, &mut c);
        let want = dense_adjoint_matvec(&dense, &v);
        assert!(norm2(&vec_sub(&got, &want)) < 1e-13);
    }

    #[test]
    fn adjoint_conjugates_complex_entries() {
        // A = [[1, i], [0, 1]]; A^H e1 = [conj(1), conj(i) applied from row 1]
        let a = SparseMatrix::from_triplets(
            2,
            2,
            &[
                (0, 0, cx(1.0, 0.0)),
                (0, 1, cx(0.0, 1.0)),
                (1, 1, cx(1.0, 0.0)),
            ],
        )
        .unwrap();
        let e1 = DenseVector::from_real(&[1.0, 0.0]);
        let mut c = OpCounters::default();
        let got = a.matvec_adjoint(&e1, &mut c);
        let dense = a.to_dense();
        let want = dense_adjoint_matvec(&dense, &e1);
        assert_eq!(got, want);
        assert_eq!(got[0], cx(1.0, 0.0));
        assert_eq!(got[1], cx(0.0, -1.0));
    }

    #[test]
    fn adjoint_identity_under_inner_product() {
        // <A^H u, v> = <u, A v>
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..20 {
            let dense = random_dense(6, &mut rng);
            let a = SparseMatrix::from_dense(&dense).unwrap();
            let u = random_vec(6, &mut rng);
            let v = random_vec(6, &mut rng);
            let mut c = OpCounters::default();
            let lhs = dot_conj(&a.matvec_adjoint(&u, &mut c), &v, &mut c);
            let rhs = dot_conj(&u, &a.matvec(&v, &mut c), &mut c);
            assert!(
                (lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0),
                "lhs {lhs}, rhs {rhs}"
            );
        }
    }

    #[test]
    fn triplets_sum_duplicates_and_keep_zeros() {
        let a = SparseMatrix::from_triplets(
            2,
            2,
            &[
                (0, 0, cx(1.0, 0.0)),
                (0, 0, cx(2.0, 0.0)),
                (1, 0, cx(0.0, 0.0)), // explicit zero stays stored
            ],
        )
        .unwrap();
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.to_dense()[0][0], cx(3.0, 0.0));
        assert_eq!(a.row(1).next(), Some((0, cx(0.0, 0.0))));
    }

    #[test]
    fn from_csr_validates() {
        assert!(SparseMatrix::from_csr(2, 2, vec![0, 1], vec![0], vec![cx(1.0, 0.0)]).is_err());
        assert!(SparseMatrix::from_csr(
            1,
            1,
            vec![0, 1],
            vec![5],
            vec![cx(1.0, 0.0)]
        )
        .is_err());
        assert!(SparseMatrix::from_csr(
            1,
            2,
            vec![0, 2],
            vec![1, 0],
            vec![cx(1.0, 0.0), cx(2.0, 0.0)]
        )
        .is_err());
    }
}
