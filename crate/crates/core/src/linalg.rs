//! Dense matrices over any [`FieldOps`] field and Gaussian elimination.

use rand::Rng;
use thiserror::Error;

use crate::field::FieldOps;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn zeros<F: FieldOps<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: FieldOps<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = f.one();
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(
        rows: usize,
        cols: usize,
        mut sample: impl FnMut(&mut R) -> E,
        rng: &mut R,
    ) -> Self {
        let data = (0..rows * cols).map(|_| sample(rng)).collect();
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[E]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        self.row_iter().map(<[E]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<T: Clone + PartialEq>(&self, g: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// `self` left of `other`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix { rows: self.rows, cols, data }
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> Self {
        let rows: Vec<Vec<E>> = idx.into_iter().map(|i| self.row(i).to_vec()).collect();
        Self::from_rows(self.cols, rows)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let rows = self.row_iter().map(|r| idx.iter().map(|&j| r[j].clone()).collect()).collect();
        Self::from_rows(idx.len(), rows)
    }

    pub fn is_zero<F: FieldOps<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    pub fn mul<F: FieldOps<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (l, c) in self.row(i).iter().enumerate() {
                f.axpy(dst, c, other.row(l));
            }
        }
        out
    }

    /// Row vector times matrix, `v · self`.
    pub fn vec_mul<F: FieldOps<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let mut out = vec![f.zero(); self.cols];
        for (c, row) in v.iter().zip(self.row_iter()) {
            f.axpy(&mut out, c, row);
        }
        out
    }

    /// Matrix times column vector, `self · v`.
    pub fn mul_vec<F: FieldOps<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.row_iter()
            .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect()
    }

    /// Mutable access to two distinct rows.
    fn two_rows(&mut self, a: usize, b: usize) -> (&mut [E], &mut [E]) {
        debug_assert_ne!(a, b);
        let c = self.cols;
        if a < b {
            let (lo, hi) = self.data.split_at_mut(b * c);
            (&mut lo[a * c..(a + 1) * c], &mut hi[..c])
        } else {
            let (lo, hi) = self.data.split_at_mut(a * c);
            (&mut hi[..c], &mut lo[b * c..(b + 1) * c])
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            let (ra, rb) = self.two_rows(a, b);
            ra.swap_with_slice(rb);
        }
    }

    /// In-place reduced row-echelon form, looking for pivots only in the
    /// first `limit` columns. Returns the pivot columns.
    pub fn rref_in_place_upto<F: FieldOps<Elem = E>>(&mut self, f: &F, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..limit.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, j))) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self.get(r, j)).unwrap();
            f.scale(&mut self.row_mut(r)[j..], &inv);
            for i in 0..self.rows {
                if i == r || f.is_zero(self.get(i, j)) {
                    continue;
                }
                let c = f.neg(self.get(i, j));
                let (dst, src) = self.two_rows(i, r);
                f.axpy(&mut dst[j..], &c, &src[j..]);
            }
            pivots.push(j);
            r += 1;
        }
        pivots
    }

    pub fn rref_in_place<F: FieldOps<Elem = E>>(&mut self, f: &F) -> Vec<usize> {
        self.rref_in_place_upto(f, self.cols)
    }

    /// `(R, pivots)` with `R` the full RREF (zero rows kept at the bottom).
    pub fn rref<F: FieldOps<Elem = E>>(&self, f: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place(f);
        (m, piv)
    }

    pub fn rank<F: FieldOps<Elem = E>>(&self, f: &F) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the right null space `{x : self · x = 0}`, one vector per row.
    pub fn kernel<F: FieldOps<Elem = E>>(&self, f: &F) -> Self {
        let (r, pivots) = self.rref(f);
        kernel_from_rref(f, &r, &pivots)
    }

    /// Basis of the left null space `{y : y · self = 0}`, one vector per row.
    pub fn left_kernel<F: FieldOps<Elem = E>>(&self, f: &F) -> Self {
        let mut aug = self.hstack(&Self::identity(f, self.rows));
        let rank = aug.rref_in_place_upto(f, self.cols).len();
        let cols: Vec<usize> = (self.cols..self.cols + self.rows).collect();
        aug.select_rows(rank..self.rows).select_cols(&cols)
    }

    /// One solution of `self · x = b`.
    pub fn solve<F: FieldOps<Elem = E>>(&self, f: &F, b: &[E]) -> Result<Vec<E>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} rows vs right-hand side of length {}",
                self.rows,
                b.len()
            )));
        }
        let col = Self::from_vec(self.rows, 1, b.to_vec());
        let mut aug = self.hstack(&col);
        let pivots = aug.rref_in_place(f);
        if pivots.last() == Some(&self.cols) {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols).clone();
        }
        Ok(x)
    }

    /// One solution of `x · self = b`.
    pub fn solve_left<F: FieldOps<Elem = E>>(&self, f: &F, b: &[E]) -> Result<Vec<E>, LinalgError> {
        self.transpose().solve(f, b)
    }

    pub fn inverse<F: FieldOps<Elem = E>>(&self, f: &F) -> Result<Self, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = self.hstack(&Self::identity(f, n));
        if aug.rref_in_place_upto(f, n).len() < n {
            return Err(LinalgError::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(aug.select_cols(&cols))
    }
}

/// Kernel basis read off an RREF: for each free column `j`,
/// `e_j - sum_i R[i][j] e_{pivot_i}`.
pub(crate) fn kernel_from_rref<E: Clone + PartialEq, F: FieldOps<Elem = E>>(
    f: &F,
    r: &Matrix<E>,
    pivots: &[usize],
) -> Matrix<E> {
    let n = r.cols();
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let rows = (0..n)
        .filter(|&j| !is_pivot[j])
        .map(|j| {
            let mut v = vec![f.zero(); n];
            v[j] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, j));
            }
            v
        })
        .collect();
    Matrix::from_rows(n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BaseField, BinaryField, ExtField, FieldSpec};
    use proptest::prelude::*;

    fn gf8() -> BinaryField {
        BinaryField::new(FieldSpec::binary(3).unwrap()).unwrap()
    }

    #[test]
    fn identity_and_zero_ranks() {
        let f = BaseField::prime(5);
        let id = Matrix::identity(&f, 4);
        assert_eq!(id.rref(&f), (id.clone(), vec![0, 1, 2, 3]));
        assert_eq!(Matrix::zeros(&f, 3, 4).rank(&f), 0);
    }

    #[test]
    fn gf8_rank_one_example() {
        let f = gf8();
        let a = f.generator();
        let a2 = f.mul(&a, &a);
        // second row is a times the first
        assert_eq!(f.mul(&a, &a), a2);
        let m = Matrix::from_rows(2, vec![vec![f.one(), a], vec![a, a2]]);
        assert_eq!(m.rank(&f), 1);
    }

    #[test]
    fn inverse_and_solve() {
        let f = BaseField::prime(7);
        let m = Matrix::from_rows(3, vec![vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 4]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), Matrix::identity(&f, 3));
        let x = m.solve(&f, &[1, 2, 3]).unwrap();
        assert_eq!(m.mul_vec(&f, &x), vec![1, 2, 3]);
        let y = m.solve_left(&f, &[4, 5, 6]).unwrap();
        assert_eq!(m.vec_mul(&f, &y), vec![4, 5, 6]);
        let singular = Matrix::from_rows(2, vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.inverse(&f), Err(LinalgError::Singular));
        assert_eq!(singular.solve(&f, &[1, 0]), Err(LinalgError::Inconsistent));
    }

    fn small_matrix() -> impl Strategy<Value = Matrix<u32>> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u32..3, r * c).prop_map(move |d| Matrix::from_vec(r, c, d))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let f = BaseField::prime(3);
            let k = m.kernel(&f);
            prop_assert_eq!(m.rank(&f) + k.rows(), m.cols());
            for v in k.row_iter() {
                prop_assert!(m.mul_vec(&f, v).iter().all(|&x| x == 0));
            }
            let lk = m.left_kernel(&f);
            prop_assert_eq!(m.rank(&f) + lk.rows(), m.rows());
            for y in lk.row_iter() {
                prop_assert!(m.vec_mul(&f, y).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn rref_is_idempotent_and_row_equivalent(m in small_matrix()) {
            let f = BaseField::prime(3);
            let (r, piv) = m.rref(&f);
            prop_assert_eq!(r.rref(&f), (r.clone(), piv.clone()));
            prop_assert_eq!(m.vstack(&r).rank(&f), piv.len());
        }
    }
}
