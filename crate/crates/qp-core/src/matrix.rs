//! Dense matrices over an exact field, with the rank/kernel/solve kit used
//! everywhere else: Gaussian elimination with exact pivoting (first nonzero
//! entry), reduced column echelon forms as canonical subspace representatives,
//! and enumeration of all subspaces of `F_p^n` of a given dimension.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Field, Fp};

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        Matrix { field, rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: F, n_rows: usize, cols: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, n_rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), n_rows);
            for i in 0..n_rows {
                m.set(i, j, col[i].clone());
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &F::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<F::Elem> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let f = &self.field;
        Self::from_fn(f.clone(), self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                acc = f.add(&acc, &f.mul(self.at(i, k), other.at(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.at(i, k), &v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.field.clone(), self.rows, self.cols, |i, j| {
            self.field.add(self.at(i, j), other.at(i, j))
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.field.clone(), self.rows, self.cols, |i, j| {
            self.field.sub(self.at(i, j), other.at(i, j))
        })
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.field.clone(), self.rows, self.cols, |i, j| self.field.neg(self.at(i, j)))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::from_fn(self.field.clone(), self.rows, self.cols, |i, j| self.field.mul(self.at(i, j), c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.field.clone(), self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation `[self ; other]`.
    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.field.clone(), self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                other.at(i - self.rows, j).clone()
            }
        })
    }

    /// Copies `block` into `self` with upper-left corner at `(i0, j0)`.
    pub fn paste(&mut self, i0: usize, j0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(i0 + i, j0 + j, block.at(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(self.field.clone(), rows, cols, |i, j| self.at(i0 + i, j0 + j).clone())
    }

    /// Row-reduces in place; returns pivot columns.  `reduced` additionally
    /// clears entries above pivots and normalizes pivots to 1.
    fn row_reduce(&mut self, reduced: bool) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // first nonzero pivot in column c at row >= r
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.at(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let pivot_inv = f.inv(self.at(r, c)).expect("nonzero pivot");
            if reduced {
                for j in c..self.cols {
                    let v = f.mul(self.at(r, j), &pivot_inv);
                    self.set(r, j, v);
                }
            }
            let range: Vec<usize> = if reduced {
                (0..self.rows).filter(|&i| i != r).collect()
            } else {
                (r + 1..self.rows).collect()
            };
            for i in range {
                if f.is_zero(self.at(i, c)) {
                    continue;
                }
                let factor = if reduced {
                    self.at(i, c).clone()
                } else {
                    f.mul(self.at(i, c), &pivot_inv)
                };
                for j in 0..self.cols {
                    let v = f.sub(self.at(i, j), &f.mul(&factor, self.at(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Row rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce(false).len()
    }

    /// Basis of the right kernel `{x : Ax = 0}`, as column vectors in the
    /// deterministic order induced by the free columns of the reduced row
    /// echelon form.  Length is always `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.row_reduce(true);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = vec![f.zero(); self.cols];
            x[free] = f.one();
            for (r, &c) in pivots.iter().enumerate() {
                if c < free {
                    x[c] = f.neg(m.at(r, free));
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Basis of the left kernel `{y : yA = 0}`, as row vectors.
    pub fn left_kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        self.transpose().kernel_basis()
    }

    /// Solves `Ax = b`.  Returns a particular solution if the system is
    /// consistent; the kernel describes the full solution set.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch in solve");
        let f = self.field.clone();
        let mut aug = self.hcat(&Matrix::from_cols(f.clone(), self.rows, &[b.to_vec()]));
        let pivots = aug.row_reduce(true);
        // inconsistent iff a pivot lands in the augmented column
        if pivots.iter().any(|&c| c == self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    /// Solves `AX = B` columnwise; `None` if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(self.rows, b.rows);
        let mut cols = Vec::with_capacity(b.cols);
        for j in 0..b.cols {
            cols.push(self.solve(&b.col(j))?);
        }
        Some(Matrix::from_cols(self.field.clone(), self.cols, &cols))
    }

    /// Solves `XA = B`; `None` if inconsistent.
    pub fn solve_left(&self, b: &Matrix<F>) -> Option<Matrix<F>> {
        // XA = B  <=>  A^T X^T = B^T
        self.transpose().solve_matrix(&b.transpose()).map(|x| x.transpose())
    }

    /// Reduced column echelon form: the canonical representative of the
    /// column space.  Each column has a pivot row with entry 1, pivot rows
    /// increase left to right, and pivot rows are zero in all other columns.
    pub fn column_echelon(&self) -> Matrix<F> {
        let mut t = self.transpose();
        let pivots = t.row_reduce(true);
        let k = pivots.len();
        t.submatrix(0, 0, k, t.cols).transpose()
    }

    /// True if `v` lies in the column space.
    pub fn col_space_contains(&self, v: &[F::Elem]) -> bool {
        self.solve(v).is_some()
    }
}

/// A subspace of `F^n`, stored as a reduced column echelon basis so equality
/// of subspaces is syntactic equality of matrices.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<F: Field>(pub Matrix<F>);

impl<F: Field> Subspace<F> {
    pub fn full(field: F, n: usize) -> Self {
        Subspace(Matrix::identity(field, n))
    }

    pub fn zero(field: F, n: usize) -> Self {
        Subspace(Matrix::zeros(field, n, 0))
    }

    /// Span of the given columns, canonicalized.
    pub fn span(m: &Matrix<F>) -> Self {
        Subspace(m.column_echelon())
    }

    pub fn dim(&self) -> usize {
        self.0.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.rows()
    }

    pub fn contains_vec(&self, v: &[F::Elem]) -> bool {
        self.0.col_space_contains(v)
    }

    pub fn contains(&self, other: &Subspace<F>) -> bool {
        (0..other.0.cols()).all(|j| self.contains_vec(&other.0.col(j)))
    }

    /// Image `A(self)` under the linear map with matrix `a`.
    pub fn image_under(&self, a: &Matrix<F>) -> Subspace<F> {
        Subspace::span(&a.mul(&self.0))
    }

    /// Preimage `A^{-1}(self)`.
    pub fn preimage_under(&self, a: &Matrix<F>) -> Subspace<F> {
        // x with Ax in span(B): solve [A | -B] kernel and project to x-part.
        let f = a.field().clone();
        let stacked = a.hcat(&self.0.neg());
        let ker = stacked.kernel_basis();
        let cols: Vec<Vec<F::Elem>> = ker.iter().map(|k| k[..a.cols()].to_vec()).collect();
        Subspace::span(&Matrix::from_cols(f, a.cols(), &cols))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        Subspace::span(&self.0.hcat(&other.0))
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        // columns x = B1 u = B2 v: kernel of [B1 | -B2]
        let f = self.0.field().clone();
        let stacked = self.0.hcat(&other.0.neg());
        let ker = stacked.kernel_basis();
        let cols: Vec<Vec<F::Elem>> = ker
            .iter()
            .map(|k| self.0.mul_vec(&k[..self.0.cols()]))
            .collect();
        Subspace::span(&Matrix::from_cols(f, self.ambient_dim(), &cols))
    }

    /// Coordinates of `v` in this basis; `None` if `v` is outside.
    pub fn coords(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.0.solve(v)
    }

    /// Standard basis vectors completing this subspace to the ambient space.
    pub fn complement_pivots(&self) -> Vec<usize> {
        let f = self.0.field().clone();
        let n = self.ambient_dim();
        let mut pivot_rows = Vec::new();
        for j in 0..self.0.cols() {
            let r = (0..n).find(|&i| !f.is_zero(self.0.at(i, j))).expect("echelon column nonzero");
            pivot_rows.push(r);
        }
        (0..n).filter(|i| !pivot_rows.contains(i)).collect()
    }
}

/// Enumerates every dim-`k` subspace of `F_p^n` exactly once via reduced
/// column echelon forms: choose pivot rows `r_1 < ... < r_k`, then fill the
/// free entries (below a column's own pivot, skipping other pivot rows) with
/// all field values.
pub fn enumerate_subspaces(fp: Fp, n: usize, k: usize) -> Vec<Matrix<Fp>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        emit_for_pivots(fp, n, k, &pivots, &mut out);
        // next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] != i + n - k {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn emit_for_pivots(fp: Fp, n: usize, k: usize, pivots: &[usize], out: &mut Vec<Matrix<Fp>>) {
    // free positions: (row, col) with row > pivots[col], row not a pivot row
    let mut free: Vec<(usize, usize)> = Vec::new();
    for (c, &pr) in pivots.iter().enumerate() {
        for r in pr + 1..n {
            if !pivots.contains(&r) {
                free.push((r, c));
            }
        }
    }
    let p = fp.modulus();
    let total = (p as u128).checked_pow(free.len() as u32).expect("subspace enumeration overflow");
    let mut counter = vec![0u64; free.len()];
    let mut emitted = 0u128;
    loop {
        let mut m = Matrix::zeros(fp, n, k);
        for (c, &pr) in pivots.iter().enumerate() {
            m.set(pr, c, 1);
        }
        for (idx, &(r, c)) in free.iter().enumerate() {
            m.set(r, c, counter[idx]);
        }
        out.push(m);
        emitted += 1;
        if emitted == total {
            return;
        }
        // increment base-p counter
        for d in counter.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rationals};
    use alloc::vec;

    fn qmat(rows: Vec<Vec<i64>>) -> Matrix<Rationals> {
        Matrix::from_rows(
            Rationals,
            rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect(),
        )
    }

    #[test]
    fn rank_examples() {
        // identity 3x3 over F_2 -> 3
        let f2 = Fp::new(2).unwrap();
        assert_eq!(Matrix::identity(f2, 3).rank(), 3);
        // zero 2x5 over rationals -> 0
        assert_eq!(Matrix::<Rationals>::zeros(Rationals, 2, 5).rank(), 0);
        // proportional rows -> 1
        assert_eq!(qmat(vec![vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f2 = Fp::new(2).unwrap();
        assert!(Matrix::identity(f2, 4).kernel_basis().is_empty());
        assert_eq!(Matrix::<Rationals>::zeros(Rationals, 2, 3).kernel_basis().len(), 3);
        // [[1,1]] over F_2 -> single vector (1,1)
        let m = Matrix::from_rows(f2, vec![vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![1, 1]]);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(Rationals, 3);
        let b = vec![rat(4), rat(-1), rat(7)];
        assert_eq!(id.solve(&b).unwrap(), b);

        let zero = Matrix::<Rationals>::zeros(Rationals, 2, 2);
        assert!(zero.solve(&[rat(1), rat(0)]).is_none());

        let m = qmat(vec![vec![2]]);
        let x = m.solve(&[rat(1)]).unwrap();
        assert_eq!(x[0], rat(1) / rat(2));
    }

    #[test]
    fn rank_plus_nullity() {
        let m = qmat(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
    }

    #[test]
    fn echelon_is_canonical() {
        let f3 = Fp::new(3).unwrap();
        let a = Matrix::from_rows(f3, vec![vec![1, 2], vec![2, 1], vec![0, 0]]);
        let b = Matrix::from_rows(f3, vec![vec![2, 1], vec![1, 2], vec![0, 0]]);
        assert_eq!(Subspace::span(&a), Subspace::span(&b));
    }

    #[test]
    fn subspace_count_is_gaussian_binomial() {
        let f2 = Fp::new(2).unwrap();
        // [4 choose 2]_2 = 35
        assert_eq!(enumerate_subspaces(f2, 4, 2).len(), 35);
        let f3 = Fp::new(3).unwrap();
        // [3 choose 1]_3 = 13
        assert_eq!(enumerate_subspaces(f3, 3, 1).len(), 13);
        assert_eq!(enumerate_subspaces(f3, 3, 0).len(), 1);
        assert_eq!(enumerate_subspaces(f3, 3, 3).len(), 1);
        // all distinct
        let all = enumerate_subspaces(f2, 4, 2);
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert!(all[i] != all[j]);
            }
        }
    }

    #[test]
    fn intersect_and_sum() {
        let f = Rationals;
        let e1 = Subspace::span(&qmat(vec![vec![1], vec![0], vec![0]]));
        let plane = Subspace::span(&qmat(vec![vec![1, 0], vec![0, 1], vec![0, 0]]));
        assert!(plane.contains(&e1));
        assert_eq!(plane.intersect(&e1), e1);
        assert_eq!(e1.sum(&plane), plane);
        let zero = Subspace::zero(f, 3);
        assert_eq!(e1.intersect(&zero).dim(), 0);
    }

    #[test]
    fn preimage() {
        // A: Q^2 -> Q^2, (x,y) -> (x, 0); preimage of span(e1) is everything
        let a = qmat(vec![vec![1, 0], vec![0, 0]]);
        let line = Subspace::span(&qmat(vec![vec![1], vec![0]]));
        assert_eq!(line.preimage_under(&a).dim(), 2);
        // preimage of 0 is the kernel = span(e2)
        let z = Subspace::zero(Rationals, 2);
        let pre = z.preimage_under(&a);
        assert_eq!(pre.dim(), 1);
        assert!(pre.contains_vec(&[rat(0), rat(1)]));
    }
}
