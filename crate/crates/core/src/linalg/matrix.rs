//! Dense matrices over an exact field with Gaussian elimination.
//!
//! A matrix of shape `rows × cols` represents a linear map `F^cols → F^rows`
//! acting on column vectors. Zero-sized shapes are valid everywhere.

use std::fmt;
use std::ops::Mul;

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { field, rows: nrows, cols, data })
    }

    /// Convenience constructor from small integers (reduced into the field).
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<Scalar> = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&v| field.from_i64(v))
            })
            .collect();
        Matrix { field, rows: rows.len(), cols, data }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |f, a, b| f.sub(a, b))
    }

    fn zip_with(
        &self,
        rhs: &Matrix,
        op: impl Fn(&FieldSpec, &Scalar, &Scalar) -> Scalar,
    ) -> Result<Matrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::Shape(format!(
                "shapes {:?} and {:?} differ",
                self.shape(),
                rhs.shape()
            )));
        }
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| op(&f, a, b)).collect();
        Ok(Matrix { field: f, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, s)).collect(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + k] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::Shape(format!("hstack of {} and {} rows", self.rows, rhs.rows)));
        }
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        out.put_block(0, 0, self);
        out.put_block(0, self.cols, rhs);
        Ok(out)
    }

    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.cols {
            return Err(Error::Shape(format!("vstack of {} and {} cols", self.cols, rhs.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(Matrix { field: self.field, rows: self.rows + rhs.rows, cols: self.cols, data })
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let candidates = (r..m.rows).filter(|&i| !m.get(i, c).is_zero());
            let pivot = match f {
                FieldSpec::Prime { .. } => candidates.min(),
                FieldSpec::Rational => candidates.min_by_key(|&i| (m.get(i, c).weight(), i)),
            };
            let Some(pr) = pivot else { continue };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is non-zero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pv = m.get(r, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = f.sub(m.get(i, j), &f.mul(&factor, pv));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the kernel; shape `cols × (cols − rank)`.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (row, &pc) in pivots.iter().enumerate() {
                let v = r.get(row, fc);
                if !v.is_zero() {
                    out.set(pc, k, f.neg(v));
                }
            }
        }
        out
    }

    /// A surjection `F^rows → F^rows / im(self)` with full row rank; its
    /// kernel is exactly the column space of `self`.
    pub fn cokernel_projection(&self) -> Matrix {
        self.transpose().kernel_basis().transpose()
    }

    /// Some `X` with `self · X = rhs`, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if rhs.rows != self.rows {
            return Err(Error::Shape(format!(
                "right-hand side has {} rows, matrix has {}",
                rhs.rows, self.rows
            )));
        }
        let aug = self.hstack(rhs)?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for k in 0..rhs.cols {
                x.set(pc, k, r.get(row, self.cols + k).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.field, self.rows)).ok()??;
        Some(x)
    }

    /// Greedy left-to-right choice of columns of `candidates` that are
    /// independent modulo the column space of `base`.
    pub fn extend_basis(base: &Matrix, candidates: &Matrix) -> Result<Vec<usize>> {
        let joined = base.hstack(candidates)?;
        let (_, pivots) = joined.rref();
        Ok(pivots.into_iter().filter(|&p| p >= base.cols).map(|p| p - base.cols).collect())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows + rhs.rows, self.cols + rhs.cols);
        out.put_block(0, 0, self);
        out.put_block(self.rows, self.cols, rhs);
        out
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panics on a shape mismatch; use [`Matrix::mul`] for a checked product.
    fn mul(self, rhs: &Matrix) -> Matrix {
        Matrix::mul(self, rhs).expect("matrix shapes must agree")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    #[test]
    fn rank_of_identity() {
        assert_eq!(Matrix::identity(FieldSpec::Rational, 3).rank(), 3);
        assert_eq!(Matrix::identity(f2(), 3).rank(), 3);
    }

    #[test]
    fn kernel_over_f2_is_forced() {
        let m = Matrix::from_i64(f2(), &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k, Matrix::from_i64(f2(), &[&[1], &[1]]));
    }

    #[test]
    fn solve_recovers_constructed_solution() {
        let q = FieldSpec::Rational;
        let a = Matrix::from_i64(q, &[&[2, 1, 0, 3], &[1, -1, 4, 0], &[0, 5, 1, 1], &[7, 0, -2, 1]]);
        assert!(a.is_invertible());
        let x = Matrix::from_i64(q, &[&[1], &[-2], &[3], &[5]]);
        let b = &a * &x;
        assert_eq!(a.solve(&b).unwrap(), Some(x));
    }

    #[test]
    fn inconsistent_system() {
        let q = FieldSpec::Rational;
        let a = Matrix::from_i64(q, &[&[1, 1], &[2, 2]]);
        let b = Matrix::from_i64(q, &[&[1], &[3]]);
        assert_eq!(a.solve(&b).unwrap(), None);
        assert!(a.solve(&Matrix::zeros(q, 3, 1)).is_err());
    }

    #[test]
    fn empty_shapes() {
        let q = FieldSpec::Rational;
        let z = Matrix::zeros(q, 0, 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().shape(), (3, 3));
        assert_eq!(z.cokernel_projection().shape(), (0, 0));
        let w = Matrix::zeros(q, 2, 0);
        assert_eq!(w.kernel_basis().shape(), (0, 0));
        assert_eq!(w.cokernel_projection().shape(), (2, 2));
        assert!(Matrix::identity(q, 0).is_invertible());
        assert_eq!((&w * &Matrix::zeros(q, 0, 4)).shape(), (2, 4));
    }

    #[test]
    fn cokernel_projection_kills_image() {
        let q = FieldSpec::Rational;
        let a = Matrix::from_i64(q, &[&[1, 2], &[2, 4], &[0, 1]]);
        let p = a.cokernel_projection();
        assert_eq!(p.shape(), (1, 3));
        assert!((&p * &a).is_zero());
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn extend_basis_is_greedy() {
        let q = FieldSpec::Rational;
        let base = Matrix::from_i64(q, &[&[1], &[0], &[0]]);
        let picked = Matrix::extend_basis(&base, &Matrix::identity(q, 3)).unwrap();
        assert_eq!(picked, vec![1, 2]);
    }

    fn field_strategy() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::prime(2).unwrap()),
            Just(FieldSpec::prime(5).unwrap()),
            Just(FieldSpec::Rational)
        ]
    }

    fn matrix_strategy() -> impl Strategy<Value = Matrix> {
        (field_strategy(), 0usize..5, 0usize..5).prop_flat_map(|(f, r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
                let rows: Vec<&[i64]> = v.chunks(c.max(1)).take(r).collect();
                if c == 0 {
                    Matrix::zeros(f, r, 0)
                } else {
                    Matrix::from_i64(f, &rows)
                }
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix_strategy()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!((&m * &k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn cokernel_has_complementary_rank(m in matrix_strategy()) {
            let p = m.cokernel_projection();
            prop_assert_eq!(p.rows(), m.rows() - m.rank());
            prop_assert_eq!(p.rank(), p.rows());
            prop_assert!((&p * &m).is_zero());
        }
    }
}
