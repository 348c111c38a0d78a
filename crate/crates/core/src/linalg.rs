//! Dense exact matrices and subspaces in canonical (RREF) presentation.
//!
//! Vectors are columns and a matrix acts on the left, so an `r x c` matrix is a
//! map `F^c -> F^r`. Matrices with zero rows or columns are ordinary values and
//! stand for maps into or out of the zero space.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use thiserror::Error;

use crate::field::{Field, FieldValue};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("field context mismatch: {0} vs {1}")]
    ContextMismatch(Field, Field),
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("invalid scalar literal {0:?}")]
    InvalidLiteral(String),
}

/// A dense `rows x cols` matrix over a single field, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<FieldValue>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, entries: alloc::vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from row-major entries, checking length and field.
    pub fn from_entries(
        field: Field,
        rows: usize,
        cols: usize,
        entries: Vec<FieldValue>,
    ) -> Result<Matrix, LinAlgError> {
        if entries.len() != rows * cols {
            return Err(LinAlgError::ShapeMismatch {
                expected: (rows, cols),
                found: (entries.len(), 1),
            });
        }
        if let Some(bad) = entries.iter().find(|v| v.field() != field) {
            return Err(LinAlgError::ContextMismatch(field, bad.field()));
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    /// Integer entries mapped into `field`; `values` is row-major.
    pub fn from_i64(field: Field, rows: usize, cols: usize, values: &[i64]) -> Matrix {
        assert_eq!(values.len(), rows * cols, "entry count must equal rows * cols");
        Matrix { field, rows, cols, entries: values.iter().map(|&v| field.from_i64(v)).collect() }
    }

    /// Stacks equal-length vectors as the rows of a matrix.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<FieldValue>]) -> Matrix {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length must equal column count");
            entries.extend(r.iter().cloned());
        }
        Matrix { field, rows: rows.len(), cols, entries }
    }

    /// Places vectors side by side as columns.
    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<FieldValue>]) -> Matrix {
        Matrix::from_rows(field, rows, cols).transpose()
    }

    pub fn field(&self) -> Field {
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[FieldValue] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldValue {
        &self.entries[r * self.cols + c]
    }

    /// Overwrites one entry. Panics if `value` belongs to another field.
    pub fn set(&mut self, r: usize, c: usize, value: FieldValue) {
        assert_eq!(value.field(), self.field, "entry field must match matrix field");
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[FieldValue] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldValue> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldValue::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix { field: self.field, rows: self.cols, cols: self.rows, entries }
    }

    fn check_field(&self, other: &Matrix) -> Result<(), LinAlgError> {
        if self.field != other.field {
            return Err(LinAlgError::ContextMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinAlgError::ShapeMismatch {
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[FieldValue]) -> Result<Vec<FieldValue>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::ShapeMismatch { expected: (self.cols, 1), found: (v.len(), 1) });
        }
        if let Some(x) = v.iter().find(|x| x.field() != self.field) {
            return Err(LinAlgError::ContextMismatch(self.field, x.field()));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinAlgError::ShapeMismatch { expected: self.shape(), found: other.shape() });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, entries })
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        self.check_field(other)?;
        let mut out = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        Ok(out)
    }

    /// Block diagonal of several square or rectangular blocks, all over `field`.
    pub fn block_diagonal(field: Field, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            assert_eq!(b.field, field, "block field must match");
            out.paste(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(row, col)`.
    pub fn paste(&mut self, row: usize, col: usize, block: &Matrix) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols, "block out of bounds");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.entries[(row + r) * self.cols + col + c] = block.get(r, c).clone();
            }
        }
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Matrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for r in rows.clone() {
            for c in cols.clone() {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix { field: self.field, rows: rows.len(), cols: cols.len(), entries }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, factor: &FieldValue) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.entries[idx] = &self.entries[idx] * factor;
        }
    }

    /// `row[target] += factor * row[source]`.
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &FieldValue) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = self.get(source, c);
            if !s.is_zero() {
                let idx = target * self.cols + c;
                self.entries[idx] = &self.entries[idx] + &(factor * s);
            }
        }
    }

    /// `col[target] += factor * col[source]`.
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &FieldValue) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = self.get(r, source);
            if !s.is_zero() {
                let idx = r * self.cols + target;
                self.entries[idx] = &self.entries[idx] + &(factor * s);
            }
        }
    }

    /// Gauss-Jordan elimination. Pivots are taken from the topmost nonzero
    /// entry of the leftmost remaining column.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            m.scale_row(row, &inv);
            for r in 0..m.rows {
                if r != row {
                    let factor = -m.get(r, col);
                    m.add_row_multiple(r, row, &factor);
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        Rref { reduced: m, rank: row, pivot_cols }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::ShapeMismatch { expected: (self.rows, self.rows), found: self.shape() });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        aug.paste(0, 0, self);
        aug.paste(0, n, &Matrix::identity(self.field, n));
        let r = aug.rref();
        if !r.pivot_cols.iter().take(n).copied().eq(0..n) {
            return Err(LinAlgError::Singular);
        }
        Ok(r.reduced.submatrix(0..n, n..2 * n))
    }

    /// One solution of `self * x = rhs` (free variables set to zero), if any.
    pub fn solve(&self, rhs: &[FieldValue]) -> Result<Option<Vec<FieldValue>>, LinAlgError> {
        if rhs.len() != self.rows {
            return Err(LinAlgError::ShapeMismatch { expected: (self.rows, 1), found: (rhs.len(), 1) });
        }
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        aug.paste(0, 0, self);
        for (r, v) in rhs.iter().enumerate() {
            if v.field() != self.field {
                return Err(LinAlgError::ContextMismatch(self.field, v.field()));
            }
            aug.set(r, self.cols, v.clone());
        }
        let Rref { reduced, pivot_cols, .. } = aug.rref();
        if pivot_cols.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = alloc::vec![self.field.zero(); self.cols];
        for (r, &c) in pivot_cols.iter().enumerate() {
            x[c] = reduced.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Null space `{x : self * x = 0}` as a subspace of `F^cols`.
    pub fn kernel(&self) -> Subspace {
        let Rref { reduced, pivot_cols, .. } = self.rref();
        let mut is_pivot = alloc::vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let vectors: Vec<Vec<FieldValue>> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|free| {
                let mut v = alloc::vec![self.field.zero(); self.cols];
                v[free] = self.field.one();
                for (r, &pc) in pivot_cols.iter().enumerate() {
                    v[pc] = -reduced.get(r, free);
                }
                v
            })
            .collect();
        Subspace::span(self.field, self.cols, &vectors)
    }

    /// Column space as a subspace of `F^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::from_spanning_rows(self.transpose())
    }

    /// `{self * x : x in s}`.
    pub fn map_subspace(&self, s: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check_field(&s.basis)?;
        if s.ambient != self.cols {
            return Err(LinAlgError::AmbientMismatch(self.cols, s.ambient));
        }
        let images = s.basis.mul(&self.transpose())?;
        Ok(Subspace::from_spanning_rows(images))
    }

    /// `{x : self * x in s}`.
    pub fn preimage(&self, s: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check_field(&s.basis)?;
        if s.ambient != self.rows {
            return Err(LinAlgError::AmbientMismatch(self.rows, s.ambient));
        }
        Ok(s.annihilator().mul(self)?.kernel())
    }
}

impl fmt::Display for Matrix {
    /// One line per row, entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for (c, v) in self.row(r).iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// A linear subspace of `F^n`, held as the reduced row-echelon basis of its
/// row space. Because that presentation is unique, `==` is set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient) }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::identity(field, ambient) }
    }

    /// Row space of `rows`.
    pub fn from_spanning_rows(rows: Matrix) -> Subspace {
        let Rref { reduced, rank, .. } = rows.rref();
        let ambient = rows.cols;
        Subspace { ambient, basis: reduced.submatrix(0..rank, 0..ambient) }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vec<FieldValue>]) -> Subspace {
        Subspace::from_spanning_rows(Matrix::from_rows(field, ambient, vectors))
    }

    pub fn field(&self) -> Field {
        self.basis.field
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Basis vectors as rows, in reduced row-echelon form.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = Vec<FieldValue>> + '_ {
        (0..self.basis.rows).map(|r| self.basis.row(r).to_vec())
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn check(&self, other: &Subspace) -> Result<(), LinAlgError> {
        self.basis.check_field(&other.basis)?;
        if self.ambient != other.ambient {
            return Err(LinAlgError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check(other)?;
        let mut stacked = Matrix::zeros(self.field(), self.dim() + other.dim(), self.ambient);
        stacked.paste(0, 0, &self.basis);
        stacked.paste(self.dim(), 0, &other.basis);
        Ok(Subspace::from_spanning_rows(stacked))
    }

    /// Rows spanning the annihilator `{y : y . x = 0 for all x in self}`.
    pub fn annihilator(&self) -> Matrix {
        let ann = self.basis.kernel();
        ann.basis
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check(other)?;
        let a = self.annihilator();
        let b = other.annihilator();
        let mut stacked = Matrix::zeros(self.field(), a.rows + b.rows, self.ambient);
        stacked.paste(0, 0, &a);
        stacked.paste(a.rows, 0, &b);
        Ok(stacked.kernel())
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, LinAlgError> {
        Ok(self.sum(other)?.dim() == self.dim())
    }

    pub fn contains_vector(&self, v: &[FieldValue]) -> Result<bool, LinAlgError> {
        let single = Subspace::span(self.field(), self.ambient, &[v.to_vec()]);
        self.contains(&single)
    }
}
