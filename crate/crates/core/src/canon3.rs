//! Canonical form of chains `U_1 -> U_2 <- U_3`.
//!
//! Such a chain is a pair `(M_1, M_2)` with the same number of rows, acted on
//! by `(M_1, M_2) -> (S_2^-1 M_1 S_1, S_2^-1 M_2 S_3)`. Row operations act on
//! `[M_1 | M_2]` together, column operations on each block separately. The
//! reduction ends in
//!
//! ```text
//!   N_1 = | 0  I_p |      N_2 = | 0 I_r  0 |  0  |   (top p rows)
//!         | 0  0   |            | 0  0   0 |  0  |
//!                               |   0        | I_q |  (remaining rows)
//!                               |   0        |  0  |
//! ```
//!
//! where the column split of `N_2` is `(d_3 - q) | q` and `I_r` sits in the
//! last `r` columns of the left part.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use thiserror::Error;

use crate::chain::{Chain, Direction};
use crate::field::Field;
use crate::invariants::{Interval, IntervalMultiset};
use crate::linalg::{LinAlgError, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("blocks have {0} and {1} rows")]
    RowMismatch(usize, usize),
    #[error("canonical form needs orientation \"><\" on three vertices, found {0:?}")]
    WrongOrientation(String),
    #[error("malformed canonical data: {0}")]
    Malformed(String),
    #[error("internal verification failed: {0}")]
    Defect(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Result of [`reduce_t3`]: `S2^-1 * m1 * S1 = n1` and `S2^-1 * m2 * S3 = n2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalT3 {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s1: Matrix,
    pub s2: Matrix,
    pub s3: Matrix,
    pub n1: Matrix,
    pub n2: Matrix,
}

/// The canonical blocks for the given sizes and ranks.
pub fn canonical_blocks(
    field: Field,
    (d1, d2, d3): (usize, usize, usize),
    p: usize,
    q: usize,
    r: usize,
) -> (Matrix, Matrix) {
    let mut n1 = Matrix::zeros(field, d2, d1);
    for k in 0..p {
        n1.set(k, d1 - p + k, field.one());
    }
    let mut n2 = Matrix::zeros(field, d2, d3);
    for k in 0..r {
        n2.set(k, d3 - q - r + k, field.one());
    }
    for k in 0..q {
        n2.set(p + k, d3 - q + k, field.one());
    }
    (n1, n2)
}

#[derive(Clone, Copy)]
enum Block {
    Left,
    Right,
}

/// Working copy of `[M_1 | M_2]` with the accumulated transformations.
struct Reducer {
    field: Field,
    w1: Matrix,
    w2: Matrix,
    /// Product of all row operations, i.e. `S_2^-1`.
    rows: Matrix,
    s1: Matrix,
    s3: Matrix,
}

impl Reducer {
    fn work(&self, block: Block) -> &Matrix {
        match block {
            Block::Left => &self.w1,
            Block::Right => &self.w2,
        }
    }

    fn parts(&mut self, block: Block) -> (&mut Matrix, &mut Matrix) {
        match block {
            Block::Left => (&mut self.w1, &mut self.s1),
            Block::Right => (&mut self.w2, &mut self.s3),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.w1.swap_rows(a, b);
        self.w2.swap_rows(a, b);
        self.rows.swap_rows(a, b);
    }

    fn scale_row(&mut self, r: usize, f: &crate::FieldValue) {
        self.w1.scale_row(r, f);
        self.w2.scale_row(r, f);
        self.rows.scale_row(r, f);
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, f: &crate::FieldValue) {
        self.w1.add_row_multiple(target, source, f);
        self.w2.add_row_multiple(target, source, f);
        self.rows.add_row_multiple(target, source, f);
    }

    /// Brings the sub-block `rows x cols` of one side to `[[0, I], [0, 0]]`
    /// using row operations inside `rows` and column operations inside
    /// `cols`. Pivots: leftmost nonzero column, topmost row. Returns the rank.
    fn reduce_block(&mut self, block: Block, rows: Range<usize>, cols: Range<usize>) -> usize {
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut next = rows.start;
        for col in cols.clone() {
            if next == rows.end {
                break;
            }
            let w = self.work(block);
            let Some(p) = (next..rows.end).find(|&r| !w.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(next, p);
            let inv = self.work(block).get(next, col).inv().expect("pivot is nonzero");
            self.scale_row(next, &inv);
            for r in rows.clone() {
                if r != next {
                    let f = -self.work(block).get(r, col);
                    self.add_row_multiple(r, next, &f);
                }
            }
            pivots.push((next, col));
            next += 1;
        }

        let (w, s) = self.parts(block);
        for &(row, pc) in &pivots {
            for c in cols.clone() {
                if pivots.iter().any(|&(_, q)| q == c) {
                    continue;
                }
                let f = -w.get(row, c);
                w.add_col_multiple(c, pc, &f);
                s.add_col_multiple(c, pc, &f);
            }
        }

        // free columns first, pivot columns last, both in their current order
        let order: Vec<usize> = cols
            .clone()
            .filter(|c| pivots.iter().all(|&(_, q)| q != *c))
            .chain(pivots.iter().map(|&(_, q)| q))
            .collect();
        permute_cols(w, cols.start, &order);
        permute_cols(s, cols.start, &order);
        pivots.len()
    }
}

/// Rearranges columns `start..start + order.len()` so that new column
/// `start + k` is old column `order[k]`.
fn permute_cols(m: &mut Matrix, start: usize, order: &[usize]) {
    let old = m.clone();
    for (k, &src) in order.iter().enumerate() {
        for r in 0..m.rows() {
            m.set(r, start + k, old.get(r, src).clone());
        }
    }
}

/// Reduces `(m1, m2)` (shapes `d2 x d1` and `d2 x d3`) to canonical form.
///
/// Steps: bring `m1` to `[[0, I_p], [0, 0]]`; bring the lower `d2 - p` rows of
/// the second block to `[[0, I_q], [0, 0]]`; clear the top rows above `I_q`
/// by adding multiples of the `I_q` rows; bring the remaining top-left part of
/// the second block to `[[0, I_r], [0, 0]]` and undo the damage to `I_p` with
/// column operations on the first block.
pub fn reduce_t3(m1: &Matrix, m2: &Matrix) -> Result<CanonicalT3, CanonError> {
    if m1.rows() != m2.rows() {
        return Err(CanonError::RowMismatch(m1.rows(), m2.rows()));
    }
    if m1.field() != m2.field() {
        return Err(LinAlgError::ContextMismatch(m1.field(), m2.field()).into());
    }
    let field = m1.field();
    let (d1, d2, d3) = (m1.cols(), m1.rows(), m2.cols());
    let mut st = Reducer {
        field,
        w1: m1.clone(),
        w2: m2.clone(),
        rows: Matrix::identity(field, d2),
        s1: Matrix::identity(field, d1),
        s3: Matrix::identity(field, d3),
    };

    let p = st.reduce_block(Block::Left, 0..d2, 0..d1);
    let q = st.reduce_block(Block::Right, p..d2, 0..d3);
    for row in 0..p {
        for k in 0..q {
            let f = -st.w2.get(row, d3 - q + k);
            st.add_row_multiple(row, p + k, &f);
        }
    }
    let r = st.reduce_block(Block::Right, 0..p, 0..d3 - q);

    let damaged = st.w1.submatrix(0..p, d1 - p..d1);
    let fix = Matrix::identity(st.field, d1 - p).direct_sum(
        &damaged.inverse().map_err(|_| CanonError::Defect("identity block became singular".into()))?,
    )?;
    st.w1 = st.w1.mul(&fix)?;
    st.s1 = st.s1.mul(&fix)?;

    let s2 = st
        .rows
        .inverse()
        .map_err(|_| CanonError::Defect("row transformation is singular".into()))?;
    let canon = CanonicalT3 { p, q, r, s1: st.s1, s2, s3: st.s3, n1: st.w1, n2: st.w2 };

    let (n1, n2) = canonical_blocks(field, (d1, d2, d3), p, q, r);
    if canon.n1 != n1 || canon.n2 != n2 {
        return Err(CanonError::Defect("reduced blocks are not in canonical form".into()));
    }
    if st.rows.mul(m1)?.mul(&canon.s1)? != n1 || st.rows.mul(m2)?.mul(&canon.s3)? != n2 {
        return Err(CanonError::Defect("transformations do not reproduce the canonical blocks".into()));
    }
    Ok(canon)
}

/// [`reduce_t3`] on a chain with orientation `><`.
pub fn reduce_chain(c: &Chain) -> Result<CanonicalT3, CanonError> {
    if c.directions() != [Direction::Forward, Direction::Backward] {
        return Err(CanonError::WrongOrientation(crate::chain::format_directions(c.directions())));
    }
    reduce_t3(&c.maps()[0], &c.maps()[1])
}

/// Interval multiplicities read off the canonical form:
/// `m13 = r`, `m12 = p - r`, `m23 = q`, `m22 = d2 - p - q`, `m11 = d1 - p`,
/// `m33 = d3 - r - q`.
pub fn read_intervals_t3(
    canon: &CanonicalT3,
    (d1, d2, d3): (usize, usize, usize),
) -> Result<IntervalMultiset, CanonError> {
    let (p, q, r) = (canon.p, canon.q, canon.r);
    let sub = |a: usize, b: usize, what: &str| {
        a.checked_sub(b).ok_or_else(|| CanonError::Malformed(alloc::format!("{what} would be negative")))
    };
    let counts = [
        ((1, 1), sub(d1, p, "m11")?),
        ((1, 2), sub(p, r, "m12")?),
        ((1, 3), r),
        ((2, 2), sub(d2, p + q, "m22")?),
        ((2, 3), q),
        ((3, 3), sub(d3, r + q, "m33")?),
    ];
    let mut out = IntervalMultiset::new(3);
    for ((a, b), k) in counts {
        out.add(Interval::new(a, b), k);
    }
    Ok(out)
}
