//! The pair `(M, N_X)` that turns unitary similarity of a square matrix `X`
//! into isometry of chains `U_1 -> U_2 <- U_3`.
//!
//! ```text
//!   M = | I  0  0  |     N_X = | I  0 |
//!       | 0  2I 0  |           | I  I |
//!       | 0  0  3I |           | I  X |
//! ```
//!
//! with `m x m` blocks. If `C^-1 X C = Y` then `S_1 = S_2 = C ⊕ C ⊕ C` and
//! `S_3 = C ⊕ C` carry `(M, N_X)` to `(M, N_Y)`. Conversely a unitary triple
//! with `S_2^-1 M S_1 = M` and `S_2^-1 N_X S_3 = N_Y` forces `S_2` to be block
//! diagonal (it commutes with `M M^* = I ⊕ 4I ⊕ 9I`), and comparing the three
//! block rows of `S_2 N_Y = N_X S_3` yields `C_3 Y = X C_3`.
//!
//! Unitary is realized exactly as rational orthogonal: `Q^T Q = I`.
//! All gadget chains of one size are linearly isomorphic to each other, so the
//! isometry class carries information the linear invariants cannot see.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::chain::{Chain, ChainShape, Direction};
use crate::field::Field;
use crate::linalg::{LinAlgError, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("X must be square, found {0}x{1}")]
    NotSquare(usize, usize),
    #[error("characteristic {0} does not separate 1, 4 and 9")]
    SmallCharacteristic(u32),
    #[error("{0} has the wrong shape")]
    Shape(&'static str),
    #[error("similarity matrix is singular")]
    Singular,
    #[error("S2 is not block diagonal: block ({0}, {1}) is nonzero")]
    BlockStructure(usize, usize),
    #[error("{0} is not orthogonal")]
    NotOrthogonal(&'static str),
    #[error("S2^-1 M S1 != M")]
    FirstEquation,
    #[error("block row {0} of S2 N_Y = N_X S3 fails")]
    StripEquation(usize),
    #[error("C3 Y != X C3")]
    NotSimilar,
    #[error("internal verification failed: {0}")]
    Defect(&'static str),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

fn check_field(field: Field) -> Result<(), GadgetError> {
    match field.characteristic() {
        c @ 1..=6 => Err(GadgetError::SmallCharacteristic(c)),
        _ => Ok(()),
    }
}

fn check_square(x: &Matrix) -> Result<usize, GadgetError> {
    if !x.is_square() {
        return Err(GadgetError::NotSquare(x.rows(), x.cols()));
    }
    Ok(x.rows())
}

/// `(M, N_X)` for a square `x`.
pub fn build_gadget(x: &Matrix) -> Result<(Matrix, Matrix), GadgetError> {
    let m = check_square(x)?;
    let field = x.field();
    check_field(field)?;
    let id = Matrix::identity(field, m);
    let mut big_m = Matrix::zeros(field, 3 * m, 3 * m);
    let mut n = Matrix::zeros(field, 3 * m, 2 * m);
    for k in 0..3 {
        let mut block = id.clone();
        for i in 0..m {
            block.set(i, i, field.from_i64(k as i64 + 1));
        }
        big_m.paste(k * m, k * m, &block);
        n.paste(k * m, 0, &id);
    }
    n.paste(m, m, &id);
    n.paste(2 * m, m, x);
    Ok((big_m, n))
}

/// The chain `F^{3m} -M-> F^{3m} <-N_X- F^{2m}`.
pub fn gadget_chain(x: &Matrix) -> Result<Chain, GadgetError> {
    let (big_m, n) = build_gadget(x)?;
    let m = x.rows();
    let shape = ChainShape::new(alloc::vec![Direction::Forward, Direction::Backward], alloc::vec![3 * m, 3 * m, 2 * m])
        .expect("three vertices, two links");
    Ok(Chain::new(x.field(), shape, alloc::vec![big_m, n]).expect("gadget blocks have chain shapes"))
}

fn repeat_diag(c: &Matrix, times: usize) -> Matrix {
    let blocks: Vec<&Matrix> = core::iter::repeat_n(c, times).collect();
    Matrix::block_diagonal(c.field(), &blocks)
}

/// Whether `c^-1 x c = y`, confirmed independently by checking that
/// `S_1 = S_2 = c ⊕ c ⊕ c`, `S_3 = c ⊕ c` carry `(M, N_x)` to `(M, N_y)`.
/// The two answers disagreeing is reported as a defect.
pub fn verify_transport(x: &Matrix, y: &Matrix, c: &Matrix) -> Result<bool, GadgetError> {
    let m = check_square(x)?;
    if y.shape() != (m, m) {
        return Err(GadgetError::Shape("Y"));
    }
    if c.shape() != (m, m) {
        return Err(GadgetError::Shape("C"));
    }
    let c_inv = c.inverse().map_err(|_| GadgetError::Singular)?;
    let similar = c_inv.mul(x)?.mul(c)? == *y;

    let (big_m, n_x) = build_gadget(x)?;
    let (_, n_y) = build_gadget(y)?;
    let s12 = repeat_diag(c, 3);
    let s3 = repeat_diag(c, 2);
    let s2_inv = repeat_diag(&c_inv, 3);
    let transports = s2_inv.mul(&big_m)?.mul(&s12)? == big_m && s2_inv.mul(&n_x)?.mul(&s3)? == n_y;

    if similar != transports {
        return Err(GadgetError::Defect("similarity and transport equations disagree"));
    }
    Ok(similar)
}

fn is_orthogonal(s: &Matrix) -> Result<bool, GadgetError> {
    Ok(s.transpose().mul(s)? == Matrix::identity(s.field(), s.rows()))
}

/// Recovers `C_3` with `C_3 y = x C_3` from an orthogonal triple
/// `(s1, s2, s3)` carrying `(M, N_x)` to `(M, N_y)`.
pub fn extract_similarity(
    s1: &Matrix,
    s2: &Matrix,
    s3: &Matrix,
    x: &Matrix,
    y: &Matrix,
) -> Result<Matrix, GadgetError> {
    let m = check_square(x)?;
    let field = x.field();
    if y.shape() != (m, m) {
        return Err(GadgetError::Shape("Y"));
    }
    for (name, s, size) in [("S1", s1, 3 * m), ("S2", s2, 3 * m), ("S3", s3, 2 * m)] {
        if s.shape() != (size, size) {
            return Err(GadgetError::Shape(name));
        }
    }

    for bi in 0..3 {
        for bj in 0..3 {
            if bi != bj && !s2.submatrix(bi * m..(bi + 1) * m, bj * m..(bj + 1) * m).is_zero() {
                return Err(GadgetError::BlockStructure(bi + 1, bj + 1));
            }
        }
    }
    for (name, s) in [("S1", s1), ("S2", s2), ("S3", s3)] {
        if !is_orthogonal(s)? {
            return Err(GadgetError::NotOrthogonal(name));
        }
    }

    let (big_m, n_x) = build_gadget(x)?;
    let (_, n_y) = build_gadget(y)?;
    if big_m.mul(s1)? != s2.mul(&big_m)? {
        return Err(GadgetError::FirstEquation);
    }
    let lhs = s2.mul(&n_y)?;
    let rhs = n_x.mul(s3)?;
    for strip in 0..3 {
        let rows = strip * m..(strip + 1) * m;
        if lhs.submatrix(rows.clone(), 0..2 * m) != rhs.submatrix(rows, 0..2 * m) {
            return Err(GadgetError::StripEquation(strip + 1));
        }
    }

    let c3 = s2.submatrix(2 * m..3 * m, 2 * m..3 * m);
    if c3.mul(y)? != x.mul(&c3)? {
        return Err(GadgetError::NotSimilar);
    }
    debug_assert_eq!(field, c3.field());
    Ok(c3)
}

/// Random exactly orthogonal rational matrix: a signed permutation, a block
/// diagonal of rotations by Pythagorean angles (3-4-5, 5-12-13) on disjoint
/// coordinate pairs, and another signed permutation.
pub fn random_orthogonal<R: Rng>(m: usize, rng: &mut R) -> Matrix {
    let q = Field::Rational;
    let rotation = |a: i64, b: i64, h: i64| {
        let v = |n: i64| q.from_ratio(&n.into(), &h.into()).expect("nonzero hypotenuse");
        Matrix::from_entries(q, 2, 2, alloc::vec![v(a), v(b), v(-b), v(a)]).expect("rational entries")
    };
    let mut middle = Matrix::identity(q, m);
    for pair in 0..m / 2 {
        let block = match rng.gen_range(0..3) {
            0 => continue,
            1 => rotation(3, 4, 5),
            _ => rotation(5, 12, 13),
        };
        middle.paste(2 * pair, 2 * pair, &block);
    }
    let left = random_signed_permutation(m, rng);
    let right = random_signed_permutation(m, rng);
    left.mul(&middle).and_then(|a| a.mul(&right)).expect("square factors")
}

pub fn random_signed_permutation<R: Rng>(m: usize, rng: &mut R) -> Matrix {
    let q = Field::Rational;
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let mut out = Matrix::zeros(q, m, m);
    for (i, &j) in perm.iter().enumerate() {
        out.set(i, j, q.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(rows: usize, cols: usize, v: &[i64]) -> Matrix {
        Matrix::from_i64(Field::Rational, rows, cols, v)
    }

    #[test]
    fn one_by_one_gadget() {
        let (m, n) = build_gadget(&q(1, 1, &[0])).unwrap();
        assert_eq!(m, q(3, 3, &[1, 0, 0, 0, 2, 0, 0, 0, 3]));
        assert_eq!(n, q(3, 2, &[1, 0, 1, 1, 1, 0]));
    }

    #[test]
    fn identity_x_strip() {
        let (_, n) = build_gadget(&Matrix::identity(Field::Rational, 2)).unwrap();
        assert_eq!(n.submatrix(4..6, 0..4), q(2, 4, &[1, 0, 1, 0, 0, 1, 0, 1]));
    }

    #[test]
    fn chain_shape() {
        let c = gadget_chain(&q(2, 2, &[1, 2, 3, 4])).unwrap();
        assert_eq!(c.dims(), &[6, 6, 4]);
        assert_eq!(c.directions(), &[Direction::Forward, Direction::Backward]);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejections() {
        assert_eq!(build_gadget(&q(1, 2, &[0, 0])), Err(GadgetError::NotSquare(1, 2)));
        for p in [2, 3, 5] {
            let x = Matrix::zeros(Field::Prime(p), 1, 1);
            assert_eq!(build_gadget(&x), Err(GadgetError::SmallCharacteristic(p)));
        }
        assert!(build_gadget(&Matrix::zeros(Field::Prime(7), 1, 1)).is_ok());
        let x = q(2, 2, &[1, 0, 0, 2]);
        assert_eq!(verify_transport(&x, &x, &q(2, 2, &[1, 1, 1, 1])), Err(GadgetError::Singular));
    }

    #[test]
    fn permutation_similarity() {
        let x = q(2, 2, &[1, 0, 0, 2]);
        let y = q(2, 2, &[2, 0, 0, 1]);
        let swap = q(2, 2, &[0, 1, 1, 0]);
        assert!(verify_transport(&x, &y, &swap).unwrap());
        assert!(verify_transport(&x, &x, &Matrix::identity(Field::Rational, 2)).unwrap());
        assert!(!verify_transport(&x, &x, &swap).unwrap());
    }

    #[test]
    fn trivial_extraction() {
        let x = q(2, 2, &[1, 2, 3, 4]);
        let i6 = Matrix::identity(Field::Rational, 6);
        let i4 = Matrix::identity(Field::Rational, 4);
        assert_eq!(extract_similarity(&i6, &i6, &i4, &x, &x).unwrap(), Matrix::identity(Field::Rational, 2));
    }

    #[test]
    fn off_diagonal_block_is_caught() {
        let x = q(1, 1, &[5]);
        let mut s2 = Matrix::identity(Field::Rational, 3);
        s2.set(0, 2, Field::Rational.one());
        let i3 = Matrix::identity(Field::Rational, 3);
        let i2 = Matrix::identity(Field::Rational, 2);
        assert_eq!(extract_similarity(&i3, &s2, &i2, &x, &x), Err(GadgetError::BlockStructure(1, 3)));
    }

    #[test]
    fn orthogonal_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in 0..5 {
            let o = random_orthogonal(m, &mut rng);
            assert!(is_orthogonal(&o).unwrap());
        }
    }
}
