#![allow(dead_code)]

use chaindecomp_core::chain::{all_orientations, ChainShape};
use chaindecomp_core::{Chain, Direction, Field, FieldValue, Interval, IntervalMultiset, Matrix};
use rand::Rng;

/// The 5-6-5 chain `U_1 -> U_2 <- U_3` already in canonical block form,
/// with `p = 3`, `q = 2`, `r = 2`.
pub fn worked_example(field: Field) -> Chain {
    #[rustfmt::skip]
    let m1 = Matrix::from_i64(field, 6, 5, &[
        0, 0, 1, 0, 0,
        0, 0, 0, 1, 0,
        0, 0, 0, 0, 1,
        0, 0, 0, 0, 0,
        0, 0, 0, 0, 0,
        0, 0, 0, 0, 0,
    ]);
    #[rustfmt::skip]
    let m2 = Matrix::from_i64(field, 6, 5, &[
        0, 1, 0, 0, 0,
        0, 0, 1, 0, 0,
        0, 0, 0, 0, 0,
        0, 0, 0, 1, 0,
        0, 0, 0, 0, 1,
        0, 0, 0, 0, 0,
    ]);
    let shape = ChainShape::new(vec![Direction::Forward, Direction::Backward], vec![5, 6, 5]).unwrap();
    Chain::new(field, shape, vec![m1, m2]).unwrap()
}

pub fn worked_example_multiset() -> IntervalMultiset {
    IntervalMultiset::from_counts(
        3,
        &[((1, 1), 2), ((1, 2), 1), ((1, 3), 2), ((2, 2), 1), ((2, 3), 2), ((3, 3), 1)],
    )
}

/// Each interval independently gets multiplicity `0..=max`.
pub fn random_multiset<R: Rng>(t: usize, max: usize, rng: &mut R) -> IntervalMultiset {
    let mut m = IntervalMultiset::new(t);
    for iv in Interval::all(t) {
        m.add(iv, rng.gen_range(0..=max));
    }
    m
}

pub fn random_orientation<R: Rng>(t: usize, rng: &mut R) -> Vec<Direction> {
    let all = all_orientations(t);
    all[rng.gen_range(0..all.len())].clone()
}

pub fn random_shape<R: Rng>(t: usize, max_dim: usize, rng: &mut R) -> ChainShape {
    let dirs = random_orientation(t, rng);
    let dims = (0..t).map(|_| rng.gen_range(0..=max_dim)).collect();
    ChainShape::new(dirs, dims).unwrap()
}

/// Determinant by cofactor expansion along the first row. Independent of
/// elimination; only for small matrices.
pub fn det_cofactor(m: &Matrix) -> FieldValue {
    let n = m.rows();
    let field = m.field();
    if n == 0 {
        return field.one();
    }
    let mut acc = field.zero();
    for c in 0..n {
        let a = m.get(0, c);
        if a.is_zero() {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|&k| k != c).collect();
        let minor = select(m, &(1..n).collect::<Vec<_>>(), &cols);
        let term = a * &det_cofactor(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

pub fn select(m: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    let entries = rows
        .iter()
        .flat_map(|&r| cols.iter().map(move |&c| m.get(r, c).clone()))
        .collect();
    Matrix::from_entries(m.field(), rows.len(), cols.len(), entries).unwrap()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest `k` with a nonzero `k x k` minor.
pub fn minor_rank(m: &Matrix) -> usize {
    for k in (1..=m.rows().min(m.cols())).rev() {
        for rows in subsets(m.rows(), k) {
            for cols in subsets(m.cols(), k) {
                if !det_cofactor(&select(m, &rows, &cols)).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}
