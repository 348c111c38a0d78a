//! Golden values for the 5-6-5 chain `U_1 -> U_2 <- U_3` in block form.

mod common;

use chaindecomp_core::canon3::{read_intervals_t3, reduce_chain};
use chaindecomp_core::invariants::interval_table;
use chaindecomp_core::{
    canonical_decomposition, flags, interval_chain, invariant_table, linearly_isomorphic,
    multiplicities_solve, multiplicities_sweep, Field, InvariantTable, Matrix, Subspace,
};
use common::{worked_example, worked_example_multiset};

fn coords(field: Field, n: usize, idx: &[usize]) -> Subspace {
    let vectors: Vec<_> = idx
        .iter()
        .map(|&i| (0..n).map(|k| if k == i { field.one() } else { field.zero() }).collect())
        .collect();
    Subspace::span(field, n, &vectors)
}

fn unit(field: Field, n: usize, i: usize) -> Vec<chaindecomp_core::FieldValue> {
    (0..n).map(|k| if k == i { field.one() } else { field.zero() }).collect()
}

#[test]
fn image_and_preimage_blocks() {
    let q = Field::Rational;
    let c = worked_example(q);
    let (m1, m2) = (&c.maps()[0], &c.maps()[1]);
    let f123 = coords(q, 6, &[0, 1, 2]);
    assert_eq!(m1.image(), f123);
    assert_eq!(m2.preimage(&f123).unwrap(), coords(q, 5, &[0, 1, 2]));
    assert_eq!(m2.kernel(), coords(q, 5, &[0]));
}

#[test]
fn flags_match_listed_subspaces() {
    for field in [Field::Rational, Field::Prime(2), Field::Prime(101)] {
        let fl = flags(&worked_example(field));
        assert_eq!(fl[0].subspaces, vec![Subspace::full(field, 5)]);
        assert_eq!(fl[1].subspaces, vec![coords(field, 6, &[0, 1, 2]), Subspace::full(field, 6)]);
        assert_eq!(
            fl[2].subspaces,
            vec![coords(field, 5, &[0]), coords(field, 5, &[0, 1, 2]), Subspace::full(field, 5)]
        );
        let u3 = &fl[2].subspaces;
        assert!(u3[1].contains(&u3[0]).unwrap() && u3[2].contains(&u3[1]).unwrap());
    }
}

#[test]
fn table_and_multiplicities() {
    let c = worked_example(Field::Rational);
    let table = invariant_table(&c);
    assert_eq!(table, InvariantTable::from_rows(vec![vec![5], vec![3, 6], vec![1, 3, 5]]).unwrap());
    assert_eq!(multiplicities_sweep(&table, c.directions()).unwrap(), worked_example_multiset());
    assert_eq!(multiplicities_solve(&table, c.directions()).unwrap(), worked_example_multiset());
}

#[test]
fn nine_summands_rebuild_the_chain() {
    let q = Field::Rational;
    let c = worked_example(q);
    let mut sum: Option<chaindecomp_core::Chain> = None;
    let mut table = InvariantTable::zero(3);
    for iv in worked_example_multiset().summands() {
        let l = interval_chain(c.directions(), iv.start, iv.end, q).unwrap();
        table = table.add(&interval_table(c.directions(), iv.start, iv.end).unwrap()).unwrap();
        sum = Some(match sum {
            None => l,
            Some(s) => s.direct_sum(&l).unwrap(),
        });
    }
    let sum = sum.unwrap();
    assert_eq!(sum.dims(), &[5, 6, 5]);
    assert_eq!(worked_example_multiset().len(), 9);
    assert!(linearly_isomorphic(&sum, &c));
    assert_eq!(table, invariant_table(&c));
}

#[test]
fn block_form_is_its_own_canonical_form() {
    let c = worked_example(Field::Rational);
    let canon = reduce_chain(&c).unwrap();
    assert_eq!((canon.p, canon.q, canon.r), (3, 2, 2));
    assert_eq!(canon.n1, c.maps()[0]);
    assert_eq!(canon.n2, c.maps()[1]);
    assert_eq!(read_intervals_t3(&canon, (5, 6, 5)).unwrap(), worked_example_multiset());
}

#[test]
fn explicit_decomposition_follows_basis_table() {
    let q = Field::Rational;
    let c = worked_example(q);
    let (m, phi) = canonical_decomposition(&c).unwrap();
    assert_eq!(m, worked_example_multiset());
    assert_eq!(c.transport(&phi).unwrap(), m.to_chain(c.directions(), q).unwrap());

    let bases: Vec<Matrix> = phi.mats().iter().map(|p| p.inverse().unwrap()).collect();
    // canonical order at vertex 1: L11 L11 L12 L13 L13
    assert_eq!(bases[0].column(2), unit(q, 5, 4));
    assert_eq!(bases[0].column(3), unit(q, 5, 2));
    assert_eq!(bases[0].column(4), unit(q, 5, 3));
    // vertex 2: L12 L13 L13 L22 L23 L23
    assert_eq!(bases[1].column(0), unit(q, 6, 2));
    assert_eq!(bases[1].column(1), unit(q, 6, 0));
    assert_eq!(bases[1].column(2), unit(q, 6, 1));
    // vertex 3: L13 L13 L23 L23 L33
    assert_eq!(bases[2].column(0), unit(q, 5, 1));
    assert_eq!(bases[2].column(1), unit(q, 5, 2));
    assert_eq!(bases[2].column(4), unit(q, 5, 0));
}
