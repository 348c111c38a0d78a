mod common;

use chaindecomp_core::chain::{default_pool, random_chain_with, random_iso_with, ChainShape};
use chaindecomp_core::{flags, invariant_table, linearly_isomorphic, Direction, Field, Matrix};
use common::random_shape;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(7))]
}

fn matrix_strategy(max: usize) -> impl Strategy<Value = Matrix> {
    (field_strategy(), 0..=max, 0..=max).prop_flat_map(|(field, r, c)| {
        prop::collection::vec(-4i64..=4, r * c).prop_map(move |v| Matrix::from_i64(field, r, c, &v))
    })
}

/// Field, rng seed and chain length; the chain itself is drawn from the seed.
fn chain_strategy(max_t: usize) -> impl Strategy<Value = (Field, u64, usize)> {
    (field_strategy(), any::<u64>(), 1..=max_t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rref_is_idempotent(m in matrix_strategy(6)) {
        let once = m.rref().reduced;
        prop_assert_eq!(once.rref().reduced, once.clone());
        prop_assert_eq!(once.rank(), m.rank());
    }

    #[test]
    fn rank_nullity(m in matrix_strategy(6)) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
        prop_assert_eq!(m.image().dim(), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn preimage_then_image(m in matrix_strategy(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = m.field();
        let k = rand::Rng::gen_range(&mut rng, 0..=m.rows());
        let gens = chaindecomp_core::chain::random_matrix(field, k, m.rows(), &mut rng, &default_pool(field));
        let s = gens.transpose().image();
        let pre = m.preimage(&s).unwrap();
        let meet = s.intersection(&m.image()).unwrap();
        prop_assert_eq!(m.map_subspace(&pre).unwrap(), meet.clone());
        prop_assert_eq!(pre.dim(), meet.dim() + m.kernel().dim());
        prop_assert!(pre.contains(&m.kernel()).unwrap());
    }

    #[test]
    fn transport_is_a_group_action((field, seed, t) in chain_strategy(4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain_with(&random_shape(t, 4, &mut rng), field, &mut rng, &default_pool(field));
        let phi = random_iso_with(field, c.dims(), &mut rng);
        let psi = random_iso_with(field, c.dims(), &mut rng);
        let stepwise = c.transport(&phi).unwrap().transport(&psi).unwrap();
        prop_assert_eq!(c.transport(&phi.then(&psi).unwrap()).unwrap(), stepwise);
        prop_assert_eq!(c.transport(&phi).unwrap().transport(&phi.inverse().unwrap()).unwrap(), c);
    }

    #[test]
    fn flags_are_equivariant((field, seed, t) in chain_strategy(5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain_with(&random_shape(t, 4, &mut rng), field, &mut rng, &default_pool(field));
        let phi = random_iso_with(field, c.dims(), &mut rng);
        let moved = flags(&c.transport(&phi).unwrap());
        for (i, (before, after)) in flags(&c).iter().zip(moved.iter()).enumerate() {
            for (s, s_moved) in before.subspaces.iter().zip(after.subspaces.iter()) {
                prop_assert_eq!(&phi.mats()[i].map_subspace(s).unwrap(), s_moved);
            }
        }
    }

    #[test]
    fn flags_are_monotone((field, seed, t) in chain_strategy(6)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain_with(&random_shape(t, 4, &mut rng), field, &mut rng, &default_pool(field));
        for (i, flag) in flags(&c).iter().enumerate() {
            prop_assert_eq!(flag.subspaces.len(), i + 1);
            prop_assert!(flag.subspaces.last().unwrap().is_full());
            for w in flag.subspaces.windows(2) {
                prop_assert!(w[1].contains(&w[0]).unwrap());
            }
        }
    }

    #[test]
    fn direct_sum_commutes_up_to_tables((field, seed, t) in chain_strategy(4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sa = random_shape(t, 3, &mut rng);
        let sb = ChainShape::new(sa.directions().to_vec(), random_shape(t, 3, &mut rng).dims().to_vec()).unwrap();
        let a = random_chain_with(&sa, field, &mut rng, &default_pool(field));
        let b = random_chain_with(&sb, field, &mut rng, &default_pool(field));
        let ab = a.direct_sum(&b).unwrap();
        let ba = b.direct_sum(&a).unwrap();
        prop_assert_eq!(invariant_table(&ab), invariant_table(&ba));
        prop_assert!(linearly_isomorphic(&ab, &ba));
    }

    #[test]
    fn tables_survive_base_change((field, seed, t) in chain_strategy(5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain_with(&random_shape(t, 5, &mut rng), field, &mut rng, &default_pool(field));
        let phi = random_iso_with(field, c.dims(), &mut rng);
        prop_assert_eq!(invariant_table(&c.transport(&phi).unwrap()), invariant_table(&c));
    }

    #[test]
    fn reversal_flips_every_arrow((field, seed, t) in chain_strategy(5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain_with(&random_shape(t, 3, &mut rng), field, &mut rng, &default_pool(field));
        let r = c.reversed();
        let flipped: Vec<Direction> = c.directions().iter().rev().map(|d| d.flipped()).collect();
        prop_assert_eq!(r.directions(), &flipped[..]);
        prop_assert_eq!(r.reversed(), c);
    }
}
