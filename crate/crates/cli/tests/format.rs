use chaindecomp::{parse_chain, serialize_chain};
use chaindecomp_core::chain::{all_orientations, default_pool, random_chain_with, ChainShape};
use chaindecomp_core::Field;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn serialize_parse_fixed_point_on_generated_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 0..1000 {
        let field = match n % 3 {
            0 => Field::Rational,
            1 => Field::Prime(2),
            _ => Field::Prime(7919),
        };
        let t = rng.gen_range(1..=5);
        let all = all_orientations(t);
        let dirs = all[rng.gen_range(0..all.len())].clone();
        let dims = (0..t).map(|_| rng.gen_range(0..=4)).collect();
        let shape = ChainShape::new(dirs, dims).unwrap();
        let pool = if field == Field::Rational { -20..=20 } else { default_pool(field) };
        let mut c = random_chain_with(&shape, field, &mut rng, &pool);
        if field == Field::Rational && n % 2 == 0 {
            let phi = chaindecomp_core::chain::random_iso_with(field, c.dims(), &mut rng);
            c = c.transport(&phi).unwrap();
        }
        let text = serialize_chain(&c);
        let back = parse_chain(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(serialize_chain(&back), text);
    }
}

#[test]
fn fixture_is_canonical() {
    let text = include_str!("data/worked_example.chain");
    assert_eq!(serialize_chain(&parse_chain(text).unwrap()), text);
}

proptest! {
    #[test]
    fn parser_never_panics(text in "(CHAIN v1\n)?(field (Q|GF [0-9]{1,3})\n)?(t [0-9]\n)?(dirs [<>x]{0,4}\n)?(dims( [0-9]){0,4}\n)?(map [0-9] [0-9] [0-9]\n)?([-0-9/ ]{0,8}\n){0,4}(END\n)?") {
        let _ = parse_chain(&text);
    }

    #[test]
    fn single_edits_are_rejected_or_reparse(pos in 0usize..200, ch in prop::sample::select(vec!['x', ' ', '\n', '9', '-', '/'])) {
        let text = include_str!("data/worked_example.chain");
        let mut bytes: Vec<char> = text.chars().collect();
        let pos = pos % bytes.len();
        bytes[pos] = ch;
        let edited: String = bytes.into_iter().collect();
        if let Ok(c) = parse_chain(&edited) {
            prop_assert_eq!(parse_chain(&serialize_chain(&c)).unwrap(), c);
        }
    }
}
