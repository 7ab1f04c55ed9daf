mod common;

use ccexp::automata::text::{dfa_from_text, dfa_to_text, dfao_from_text, dfao_to_text};
use ccexp::automata::{acceptors_to_dfao, decode_tuple, encode_tuple, BoolOp, Dfa};
use ccexp::Rational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn tuple_encoding_round_trips(values in prop::collection::vec(any::<u64>(), 1..5)) {
        let word = encode_tuple(&values);
        prop_assert_eq!(decode_tuple(&word, values.len()), values.clone());
        let mut padded = vec![0; 3];
        padded.extend(&word);
        prop_assert_eq!(decode_tuple(&padded, values.len()), values);
    }

    #[test]
    fn rationals_print_reduced(a in 1u64..10_000, b in 1u64..10_000, k in 1u64..50) {
        let r = Rational::of(a * k, b * k);
        prop_assert_eq!(r, Rational::of(a, b));
        let text = r.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), r);
        prop_assert!(!text.contains('.'));
    }

    #[test]
    fn leading_zero_columns_do_not_matter(seed in any::<u64>(), x in 0u64..1000, y in 0u64..1000) {
        let d = common::random_dfa(&mut rng(seed), &["x", "y"], 7);
        let mut word = vec![0, 0];
        word.extend(encode_tuple(&[x, y]));
        prop_assert_eq!(d.accepts_word(&word), d.accepts(&[x, y]));
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = common::random_dfa(&mut r, &["a", "b", "c"], 9).minimize();
        let text = dfa_to_text(&d);
        prop_assert_eq!(dfa_from_text(&text).unwrap(), d);
        let m = common::random_minimal_dfao(&mut r, 8);
        let text = dfao_to_text(&m);
        prop_assert_eq!(dfao_from_text::<u8>(&text).unwrap(), m);
    }

    #[test]
    fn complement_is_an_involution(seed in any::<u64>()) {
        let d = common::random_dfa(&mut rng(seed), &["x"], 8).minimize();
        prop_assert_eq!(d.complement().complement(), d.clone());
        prop_assert!(d.product(&d.complement(), BoolOp::And).enumerate_accepted(1).is_empty());
    }

    #[test]
    fn minimization_is_canonical(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = common::random_dfa(&mut r, &["x", "y"], 10);
        let shuffled = common::shuffle_states(&mut r, &d);
        prop_assert_eq!(d.minimize(), shuffled.minimize());
        prop_assert!(d.equivalent(&shuffled).unwrap().is_none());
    }

    #[test]
    fn renaming_permutes_tracks(seed in any::<u64>(), x in 0u64..200, y in 0u64..200) {
        let d = common::random_dfa(&mut rng(seed), &["x", "y"], 6);
        let swapped = d.rename(&[("x", "y"), ("y", "x")]).unwrap();
        prop_assert_eq!(swapped.accepts(&[y, x]), d.accepts(&[x, y]));
    }
}

#[test]
fn equivalence_reports_a_witness() {
    let mut r = rng(3);
    let a = common::random_dfa(&mut r, &["x"], 6);
    let b = a.complement();
    let w = a.equivalent(&b).unwrap().expect("complement differs");
    assert_ne!(a.accepts(&w), b.accepts(&w));
}

#[test]
fn acceptors_partition_into_dfao() {
    let small = Dfa::build(&["n"], 0u64, |&q, sym| (q * 2 + sym[0] as u64).min(4), |&q| q < 3);
    let large = small.complement();
    let m = acceptors_to_dfao(&[(small.clone(), 1u8), (large, 2u8)], None, 0u8).unwrap();
    for n in 0..64 {
        assert_eq!(*m.eval(&[n]), if n < 3 { 1u8 } else { 2u8 });
    }
    let overlap = acceptors_to_dfao(&[(small.clone(), 1u8), (small, 2u8)], None, 0u8);
    assert!(overlap.is_err());
}
