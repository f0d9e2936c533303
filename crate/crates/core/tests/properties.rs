//! Randomized checks for the pieces with clean algebraic contracts: ratio
//! formatting, the substring matcher, and the move-to-front product.

use mixbound::chains::tsetlin::keep_first;
use mixbound::languages::build_test_automaton;
use mixbound::ratio::{fmt_q, parse_q, qr};
use mixbound::transform::Alphabet;
use proptest::prelude::*;

proptest! {
    #[test]
    fn ratio_formatting_round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
        let q = qr(n, d);
        let shown = fmt_q(&q);
        prop_assert_eq!(parse_q(&shown).unwrap(), q.clone());
        prop_assert_eq!(parse_q(&format!("{n}/{d}")).unwrap(), q);
    }

    #[test]
    fn matcher_agrees_with_the_substring_scan(
        pattern in proptest::collection::vec(0usize..3, 1..5),
        word in proptest::collection::vec(0usize..3, 0..40),
    ) {
        let alphabet = Alphabet::uniform(vec![
            "a".to_string(),
            "b".to_string(),
            "c".to_string(),
        ]).unwrap();
        let auto = build_test_automaton(&alphabet, &pattern).unwrap();
        let scanned = word
            .windows(pattern.len())
            .any(|w| w == pattern.as_slice());
        prop_assert_eq!(auto.accepts(&word), scanned);
    }

    #[test]
    fn keep_first_product_is_associative(
        u in proptest::collection::vec(0u8..6, 0..8),
        v in proptest::collection::vec(0u8..6, 0..8),
        w in proptest::collection::vec(0u8..6, 0..8),
    ) {
        let u = keep_first(&[], &u);
        let v = keep_first(&[], &v);
        let w = keep_first(&[], &w);
        let left = keep_first(&keep_first(&u, &v), &w);
        let right = keep_first(&u, &keep_first(&v, &w));
        prop_assert_eq!(left, right);
    }
}
