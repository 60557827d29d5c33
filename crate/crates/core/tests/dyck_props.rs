use oscillation::dyck::{
    embeds, embeds_oracle, harmonic, hat_harmonic, hat_rank, rank, rank_oracle, DyckSymbol,
    DyckWord,
};
use proptest::prelude::*;

/// Balanced words with up to `max_pairs` pairs, built from a random walk that
/// never goes below zero and is closed at the end.
fn dyck(max_pairs: usize) -> impl Strategy<Value = DyckWord> {
    prop::collection::vec(any::<bool>(), 0..=2 * max_pairs).prop_map(move |bits| {
        let mut out = Vec::new();
        let (mut depth, mut opened) = (0usize, 0usize);
        for b in bits {
            if b && opened < max_pairs {
                out.push(DyckSymbol::Open);
                depth += 1;
                opened += 1;
            } else if depth > 0 {
                out.push(DyckSymbol::Close);
                depth -= 1;
            }
        }
        out.extend(std::iter::repeat(DyckSymbol::Close).take(depth));
        DyckWord::new(out).expect("balanced by construction")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn embedding_matches_deletion_closure(a in dyck(4), b in dyck(6)) {
        prop_assert_eq!(embeds(&a, &b), embeds_oracle(&a, &b).unwrap());
    }

    #[test]
    fn embedding_is_a_partial_order(a in dyck(5), b in dyck(5), c in dyck(5)) {
        prop_assert!(embeds(&a, &a));
        if embeds(&a, &b) && embeds(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if embeds(&a, &b) && embeds(&b, &c) {
            prop_assert!(embeds(&a, &c));
        }
    }

    #[test]
    fn rank_is_monotone(a in dyck(5), b in dyck(7)) {
        if embeds(&a, &b) {
            prop_assert!(rank(&a) <= rank(&b));
            prop_assert!(hat_rank(&a) <= hat_rank(&b));
        }
    }

    #[test]
    fn rank_matches_oracle(w in dyck(7)) {
        prop_assert_eq!(rank(&w), rank_oracle(&w).unwrap());
    }

    #[test]
    fn rank_is_the_largest_embedded_harmonic(w in dyck(8)) {
        let r = rank(&w);
        prop_assert!(embeds(&harmonic(r).unwrap(), &w));
        prop_assert!(!embeds(&harmonic(r + 1).unwrap(), &w));
    }

    #[test]
    fn hat_rank_is_the_largest_embedded_hat_harmonic(w in dyck(8)) {
        let h = hat_rank(&w);
        if h < 0 {
            prop_assert!(w.is_empty());
        } else {
            prop_assert!(embeds(&hat_harmonic(h as usize).unwrap(), &w));
        }
        prop_assert!(!embeds(&hat_harmonic((h + 1) as usize).unwrap(), &w));
    }

    /// hat_k ⪯ h_{k+1} ⪯ hat_{k+1}, so the two ranks never drift apart.
    #[test]
    fn hat_rank_sandwich(w in dyck(8)) {
        if !w.is_empty() {
            let (r, h) = (rank(&w) as i64, hat_rank(&w));
            prop_assert!(h <= r && r <= h + 1, "rank {} hat rank {}", r, h);
        }
    }

    #[test]
    fn wrapping_keeps_rank(w in dyck(7)) {
        prop_assert_eq!(rank(&w.wrap()), rank(&w));
        prop_assert_eq!(rank(&w.concat(&w)) as i64, (hat_rank(&w) + 1).max(0));
    }
}
