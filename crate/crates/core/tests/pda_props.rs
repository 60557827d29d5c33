mod common;

use common::{general_pda, oscillations, reduced_pda, runs, sigma};
use oscillation::dyck::{embeds, harmonic, hat_harmonic, rank, DyckWord};
use oscillation::grammars::words_up_to;
use oscillation::pda::{
    disassemble, enumerate_quasi_runs, is_reduced, reassemble, reduce_pipeline, run_footprint,
    run_oscillation, run_stack_height, split_actions,
};
use proptest::prelude::*;

fn h(k: usize) -> DyckWord {
    harmonic(k).unwrap()
}

fn hh(k: usize) -> DyckWord {
    hat_harmonic(k).unwrap()
}

/// The two disjuncts of the decomposition lemma, with the second half of the
/// second one either as published or with the missing conjunct added.
fn lemma(a1: &DyckWord, a2: &DyckWord, k: usize, complete: bool) -> bool {
    let first = k >= 1
        && embeds(&h(k - 1), a1)
        && embeds(&hh(k - 1), a2)
        && !embeds(&h(k), a1)
        && !embeds(&h(k), a2);
    let left = embeds(&h(k), a1) && !embeds(&h(k + 1), a1) && !embeds(&hh(k), a2);
    let right = if complete {
        embeds(&h(k), a2) && !embeds(&h(k + 1), a2) && !embeds(&h(k), a1)
    } else {
        embeds(&h(k), a2) && !embeds(&hh(k), a2) && !embeds(&h(k + 1), a1)
    };
    first || left || right
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn footprint_has_two_letters_per_move(p in reduced_pda()) {
        for w in words_up_to(&sigma(), 3) {
            for r in runs(&p, &w, 12).unwrap_or_default() {
                prop_assert_eq!(run_footprint(&r).len(), 2 * r.moves());
                prop_assert_eq!(rank(&run_footprint(&r)), run_oscillation(&r));
                prop_assert!(run_oscillation(&r) <= run_stack_height(&r));
            }
        }
    }

    #[test]
    fn disassembly_round_trips(p in reduced_pda()) {
        for r in enumerate_quasi_runs(&p, "q", &"S".to_string(), 9).unwrap().runs {
            if r.moves() > 1 {
                let d = disassemble(&r).unwrap();
                prop_assert_eq!(d.parts.len(), 2);
                prop_assert_eq!(reassemble(&d).unwrap(), r);
            }
        }
    }

    /// The published statement is sound; the completed one is exact.
    #[test]
    fn decomposition_lemma(p in reduced_pda()) {
        for g in common::SYMBOLS {
            for r in enumerate_quasi_runs(&p, "q", &g.to_string(), 11).unwrap().runs {
                if r.moves() < 2 {
                    continue;
                }
                let d = disassemble(&r).unwrap();
                let (a1, a2) = (run_footprint(&d.parts[0]), run_footprint(&d.parts[1]));
                let osc = run_oscillation(&r);
                for k in 0..=osc + 1 {
                    prop_assert_eq!(lemma(&a1, &a2, k, true), osc == k, "k = {} on {}", k, r);
                    if lemma(&a1, &a2, k, false) {
                        prop_assert_eq!(osc, k);
                    }
                }
            }
        }
    }

    #[test]
    fn pipeline_keeps_oscillations(p in general_pda()) {
        let r = reduce_pipeline(&p);
        prop_assert!(is_reduced(&r));
        prop_assert!(split_actions(&p).actions.iter().all(|a| matches!(a.push.len(), 0 | 2)));
        for w in words_up_to(&sigma(), 3) {
            if let (Some(a), Some(b)) = (oscillations(&p, &w, 10), oscillations(&r, &w, 40)) {
                prop_assert_eq!(a, b, "{:?}", w);
            }
        }
    }
}

/// A pop followed by a 1-oscillating quasi-run with a single top component:
/// oscillation 1, yet none of the published disjuncts applies.
#[test]
fn published_lemma_misses_a_hat_second_half() {
    use oscillation::pda::Pda;
    let p: Pda = "q, a, S -> q, X Y\nq, b, X -> q, _\nq, a, Y -> q, W X\nq, _, W -> q, X X"
        .parse()
        .unwrap();
    let run = runs(&p, &oscillation::grammars::parse_word("ababbb"), 10)
        .unwrap()
        .remove(0);
    let d = disassemble(&run).unwrap();
    let (a1, a2) = (run_footprint(&d.parts[0]), run_footprint(&d.parts[1]));
    assert_eq!(run_oscillation(&run), 1);
    assert!(!lemma(&a1, &a2, 1, false));
    assert!(lemma(&a1, &a2, 1, true));
}
