use std::collections::BTreeSet;

use oscillation::fixtures;
use oscillation::grammars::{
    cyk, dyck_grammar, parse_trees_for, parse_word, to_cnf, words_up_to, Grammar, GrammarError,
    Rule, Symbol,
};
use oscillation::pda::{accepts, cfg_to_pda, enumerate_runs_with, RunSearch};
use oscillation::trees::{validate_quasi_tree, yield_word};
use proptest::prelude::*;

/// Membership by searching runs of the grammar's translation; `None` when the
/// search was cut short.
fn by_runs(g: &Grammar, w: &[String]) -> Option<bool> {
    accepts(&cfg_to_pda(g), w, 60).unwrap()
}

/// Tight bounds for random grammars, whose ε-cycles make wide searches blow up.
fn by_short_runs(g: &Grammar, w: &[String]) -> Option<bool> {
    let bounds = RunSearch {
        max_moves: 16,
        max_stack: Some(w.len() + 3),
        first_only: true,
    };
    let set = enumerate_runs_with(&cfg_to_pda(g), w, &bounds).unwrap();
    match (set.runs.is_empty(), set.bound_hit) {
        (false, _) => Some(true),
        (true, false) => Some(false),
        (true, true) => None,
    }
}

/// Independent check for the Dyck language over ā/a.
fn balanced(w: &[String]) -> bool {
    let mut depth: i64 = 0;
    for c in w {
        depth += if c == "ā" { 1 } else { -1 };
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

#[test]
fn dyck_grammar_is_unambiguous() {
    let g = dyck_grammar();
    let sigma = vec!["ā".to_string(), "a".to_string()];
    for w in words_up_to(&sigma, 8) {
        let trees = parse_trees_for(&g, &w, 5 * (w.len() / 2) + 2);
        assert_eq!(trees.len(), usize::from(balanced(&w)), "{w:?}");
        for t in trees {
            assert!(validate_quasi_tree(&t, &g));
            assert_eq!(yield_word(&t), w);
        }
    }
}

#[test]
fn translation_accepts_the_grammar_language() {
    let g = dyck_grammar();
    let sigma = vec!["ā".to_string(), "a".to_string()];
    for w in words_up_to(&sigma, 8) {
        assert_eq!(by_runs(&g, &w), Some(balanced(&w)), "{w:?}");
    }
    for (name, g) in fixtures::cnf_corpus() {
        for w in words_up_to(&g.terminal_list(), 6) {
            assert_eq!(by_runs(&g, &w), Some(cyk(&g, &w).unwrap()), "{name} {w:?}");
        }
    }
}

#[test]
fn conversion_keeps_the_expression_language() {
    let src: Grammar = "E -> E p T | T\nT -> T m F | F\nF -> l E r | x"
        .parse()
        .unwrap();
    let cnf = to_cnf(&src).unwrap();
    for w in ["x", "xpx", "xmxpx", "lxpxrmx", "lx", "px", "xx"] {
        let w = parse_word(w);
        let expect = by_runs(&src, &w).expect("bounded search suffices");
        assert_eq!(cyk(&cnf, &w).unwrap(), expect, "{w:?}");
    }
}

/// Small random grammars over {S, A, B} and {a, b}.
fn grammar() -> impl Strategy<Value = Grammar> {
    let sym = prop_oneof![
        Just(Symbol::Var("S".into())),
        Just(Symbol::Var("A".into())),
        Just(Symbol::Var("B".into())),
        Just(Symbol::Term("a".into())),
        Just(Symbol::Term("b".into())),
    ];
    let lhs = prop_oneof![Just("S"), Just("A"), Just("B")];
    let rule = (lhs, prop::collection::vec(sym, 0..=3)).prop_map(|(l, r)| Rule::new(l, r));
    prop::collection::vec(rule, 1..7)
        .prop_filter_map("start needs a rule", |rules| Grammar::new("S", rules).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn conversion_keeps_the_language(g in grammar()) {
        let sigma = vec!["a".to_string(), "b".to_string()];
        let cnf = match to_cnf(&g) {
            Ok(cnf) => cnf,
            Err(GrammarError::EpsilonLanguage) => return Ok(()),
            Err(GrammarError::EmptyLanguage) => {
                for w in words_up_to(&sigma, 4) {
                    prop_assert_ne!(by_short_runs(&g, &w), Some(true));
                }
                return Ok(());
            }
            Err(e) => panic!("{e}"),
        };
        for w in words_up_to(&sigma, 4) {
            if let Some(expect) = by_short_runs(&g, &w) {
                prop_assert_eq!(cyk(&cnf, &w).unwrap(), expect, "{:?}", w);
            }
        }
    }

    #[test]
    fn text_round_trip(g in grammar()) {
        // the printer groups rules by left-hand side, so compare rule sets
        let back: Grammar = g.to_string().parse().unwrap();
        let rules = |g: &Grammar| g.rules.iter().cloned().collect::<BTreeSet<_>>();
        prop_assert_eq!(rules(&back), rules(&g));
        prop_assert_eq!((&back.start, &back.variables, &back.terminals), (&g.start, &g.variables, &g.terminals));
    }
}
