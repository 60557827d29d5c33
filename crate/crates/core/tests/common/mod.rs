#![allow(dead_code)]

use std::collections::BTreeSet;

use oscillation::pda::{
    enumerate_runs_with, run_oscillation, Action, Pda, QuasiRun, RunSearch, StackSymbol,
};
use proptest::prelude::*;

pub const SYMBOLS: [&str; 3] = ["S", "A", "B"];

pub fn sigma() -> Vec<String> {
    vec!["a".to_string(), "b".to_string()]
}

fn read() -> impl Strategy<Value = Option<&'static str>> {
    prop_oneof![Just(None), Just(Some("a")), Just(Some("b"))]
}

fn symbol() -> impl Strategy<Value = &'static str> {
    prop::sample::select(SYMBOLS.to_vec())
}

/// Reduced automata over `S, A, B` with start symbol `S`.
pub fn reduced_pda() -> impl Strategy<Value = Pda> {
    let pop =
        (read(), symbol()).prop_map(|(b, g)| Action::new("q", b, g.to_string(), "q", Vec::new()));
    let push = (read(), symbol(), symbol(), symbol()).prop_map(|(b, g, x, y)| {
        Action::new(
            "q",
            b,
            g.to_string(),
            "q",
            vec![x.to_string(), y.to_string()],
        )
    });
    (
        prop::collection::vec(pop, 1..4),
        prop::collection::vec(push, 1..5),
    )
        .prop_map(|(pops, pushes)| {
            let mut p = Pda::new(
                "q",
                "S".to_string(),
                pops.into_iter().chain(pushes).collect(),
            );
            p.input_alphabet.extend(sigma());
            p
        })
}

/// Automata with two states and pushes of zero to three symbols.
pub fn general_pda() -> impl Strategy<Value = Pda> {
    let state = prop::sample::select(vec!["p", "r"]);
    let action = (
        state.clone(),
        read(),
        symbol(),
        state,
        prop::collection::vec(symbol(), 0..=3),
    )
        .prop_map(|(from, b, g, to, push)| {
            Action::new(
                from,
                b,
                g.to_string(),
                to,
                push.into_iter().map(str::to_string).collect(),
            )
        });
    prop::collection::vec(action, 2..7).prop_map(|acts| {
        let mut p = Pda::new("p", "S".to_string(), acts);
        p.input_alphabet.extend(sigma());
        p
    })
}

/// Runs on `w` within small bounds; `None` if a bound cut the search.
pub fn runs<G: StackSymbol>(
    p: &Pda<G>,
    w: &[String],
    max_moves: usize,
) -> Option<Vec<QuasiRun<G>>> {
    let bounds = RunSearch {
        max_moves,
        max_stack: Some(w.len() + 4),
        first_only: false,
    };
    let set = enumerate_runs_with(p, w, &bounds).unwrap();
    (!set.bound_hit).then_some(set.runs)
}

pub fn oscillations<G: StackSymbol>(
    p: &Pda<G>,
    w: &[String],
    max_moves: usize,
) -> Option<BTreeSet<usize>> {
    runs(p, w, max_moves).map(|rs| rs.iter().map(run_oscillation).collect())
}
