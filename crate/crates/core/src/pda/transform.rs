//! CFG-to-PDA translation and the two-step pipeline into reduced form
//! (one state; every action pops or pushes exactly two symbols).

use std::collections::{BTreeSet, HashSet};

use crate::grammars::Grammar;

use super::{Action, Pda, PdaError, StackSymbol};

fn fresh(used: &HashSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while used.contains(&name) {
        name.push('\'');
    }
    name
}

/// Single-state automaton that expands variables by their rules and matches
/// terminals against the input. ε-rules push a fresh dummy symbol `e` that is
/// popped by an ε-move, so every tree node becomes exactly one move.
pub fn cfg_to_pda(g: &Grammar) -> Pda {
    let used: HashSet<String> = g.variables.iter().chain(&g.terminals).cloned().collect();
    let e = fresh(&used, "e");
    let q = "q";
    let mut actions = Vec::new();
    for r in &g.rules {
        let push = if r.rhs.is_empty() {
            vec![e.clone()]
        } else {
            r.rhs.iter().map(|s| s.name().to_string()).collect()
        };
        actions.push(Action::new(q, None, r.lhs.clone(), q, push));
    }
    for b in &g.terminals {
        actions.push(Action::new(q, Some(b), b.clone(), q, Vec::new()));
    }
    actions.push(Action::new(q, None, e, q, Vec::new()));
    let mut p = Pda::new(q, g.start.clone(), actions);
    p.input_alphabet.extend(g.terminals.iter().cloned());
    p.stack_alphabet.extend(g.variables.iter().cloned());
    p
}

/// Rewrites every action so that it pops or pushes exactly two symbols.
///
/// A push of one symbol also pushes a fresh dummy on top, which a fresh
/// intermediate state pops at once. A push of `n ≥ 3` symbols pushes the top
/// symbol over a fresh stand-in for the other `n − 1`; once the stand-in
/// surfaces it is expanded by an ε-move in whatever state the machine is in.
/// Nesting the stand-in below (rather than above, which is simpler) keeps
/// the oscillation of every run unchanged.
pub fn split_actions(p: &Pda) -> Pda {
    let mut used: HashSet<String> = p.states.iter().chain(&p.stack_alphabet).cloned().collect();
    let dummy = fresh(&used, "D%");
    used.insert(dummy.clone());
    let mut out = Vec::new();
    for (i, a) in p.actions.iter().enumerate() {
        match a.push.len() {
            0 | 2 => out.push(a.clone()),
            1 => {
                let mid = fresh(&used, &format!("{}%{i}", a.to));
                used.insert(mid.clone());
                out.push(Action {
                    to: mid.clone(),
                    push: vec![dummy.clone(), a.push[0].clone()],
                    ..a.clone()
                });
                out.push(Action::new(
                    mid,
                    None,
                    dummy.clone(),
                    a.to.clone(),
                    Vec::new(),
                ));
            }
            n => {
                let stand_ins: Vec<String> = (1..n - 1)
                    .map(|j| {
                        let g = fresh(&used, &format!("{}%{i}.{j}", a.pop));
                        used.insert(g.clone());
                        g
                    })
                    .collect();
                out.push(Action {
                    push: vec![a.push[0].clone(), stand_ins[0].clone()],
                    ..a.clone()
                });
                for (j, g) in stand_ins.iter().enumerate() {
                    let below = stand_ins.get(j + 1).unwrap_or(&a.push[n - 1]);
                    for r in &p.states {
                        out.push(Action::new(
                            r,
                            None,
                            g.clone(),
                            r,
                            vec![a.push[j + 1].clone(), below.clone()],
                        ));
                    }
                }
            }
        }
    }
    let mut q = Pda::new(p.start_state.clone(), p.start_stack.clone(), out);
    q.input_alphabet.extend(p.input_alphabet.iter().cloned());
    q
}

fn triple(p: &str, g: &str, r: &str) -> String {
    format!("[{p}|{g}|{r}]")
}

/// Folds the states into triple stack symbols `[p|γ|r]` ("in state `p` with
/// `γ` on top, ending in state `r` once `γ` is gone"). The result has the
/// source's start state as its only state and is trimmed.
pub fn to_reduced(p: &Pda) -> Result<Pda, PdaError> {
    if let Some(bad) = p.actions.iter().find(|a| !matches!(a.push.len(), 0 | 2)) {
        return Err(PdaError::Shape(bad.to_string()));
    }
    let q = p.start_state.clone();
    let states: Vec<&String> = p.states.iter().collect();
    let mut actions = Vec::new();
    for a in &p.actions {
        let read = a.read.as_deref();
        if a.is_pop() {
            actions.push(Action::new(
                &q,
                read,
                triple(&a.from, &a.pop, &a.to),
                &q,
                Vec::new(),
            ));
            continue;
        }
        for r in &states {
            for s in &states {
                actions.push(Action::new(
                    &q,
                    read,
                    triple(&a.from, &a.pop, r),
                    &q,
                    vec![triple(&a.to, &a.push[0], s), triple(s, &a.push[1], r)],
                ));
            }
        }
    }
    let start = if states.len() == 1 {
        triple(&q, &p.start_stack, &q)
    } else {
        let used: HashSet<String> = actions.iter().map(|a| a.pop.clone()).collect();
        let start = fresh(&used, "[%start]");
        let firsts: BTreeSet<String> = states
            .iter()
            .map(|r| triple(&q, &p.start_stack, r))
            .collect();
        let copies: Vec<Action> = actions
            .iter()
            .filter(|a| firsts.contains(&a.pop))
            .map(|a| Action {
                pop: start.clone(),
                ..a.clone()
            })
            .collect();
        actions.extend(copies);
        start
    };
    let mut out = Pda::new(q, start, actions);
    out.input_alphabet.extend(p.input_alphabet.iter().cloned());
    Ok(trim(&out))
}

pub fn is_reduced<G: StackSymbol>(p: &Pda<G>) -> bool {
    p.states.len() == 1 && p.actions.iter().all(|a| matches!(a.push.len(), 0 | 2))
}

/// `to_reduced ∘ split_actions`.
pub fn reduce_pipeline(p: &Pda) -> Pda {
    to_reduced(&split_actions(p)).expect("split actions push two symbols or pop")
}

/// Drops symbols that can never be emptied or never reached from the start
/// symbol, together with the actions mentioning them. The start symbol, the
/// start state and the input alphabet always stay.
pub fn trim<G: StackSymbol>(p: &Pda<G>) -> Pda<G> {
    let mut productive: HashSet<&G> = HashSet::new();
    loop {
        let before = productive.len();
        for a in &p.actions {
            if a.push.iter().all(|g| productive.contains(g)) {
                productive.insert(&a.pop);
            }
        }
        if productive.len() == before {
            break;
        }
    }
    let live = |a: &Action<G>| {
        productive.contains(&a.pop) && a.push.iter().all(|g| productive.contains(g))
    };
    let mut reachable: HashSet<&G> = HashSet::from([&p.start_stack]);
    let mut todo = vec![&p.start_stack];
    while let Some(g) = todo.pop() {
        for a in p.actions.iter().filter(|a| &a.pop == g && live(a)) {
            for x in &a.push {
                if reachable.insert(x) {
                    todo.push(x);
                }
            }
        }
    }
    let kept: Vec<Action<G>> = p
        .actions
        .iter()
        .filter(|a| live(a) && reachable.contains(&a.pop))
        .cloned()
        .collect();
    let mut out = Pda::new(p.start_state.clone(), p.start_stack.clone(), kept);
    out.input_alphabet.extend(p.input_alphabet.iter().cloned());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammars::{dyck_grammar, parse_word, words_up_to};
    use crate::pda::tests::example9;
    use crate::pda::{accepts, enumerate_runs, run_oscillation};

    #[test]
    fn cfg_to_pda_actions() {
        let p = cfg_to_pda(&dyck_grammar());
        let text = p.to_string();
        assert!(text.contains("q, _, S -> q, ā S a S"));
        assert!(text.contains("q, _, S -> q, e"));
        assert!(text.contains("q, ā, ā -> q, _"));
        assert!(text.contains("q, _, e -> q, _"));
        assert_eq!(p.states.len(), 1);
    }

    #[test]
    fn cfg_to_pda_dummy_is_fresh() {
        let g: Grammar = "S -> e S | _".parse().unwrap();
        let p = cfg_to_pda(&g);
        assert!(p.stack_alphabet.contains("e'"));
    }

    #[test]
    fn split_long_push() {
        let p: Pda = "p, b, G -> q, X Y Z\nq, _, X -> q, _\nq, _, Y -> q, _\nq, _, Z -> q, _"
            .parse()
            .unwrap();
        let s = split_actions(&p);
        let text = s.to_string();
        assert!(text.contains("p, b, G -> q, X G%0.1"), "{text}");
        assert!(text.contains("q, _, G%0.1 -> q, Y Z"), "{text}");
        assert!(text.contains("p, _, G%0.1 -> p, Y Z"), "{text}");
        assert!(s.actions.iter().all(|a| matches!(a.push.len(), 0 | 2)));
        assert_eq!(accepts(&s, &parse_word("b"), 10).unwrap(), Some(true));
    }

    #[test]
    fn long_push_split_keeps_oscillation() {
        // Stacking the stand-in on top would turn this 1-oscillating run into
        // a 2-oscillating one.
        let p: Pda = "q, _, S -> q, X Y Z\nq, x, X -> q, _\nq, y, Y -> q, _\nq, _, Z -> q, W V\n\
                      q, _, W -> q, M M\nq, m, M -> q, _\nq, v, V -> q, _"
            .parse()
            .unwrap();
        let w = parse_word("xymmv");
        let osc = |p: &Pda| -> Vec<usize> {
            enumerate_runs(p, &w, 30)
                .unwrap()
                .runs
                .iter()
                .map(run_oscillation)
                .collect()
        };
        assert_eq!(osc(&p), vec![1]);
        assert_eq!(osc(&split_actions(&p)), vec![1]);
        assert_eq!(osc(&reduce_pipeline(&p)), vec![1]);
    }

    #[test]
    fn split_single_push() {
        let p: Pda = "p, b, G -> q, X\nq, c, X -> q, _".parse().unwrap();
        let s = split_actions(&p);
        assert_eq!(s.actions.len(), 3);
        assert_eq!(s.actions[0].push, vec!["D%".to_string(), "X".to_string()]);
        assert_eq!(s.actions[1].pop, "D%");
        assert_eq!(s.actions[1].read, None);
        assert_eq!(accepts(&s, &parse_word("bc"), 10).unwrap(), Some(true));
    }

    #[test]
    fn split_keeps_reduced_actions() {
        let p = example9();
        assert_eq!(split_actions(&p).actions, p.actions);
    }

    #[test]
    fn reduced_example9() {
        let r = reduce_pipeline(&example9());
        assert!(is_reduced(&r));
        let sigma = vec!["a".to_string(), "b".to_string()];
        for w in words_up_to(&sigma, 7) {
            let n = w.iter().filter(|c| *c == "a").count();
            let expect = n >= 1
                && w.len() == 2 * n + 1
                && w[..n].iter().all(|c| c == "a")
                && w[n..].iter().all(|c| c == "b");
            assert_eq!(accepts(&r, &w, 20).unwrap(), Some(expect), "{w:?}");
        }
        let runs = enumerate_runs(&r, &parse_word("aabbb"), 20).unwrap().runs;
        assert!(runs.iter().any(|run| run_oscillation(run) == 1));
    }

    #[test]
    fn to_reduced_rejects_bad_shape() {
        let p: Pda = "p, b, G -> q, X".parse().unwrap();
        assert!(matches!(to_reduced(&p), Err(PdaError::Shape(_))));
    }

    #[test]
    fn single_state_renaming() {
        let p: Pda = "q, a, S -> q, S T\nq, b, S -> q, _\nq, c, T -> q, _"
            .parse()
            .unwrap();
        let r = to_reduced(&p).unwrap();
        assert_eq!(r.start_stack, "[q|S|q]");
        assert_eq!(r.actions.len(), p.actions.len());
    }

    #[test]
    fn trim_drops_dead_symbols() {
        let p: Pda = "q, a, S -> q, S X\nq, b, S -> q, _\nq, c, Y -> q, _"
            .parse()
            .unwrap();
        let t = trim(&p);
        assert_eq!(t.actions.len(), 1);
        assert!(!t.stack_alphabet.contains("Y"));
    }
}
