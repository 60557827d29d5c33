//! The level-annotated automaton whose runs are exactly the k-oscillating
//! runs of a source automaton, its size accounting, and the union of two
//! reduced automata.
//!
//! A quasi-run `r` of a reduced automaton that starts by pushing two symbols
//! splits into sub-runs `r1`, `r2`, and the top-level components of its
//! footprint are those of `α(r2)` plus one component of dimension
//! `osc(r1)`. Writing `C(r)` for that multiset, `osc(r)` is its Strahler
//! combination and `max C(r)` is the hat-rank. Each annotated symbol records
//! the class of the quasi-run that will empty it:
//!
//! * [`Mark::Plain`] level `d`: `osc = d`;
//! * [`Mark::Hat`] level `d`: `max C = d`, attained once;
//! * [`Mark::Tied`] level `d`: `max C = d − 1`, attained at least twice.
//!
//! Plain is the disjoint union of Hat and Tied at the same level.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::pda::{is_reduced, Action, Pda, PdaError, QuasiRun, StackSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Plain,
    Hat,
    Tied,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnotatedSymbol<G = String> {
    pub base: G,
    pub level: usize,
    pub mark: Mark,
}

impl<G> AnnotatedSymbol<G> {
    pub fn new(base: G, level: usize, mark: Mark) -> Self {
        AnnotatedSymbol { base, level, mark }
    }

    pub fn hat(&self) -> bool {
        self.mark == Mark::Hat
    }
}

/// Level and hat flag of an annotated symbol.
pub fn annot<G>(s: &AnnotatedSymbol<G>) -> (usize, bool) {
    (s.level, s.hat())
}

impl<G: fmt::Display> fmt::Display for AnnotatedSymbol<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.mark {
            Mark::Plain => "^",
            Mark::Hat => "^^",
            Mark::Tied => "^=",
        };
        write!(f, "{}{tag}{}", self.base, self.level)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not an annotated symbol (expected BASE^d, BASE^^d or BASE^=d)")]
pub struct AnnotationParseError(pub String);

impl<G: FromStr> FromStr for AnnotatedSymbol<G> {
    type Err = AnnotationParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AnnotationParseError(s.to_string());
        let (head, digits) = s.rsplit_once('^').ok_or_else(err)?;
        let (head, mark, digits) = if let Some(d) = digits.strip_prefix('=') {
            (head, Mark::Tied, d)
        } else if let Some(h) = head.strip_suffix('^') {
            (h, Mark::Hat, digits)
        } else {
            (head, Mark::Plain, digits)
        };
        let level = digits.parse().map_err(|_| err())?;
        let base = head.parse().map_err(|_| err())?;
        if head.is_empty() {
            return Err(err());
        }
        Ok(AnnotatedSymbol { base, level, mark })
    }
}

/// Which case table to use for pushes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rules {
    /// The five push cases exactly as published; misses quasi-runs whose
    /// second sub-run is tied at the level of the first.
    Printed,
    /// The printed cases plus the tied mark and the rows it needs.
    Completed,
}

/// One push row: annotation of the popped symbol, then of the two pushed
/// symbols (top first).
pub type Row = [(usize, Mark); 3];

/// Annotations under which a pop action is kept.
pub fn pop_marks() -> [(usize, Mark); 2] {
    [(0, Mark::Plain), (0, Mark::Hat)]
}

/// All push rows for levels `1..=k`.
pub fn push_rows(rules: Rules, k: usize) -> Vec<Row> {
    use Mark::{Hat, Plain, Tied};
    let mut rows = Vec::new();
    for d in 1..=k {
        for l in 0..d {
            rows.push([(d, Hat), (d, Plain), (l, Plain)]);
            rows.push([(d, Hat), (l, Plain), (d, Hat)]);
            rows.push([(d, Plain), (d, Plain), (l, Plain)]);
            rows.push([(d, Plain), (l, Plain), (d, Plain)]);
        }
        rows.push([(d, Plain), (d - 1, Plain), (d - 1, Hat)]);
        if rules == Rules::Completed {
            rows.push([(d, Hat), (d, Plain), (d, Tied)]);
            rows.push([(d, Plain), (d, Plain), (d, Tied)]);
            rows.push([(d, Tied), (d - 1, Plain), (d - 1, Hat)]);
            for l in 0..d {
                rows.push([(d, Tied), (l, Plain), (d, Tied)]);
            }
        }
    }
    rows
}

/// Stack alphabet of the construction: plain and hat copies at every level,
/// plus tied copies at levels `1..=k` for the completed rules.
pub fn annotated_alphabet<G: StackSymbol>(
    gamma: &BTreeSet<G>,
    k: usize,
    rules: Rules,
) -> BTreeSet<AnnotatedSymbol<G>> {
    let mut out = BTreeSet::new();
    for g in gamma {
        for d in 0..=k {
            out.insert(AnnotatedSymbol::new(g.clone(), d, Mark::Plain));
            out.insert(AnnotatedSymbol::new(g.clone(), d, Mark::Hat));
            if rules == Rules::Completed && d >= 1 {
                out.insert(AnnotatedSymbol::new(g.clone(), d, Mark::Tied));
            }
        }
    }
    out
}

fn build<G: StackSymbol>(
    p: &Pda<G>,
    k: usize,
    rules: Rules,
) -> Result<Pda<AnnotatedSymbol<G>>, PdaError> {
    if !is_reduced(p) {
        return Err(PdaError::NotReduced(
            "expected one state and actions that pop or push two symbols".into(),
        ));
    }
    let ann = |g: &G, (level, mark): (usize, Mark)| AnnotatedSymbol::new(g.clone(), level, mark);
    let mut actions = Vec::new();
    let rows = push_rows(rules, k);
    for a in &p.actions {
        if a.is_pop() {
            for m in pop_marks() {
                actions.push(Action {
                    from: a.from.clone(),
                    read: a.read.clone(),
                    pop: ann(&a.pop, m),
                    to: a.to.clone(),
                    push: Vec::new(),
                });
            }
        } else {
            for [lhs, first, second] in &rows {
                actions.push(Action {
                    from: a.from.clone(),
                    read: a.read.clone(),
                    pop: ann(&a.pop, *lhs),
                    to: a.to.clone(),
                    push: vec![ann(&a.push[0], *first), ann(&a.push[1], *second)],
                });
            }
        }
    }
    actions.sort();
    let mut out = Pda::new(
        p.start_state.clone(),
        AnnotatedSymbol::new(p.start_stack.clone(), k, Mark::Plain),
        actions,
    );
    out.states.extend(p.states.iter().cloned());
    out.input_alphabet.extend(p.input_alphabet.iter().cloned());
    out.stack_alphabet = annotated_alphabet(&p.stack_alphabet, k, rules);
    Ok(out)
}

/// The construction for reduced automata with the published case table.
pub fn k_pda_reduced<G: StackSymbol>(
    p: &Pda<G>,
    k: usize,
) -> Result<Pda<AnnotatedSymbol<G>>, PdaError> {
    build(p, k, Rules::Printed)
}

/// The construction for reduced automata with the completed case table; its
/// language is exactly the set of words with a k-oscillating run.
pub fn k_pda_complete<G: StackSymbol>(
    p: &Pda<G>,
    k: usize,
) -> Result<Pda<AnnotatedSymbol<G>>, PdaError> {
    build(p, k, Rules::Completed)
}

/// Drops the annotations from a run of an annotated automaton.
pub fn erase_run<G: StackSymbol>(
    r: &QuasiRun<AnnotatedSymbol<G>>,
) -> Result<QuasiRun<G>, PdaError> {
    let strip = |a: &Action<AnnotatedSymbol<G>>| Action {
        from: a.from.clone(),
        read: a.read.clone(),
        pop: a.pop.base.clone(),
        to: a.to.clone(),
        push: a.push.iter().map(|s| s.base.clone()).collect(),
    };
    let first = &r.ids()[0];
    let start = crate::pda::Id {
        state: first.state.clone(),
        tape: first.tape.clone(),
        stack: first.stack.iter().map(|s| s.base.clone()).collect(),
    };
    QuasiRun::replay(start, r.actions().iter().map(strip).collect())
}

/// Visits every subset of `0..n` with at least two elements, as sorted vectors.
fn subsets_of_size_two_or_more(n: usize, mut visit: impl FnMut(&[usize])) {
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() >= 2 {
            let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            visit(&set);
        }
    }
}

/// Every assignment of a level in `0..bound` to each position of `free`.
fn level_assignments(free: &[usize], bound: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    for &j in free {
        let mut next = Vec::with_capacity(out.len() * bound);
        for partial in &out {
            for lvl in 0..bound {
                let mut v = partial.clone();
                v.push((j, lvl));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// The construction for arbitrary automata (several states, pushes of any
/// length), following the published general definition literally.
pub fn k_pda_general<G: StackSymbol>(p: &Pda<G>, k: usize) -> Pda<AnnotatedSymbol<G>> {
    let ann = |g: &G, level: usize, mark: Mark| AnnotatedSymbol::new(g.clone(), level, mark);
    let mut actions = Vec::new();
    for a in &p.actions {
        let with = |pop: AnnotatedSymbol<G>, push: Vec<AnnotatedSymbol<G>>| Action {
            from: a.from.clone(),
            read: a.read.clone(),
            pop,
            to: a.to.clone(),
            push,
        };
        let n = a.push.len();
        match n {
            0 => {
                actions.push(with(ann(&a.pop, 0, Mark::Plain), Vec::new()));
                actions.push(with(ann(&a.pop, 0, Mark::Hat), Vec::new()));
            }
            1 => {
                for d in 1..=k {
                    for m in [Mark::Plain, Mark::Hat] {
                        actions.push(with(ann(&a.pop, d, m), vec![ann(&a.push[0], d, m)]));
                    }
                }
            }
            _ => {
                for d in 1..=k {
                    // (a) and (b): a set I of positions at level d − 1, one of
                    // them (not the first) hatted, the rest strictly lower
                    for (lhs, allow_last) in [(Mark::Plain, true), (Mark::Hat, false)] {
                        subsets_of_size_two_or_more(n, |set| {
                            if !allow_last && set.contains(&(n - 1)) {
                                return;
                            }
                            let free: Vec<usize> = (0..n).filter(|i| !set.contains(i)).collect();
                            for &hat_at in &set[1..] {
                                for lower in level_assignments(&free, d - 1) {
                                    let mut push: Vec<AnnotatedSymbol<G>> = (0..n)
                                        .map(|i| {
                                            let m =
                                                if i == hat_at { Mark::Hat } else { Mark::Plain };
                                            ann(&a.push[i], d - 1, m)
                                        })
                                        .collect();
                                    for (j, lvl) in lower {
                                        push[j] = ann(&a.push[j], lvl, Mark::Plain);
                                    }
                                    actions.push(with(ann(&a.pop, d, lhs), push));
                                }
                            }
                        });
                    }
                    // (c): one position at level d, the rest strictly lower
                    for lhs in [Mark::Plain, Mark::Hat] {
                        for top in 0..n {
                            let free: Vec<usize> = (0..n).filter(|&i| i != top).collect();
                            let m = if top == n - 1 && lhs == Mark::Hat {
                                Mark::Hat
                            } else {
                                Mark::Plain
                            };
                            for lower in level_assignments(&free, d) {
                                let mut push: Vec<AnnotatedSymbol<G>> =
                                    a.push.iter().map(|g| ann(g, d, m)).collect();
                                for (j, lvl) in lower {
                                    push[j] = ann(&a.push[j], lvl, Mark::Plain);
                                }
                                actions.push(with(ann(&a.pop, d, lhs), push));
                            }
                        }
                    }
                }
            }
        }
    }
    actions.sort();
    actions.dedup();
    let mut out = Pda::new(
        p.start_state.clone(),
        AnnotatedSymbol::new(p.start_stack.clone(), k, Mark::Plain),
        actions,
    );
    out.states.extend(p.states.iter().cloned());
    out.input_alphabet.extend(p.input_alphabet.iter().cloned());
    out.stack_alphabet = annotated_alphabet(&p.stack_alphabet, k, Rules::Printed);
    out
}

fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The published closed form for the number of actions of the general
/// construction, for `m1` pops, `m2` single pushes and `m3` pushes of length
/// `n`. Evaluated as printed, including its known inconsistencies.
pub fn expected_action_count_general(m1: u128, m2: u128, m3: u128, n: u128, k: u128) -> u128 {
    let mut bracket: u128 = 0;
    if m3 > 0 {
        for d in 2..=k {
            for l in 2..=n {
                bracket += 2 * binomial(n, l) * (l - 1) * (d - 1).pow((n - l) as u32);
            }
        }
        bracket += n.saturating_sub(2);
        for d in 1..=k {
            bracket += 2 * n * d.pow((n - 1) as u32);
        }
    }
    2 * m1 + 2 * k * m2 + m3 * bracket
}

/// Number of push actions the reduced construction creates per source push.
pub fn push_row_count(rules: Rules, k: usize) -> usize {
    push_rows(rules, k).len()
}

/// Union of two reduced automata: symbols are tagged `1:` and `2:`, and a
/// fresh start symbol `S_u` copies the actions on both start symbols.
pub fn union(p1: &Pda, p2: &Pda) -> Result<Pda, PdaError> {
    for p in [p1, p2] {
        if !is_reduced(p) {
            return Err(PdaError::NotReduced("both operands must be reduced".into()));
        }
    }
    let q = "q";
    let start = "S_u".to_string();
    let mut actions = Vec::new();
    for (tag, p) in [("1", p1), ("2", p2)] {
        let t = |g: &String| format!("{tag}:{g}");
        for a in &p.actions {
            let tagged = Action {
                from: q.to_string(),
                read: a.read.clone(),
                pop: t(&a.pop),
                to: q.to_string(),
                push: a.push.iter().map(t).collect(),
            };
            if a.pop == p.start_stack {
                actions.push(Action {
                    pop: start.clone(),
                    ..tagged.clone()
                });
            }
            actions.push(tagged);
        }
    }
    let mut out = Pda::new(q, start, actions);
    out.input_alphabet.extend(p1.input_alphabet.iter().cloned());
    out.input_alphabet.extend(p2.input_alphabet.iter().cloned());
    Ok(out)
}
