//! Bounded exhaustive search for runs and quasi-runs.

use std::collections::HashMap;

use super::{Id, Pda, PdaError, QuasiRun, StackSymbol};

const INF: u64 = u64::MAX / 4;

/// Limits for run enumeration. `max_stack` defaults to `2|w| + 8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSearch {
    pub max_moves: usize,
    pub max_stack: Option<usize>,
    pub first_only: bool,
}

impl RunSearch {
    pub fn moves(max_moves: usize) -> Self {
        RunSearch {
            max_moves,
            max_stack: None,
            first_only: false,
        }
    }
}

/// Runs found within the bounds. `bound_hit` is set when some branch that
/// might still have completed was cut off by a bound, so the list may be
/// incomplete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSet<G = String> {
    pub runs: Vec<QuasiRun<G>>,
    pub bound_hit: bool,
}

struct Compiled<'a, G> {
    p: &'a Pda<G>,
    states: HashMap<&'a str, usize>,
    symbols: HashMap<&'a G, usize>,
    /// action indices by (state, top symbol)
    table: HashMap<(usize, usize), Vec<usize>>,
    min_input: Vec<u64>,
    min_moves: Vec<u64>,
}

impl<'a, G: StackSymbol> Compiled<'a, G> {
    fn new(p: &'a Pda<G>) -> Self {
        let mut states = HashMap::new();
        for s in p
            .states
            .iter()
            .chain(p.actions.iter().flat_map(|a| [&a.from, &a.to]))
        {
            let n = states.len();
            states.entry(s.as_str()).or_insert(n);
        }
        let mut symbols = HashMap::new();
        let all_syms = p
            .stack_alphabet
            .iter()
            .chain(std::iter::once(&p.start_stack))
            .chain(
                p.actions
                    .iter()
                    .flat_map(|a| std::iter::once(&a.pop).chain(a.push.iter())),
            );
        for g in all_syms {
            let n = symbols.len();
            symbols.entry(g).or_insert(n);
        }
        let mut table: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, a) in p.actions.iter().enumerate() {
            table
                .entry((states[a.from.as_str()], symbols[&a.pop]))
                .or_default()
                .push(i);
        }
        let mut c = Compiled {
            p,
            states,
            symbols,
            table,
            min_input: Vec::new(),
            min_moves: Vec::new(),
        };
        c.min_input = c.lower_bound(|a| u64::from(a.read.is_some()));
        c.min_moves = c.lower_bound(|_| 1);
        c
    }

    /// State-blind least cost to empty each symbol; `INF` when impossible.
    fn lower_bound(&self, cost: impl Fn(&super::Action<G>) -> u64) -> Vec<u64> {
        let mut best = vec![INF; self.symbols.len()];
        loop {
            let mut changed = false;
            for a in &self.p.actions {
                let mut total = cost(a);
                for g in &a.push {
                    total = (total + best[self.symbols[g]]).min(INF);
                }
                let slot = &mut best[self.symbols[&a.pop]];
                if total < *slot {
                    *slot = total;
                    changed = true;
                }
            }
            if !changed {
                return best;
            }
        }
    }
}

struct Search<'a, 'w, G> {
    c: &'a Compiled<'a, G>,
    /// `None` enumerates quasi-runs with unconstrained input.
    word: Option<&'w [String]>,
    max_moves: usize,
    max_stack: usize,
    first_only: bool,
    trail: Vec<usize>,
    found: Vec<Vec<usize>>,
    bound_hit: bool,
}

impl<G: StackSymbol> Search<'_, '_, G> {
    fn done(&self) -> bool {
        self.first_only && !self.found.is_empty()
    }

    /// `stack` keeps its top at the end.
    fn dfs(&mut self, state: usize, pos: usize, stack: &mut Vec<usize>) {
        if self.done() {
            return;
        }
        if stack.is_empty() {
            if self.word.map_or(true, |w| pos == w.len()) {
                self.found.push(self.trail.clone());
            }
            return;
        }
        if let Some(w) = self.word {
            let need: u64 = stack.iter().map(|&g| self.c.min_input[g]).sum();
            if need > (w.len() - pos) as u64 {
                return;
            }
        } else if stack.iter().any(|&g| self.c.min_input[g] >= INF) {
            return;
        }
        let need_moves: u64 = stack.iter().map(|&g| self.c.min_moves[g]).sum();
        if self.trail.len() as u64 + need_moves > self.max_moves as u64
            || stack.len() > self.max_stack
        {
            self.bound_hit = true;
            return;
        }
        let top = *stack.last().expect("non-empty");
        let Some(candidates) = self.c.table.get(&(state, top)) else {
            return;
        };
        for &ai in candidates {
            let a = &self.c.p.actions[ai];
            let next_pos = match (&a.read, self.word) {
                (None, _) => pos,
                (Some(_), None) => pos + 1,
                (Some(b), Some(w)) => {
                    if w.get(pos) != Some(b) {
                        continue;
                    }
                    pos + 1
                }
            };
            stack.pop();
            for g in a.push.iter().rev() {
                stack.push(self.c.symbols[g]);
            }
            self.trail.push(ai);
            self.dfs(self.c.states[a.to.as_str()], next_pos, stack);
            self.trail.pop();
            stack.truncate(stack.len() - a.push.len());
            stack.push(top);
            if self.done() {
                return;
            }
        }
    }
}

fn materialize<G: StackSymbol>(
    p: &Pda<G>,
    start: Id<G>,
    trails: Vec<Vec<usize>>,
) -> Result<Vec<QuasiRun<G>>, PdaError> {
    trails
        .into_iter()
        .map(|t| {
            let acts = t.into_iter().map(|i| p.actions[i].clone()).collect();
            QuasiRun::replay(start.clone(), acts)
        })
        .collect()
}

pub fn enumerate_runs<G: StackSymbol>(
    p: &Pda<G>,
    w: &[String],
    max_moves: usize,
) -> Result<RunSet<G>, PdaError> {
    enumerate_runs_with(p, w, &RunSearch::moves(max_moves))
}

pub fn enumerate_runs_with<G: StackSymbol>(
    p: &Pda<G>,
    w: &[String],
    bounds: &RunSearch,
) -> Result<RunSet<G>, PdaError> {
    if bounds.max_moves == 0 {
        return Err(PdaError::ZeroMoves);
    }
    let c = Compiled::new(p);
    let mut s = Search {
        c: &c,
        word: Some(w),
        max_moves: bounds.max_moves,
        max_stack: bounds.max_stack.unwrap_or(2 * w.len() + 8),
        first_only: bounds.first_only,
        trail: Vec::new(),
        found: Vec::new(),
        bound_hit: false,
    };
    let mut stack = vec![c.symbols[&p.start_stack]];
    s.dfs(c.states[p.start_state.as_str()], 0, &mut stack);
    let bound_hit = s.bound_hit && !(bounds.first_only && !s.found.is_empty());
    Ok(RunSet {
        runs: materialize(p, p.initial_id(w), s.found)?,
        bound_hit,
    })
}

/// `Some(verdict)` when the search is conclusive, `None` when a bound was hit
/// before any run was found.
pub fn accepts<G: StackSymbol>(
    p: &Pda<G>,
    w: &[String],
    max_moves: usize,
) -> Result<Option<bool>, PdaError> {
    let set = enumerate_runs_with(
        p,
        w,
        &RunSearch {
            max_moves,
            max_stack: None,
            first_only: true,
        },
    )?;
    Ok(match (set.runs.is_empty(), set.bound_hit) {
        (false, _) => Some(true),
        (true, false) => Some(false),
        (true, true) => None,
    })
}

/// All quasi-runs from `(state, [symbol])` with at most `max_moves` moves,
/// whatever input they read. Each ID's tape is the rest of the input the
/// quasi-run consumes.
pub fn enumerate_quasi_runs<G: StackSymbol>(
    p: &Pda<G>,
    state: &str,
    symbol: &G,
    max_moves: usize,
) -> Result<RunSet<G>, PdaError> {
    if max_moves == 0 {
        return Err(PdaError::ZeroMoves);
    }
    let c = Compiled::new(p);
    let (Some(&si), Some(&gi)) = (c.states.get(state), c.symbols.get(symbol)) else {
        return Ok(RunSet {
            runs: Vec::new(),
            bound_hit: false,
        });
    };
    let mut s = Search {
        c: &c,
        word: None,
        max_moves,
        max_stack: max_moves + 1,
        first_only: false,
        trail: Vec::new(),
        found: Vec::new(),
        bound_hit: false,
    };
    s.dfs(si, 0, &mut vec![gi]);
    let mut runs = Vec::with_capacity(s.found.len());
    for t in s.found {
        let acts: Vec<_> = t.into_iter().map(|i| p.actions[i].clone()).collect();
        let tape: Vec<String> = acts.iter().filter_map(|a| a.read.clone()).collect();
        let start = Id {
            state: state.to_string(),
            tape,
            stack: vec![symbol.clone()],
        };
        runs.push(QuasiRun::replay(start, acts)?);
    }
    Ok(RunSet {
        runs,
        bound_hit: s.bound_hit,
    })
}
