//! k-emptiness and k-membership by finite fixpoints over annotated symbols,
//! plain emptiness, the graph-reachability reduction, and stack heights.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::kconstruct::{pop_marks, push_rows, Mark, Rules};
use crate::pda::{
    enumerate_runs, is_reduced, run_stack_height, Action, Pda, PdaError, QuasiRun, StackSymbol,
};

/// A stack symbol together with the annotation a query asks about.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueryKey<G = String> {
    pub symbol: G,
    pub level: usize,
    pub mark: Mark,
}

impl<G: fmt::Display> fmt::Display for QueryKey<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.mark {
            Mark::Plain => "",
            Mark::Hat => "^",
            Mark::Tied => "=",
        };
        write!(f, "query({}, {}, {tag})", self.symbol, self.level)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptinessReport<G = String> {
    /// Whether a k-oscillating run exists.
    pub nonempty: bool,
    /// Every key with a quasi-run of the class it names.
    pub productive: BTreeSet<QueryKey<G>>,
    /// Size of the productive set after each round; the last round adds nothing.
    pub growth: Vec<usize>,
}

impl<G> EmptinessReport<G> {
    pub fn iterations(&self) -> usize {
        self.growth.len()
    }
}

fn require_reduced<G: StackSymbol>(p: &Pda<G>) -> Result<(), PdaError> {
    if is_reduced(p) {
        Ok(())
    } else {
        Err(PdaError::NotReduced(
            "expected one state and actions that pop or push two symbols".into(),
        ))
    }
}

/// Least fixpoint of the query recursion over all keys up to level `k`.
pub fn k_emptiness_report<G: StackSymbol>(
    p: &Pda<G>,
    k: usize,
    rules: Rules,
) -> Result<EmptinessReport<G>, PdaError> {
    require_reduced(p)?;
    let key = |g: &G, (level, mark): (usize, Mark)| QueryKey {
        symbol: g.clone(),
        level,
        mark,
    };
    let rows = push_rows(rules, k);
    let mut productive: BTreeSet<QueryKey<G>> = BTreeSet::new();
    let mut growth = Vec::new();
    loop {
        let before = productive.len();
        for a in &p.actions {
            if a.is_pop() {
                for m in pop_marks() {
                    productive.insert(key(&a.pop, m));
                }
                continue;
            }
            for [lhs, first, second] in &rows {
                if productive.contains(&key(&a.push[0], *first))
                    && productive.contains(&key(&a.push[1], *second))
                {
                    productive.insert(key(&a.pop, *lhs));
                }
            }
        }
        growth.push(productive.len());
        if productive.len() == before {
            break;
        }
    }
    let nonempty = productive.contains(&key(&p.start_stack, (k, Mark::Plain)));
    Ok(EmptinessReport {
        nonempty,
        productive,
        growth,
    })
}

/// Whether the reduced automaton `p` has a run of oscillation exactly `k`.
pub fn k_emptiness<G: StackSymbol>(p: &Pda<G>, k: usize) -> Result<bool, PdaError> {
    Ok(k_emptiness_report(p, k, Rules::Completed)?.nonempty)
}

/// A run of oscillation exactly `k`, rebuilt from the derivation that first
/// made the start key productive. `None` when there is none.
pub fn k_witness<G: StackSymbol>(p: &Pda<G>, k: usize) -> Result<Option<QuasiRun<G>>, PdaError> {
    require_reduced(p)?;
    let key = |g: &G, (level, mark): (usize, Mark)| QueryKey {
        symbol: g.clone(),
        level,
        mark,
    };
    let rows = push_rows(Rules::Completed, k);
    // key -> (action, first key, second key); pops have no sub-keys
    type Why<G> = (usize, Option<(QueryKey<G>, QueryKey<G>)>);
    let mut why: HashMap<QueryKey<G>, Why<G>> = HashMap::new();
    loop {
        let before = why.len();
        for (i, a) in p.actions.iter().enumerate() {
            if a.is_pop() {
                for m in pop_marks() {
                    why.entry(key(&a.pop, m)).or_insert((i, None));
                }
                continue;
            }
            for [lhs, first, second] in &rows {
                let (k1, k2) = (key(&a.push[0], *first), key(&a.push[1], *second));
                if why.contains_key(&k1) && why.contains_key(&k2) {
                    why.entry(key(&a.pop, *lhs)).or_insert((i, Some((k1, k2))));
                }
            }
        }
        if why.len() == before {
            break;
        }
    }
    let start = key(&p.start_stack, (k, Mark::Plain));
    if !why.contains_key(&start) {
        return Ok(None);
    }
    // every recorded dependency became productive strictly earlier, so this
    // unfolding terminates
    let mut actions = Vec::new();
    let mut todo = vec![start];
    while let Some(kk) = todo.pop() {
        let (i, subs) = &why[&kk];
        actions.push(p.actions[*i].clone());
        if let Some((k1, k2)) = subs {
            todo.push(k2.clone());
            todo.push(k1.clone());
        }
    }
    let tape: Vec<String> = actions.iter().filter_map(|a| a.read.clone()).collect();
    QuasiRun::replay(p.initial_id(&tape), actions).map(Some)
}

/// Whether `w` is accepted by some run of oscillation exactly `k`.
pub fn k_membership<G: StackSymbol>(p: &Pda<G>, k: usize, w: &[String]) -> Result<bool, PdaError> {
    k_membership_with(p, k, w, Rules::Completed)
}

/// Span dynamic program: `table[i][j]` holds the keys with a quasi-run that
/// reads exactly `w[i..j]`. Spans are filled by increasing length; within a
/// span, ε-moves can make keys depend on each other, so each span is iterated
/// to its own fixpoint first.
pub fn k_membership_with<G: StackSymbol>(
    p: &Pda<G>,
    k: usize,
    w: &[String],
    rules: Rules,
) -> Result<bool, PdaError> {
    require_reduced(p)?;
    let symbols: Vec<&G> = {
        let mut s: BTreeSet<&G> = p.stack_alphabet.iter().collect();
        s.insert(&p.start_stack);
        for a in &p.actions {
            s.insert(&a.pop);
            s.extend(a.push.iter());
        }
        s.into_iter().collect()
    };
    let sym_ix: HashMap<&G, usize> = symbols.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let per_sym = 3 * (k + 1);
    let mark_ix = |m: Mark| match m {
        Mark::Plain => 0,
        Mark::Hat => 1,
        Mark::Tied => 2,
    };
    let idx = |g: &G, (level, mark): (usize, Mark)| sym_ix[g] * per_sym + level * 3 + mark_ix(mark);
    let nkeys = symbols.len() * per_sym;

    // (read, lhs, first, second) for every push action and row
    let rows = push_rows(rules, k);
    let mut pushes: Vec<(Option<&String>, usize, usize, usize)> = Vec::new();
    let mut pops: Vec<(Option<&String>, usize)> = Vec::new();
    for a in &p.actions {
        if a.is_pop() {
            for m in pop_marks() {
                pops.push((a.read.as_ref(), idx(&a.pop, m)));
            }
        } else {
            for [lhs, first, second] in &rows {
                pushes.push((
                    a.read.as_ref(),
                    idx(&a.pop, *lhs),
                    idx(&a.push[0], *first),
                    idx(&a.push[1], *second),
                ));
            }
        }
    }

    let n = w.len();
    let mut table: Vec<Vec<Vec<bool>>> = vec![vec![Vec::new(); n + 1]; n + 1];
    for len in 0..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut cell = vec![false; nkeys];
            for &(read, key) in &pops {
                let ok = match read {
                    None => len == 0,
                    Some(b) => len == 1 && &w[i] == b,
                };
                if ok {
                    cell[key] = true;
                }
            }
            table[i][j] = cell;
            loop {
                let mut changed = false;
                for &(read, lhs, first, second) in &pushes {
                    if table[i][j][lhs] {
                        continue;
                    }
                    let s = match read {
                        None => i,
                        Some(b) if i < j && &w[i] == b => i + 1,
                        Some(_) => continue,
                    };
                    let hit = (s..=j).any(|m| table[s][m][first] && table[m][j][second]);
                    if hit {
                        table[i][j][lhs] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }
    Ok(table[0][n][idx(&p.start_stack, (k, Mark::Plain))])
}

/// Emptiness of the plain language for any automaton: a least fixpoint over
/// triples `(p, γ, r)` meaning "from state `p`, `γ` can be popped ending in `r`".
pub fn language_is_empty<G: StackSymbol>(p: &Pda<G>) -> bool {
    let mut done: HashMap<(&str, &G), HashSet<&str>> = HashMap::new();
    loop {
        let mut changed = false;
        for a in &p.actions {
            // states reachable after emptying the pushed word from a.to
            let mut ends: HashSet<&str> = HashSet::from([a.to.as_str()]);
            for g in &a.push {
                let mut next = HashSet::new();
                for s in &ends {
                    if let Some(rs) = done.get(&(*s, g)) {
                        next.extend(rs.iter().copied());
                    }
                }
                ends = next;
            }
            let slot = done.entry((a.from.as_str(), &a.pop)).or_default();
            for e in ends {
                changed |= slot.insert(e);
            }
        }
        if !changed {
            break;
        }
    }
    done.get(&(p.start_state.as_str(), &p.start_stack))
        .map_or(true, HashSet::is_empty)
}

/// Result of scanning the runs on one word for their stack heights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StackHeight {
    /// `None` when no run was found.
    pub max: Option<usize>,
    pub bound_hit: bool,
}

pub fn max_stack_height<G: StackSymbol>(
    p: &Pda<G>,
    w: &[String],
    max_moves: usize,
) -> Result<StackHeight, PdaError> {
    let set = enumerate_runs(p, w, max_moves)?;
    Ok(StackHeight {
        max: set.runs.iter().map(run_stack_height).max(),
        bound_hit: set.bound_hit,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing @{0} header")]
    Missing(&'static str),
}

/// A directed graph with optional source and target nodes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    pub nodes: BTreeSet<String>,
    pub edges: BTreeSet<(String, String)>,
    pub source: Option<String>,
    pub target: Option<String>,
}

impl Digraph {
    pub fn add_edge(&mut self, u: impl Into<String>, v: impl Into<String>) {
        let (u, v) = (u.into(), v.into());
        self.nodes.insert(u.clone());
        self.nodes.insert(v.clone());
        self.edges.insert((u, v));
    }

    pub fn successors(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (u, v) in &self.edges {
            out.entry(u.as_str()).or_default().push(v.as_str());
        }
        out
    }

    pub fn endpoints(&self) -> Result<(&str, &str), GraphError> {
        let s = self
            .source
            .as_deref()
            .ok_or(GraphError::Missing("source"))?;
        let t = self
            .target
            .as_deref()
            .ok_or(GraphError::Missing("target"))?;
        Ok((s, t))
    }
}

impl FromStr for Digraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut g = Digraph::default();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let err = |message: &str| GraphError::Parse {
                line,
                message: message.to_string(),
            };
            if let Some(rest) = text.strip_prefix("@source") {
                let n = rest.trim().to_string();
                g.nodes.insert(n.clone());
                g.source = Some(n);
            } else if let Some(rest) = text.strip_prefix("@target") {
                let n = rest.trim().to_string();
                g.nodes.insert(n.clone());
                g.target = Some(n);
            } else if let Some((u, v)) = text.split_once("->") {
                let (u, v) = (u.trim(), v.trim());
                if u.is_empty()
                    || v.is_empty()
                    || u.contains(char::is_whitespace)
                    || v.contains(char::is_whitespace)
                {
                    return Err(err("expected `u -> v`"));
                }
                g.add_edge(u, v);
            } else {
                return Err(err("expected `u -> v`, `@source s` or `@target t`"));
            }
        }
        Ok(g)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.source {
            writeln!(f, "@source {s}")?;
        }
        if let Some(t) = &self.target {
            writeln!(f, "@target {t}")?;
        }
        for (u, v) in &self.edges {
            writeln!(f, "{u} -> {v}")?;
        }
        Ok(())
    }
}

/// Single-state automaton that walks the graph on its one-symbol stack and
/// empties the stack at `t`; it accepts ε exactly when `t` is reachable from `s`.
pub fn path_to_pda(graph: &Digraph, s: &str, t: &str) -> Pda {
    let q = "q";
    let mut actions: Vec<Action> = graph
        .edges
        .iter()
        .map(|(u, v)| Action::new(q, None, u.clone(), q, vec![v.clone()]))
        .collect();
    actions.push(Action::new(q, None, t.to_string(), q, Vec::new()));
    let mut p = Pda::new(q, s.to_string(), actions);
    p.stack_alphabet.extend(graph.nodes.iter().cloned());
    p
}

/// Breadth-first reachability.
pub fn reachable(graph: &Digraph, s: &str, t: &str) -> bool {
    let succ = graph.successors();
    let mut seen: HashSet<&str> = HashSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return true;
        }
        for &v in succ.get(u).into_iter().flatten() {
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    false
}
