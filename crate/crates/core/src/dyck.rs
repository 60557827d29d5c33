//! Dyck words over an open/close pair, their matching pairs, the embedding
//! order obtained by deleting matching pairs, harmonics, and rank.
//!
//! Words are written with `(` for the open symbol and `)` for the close
//! symbol. Parsing also accepts `ā` / `a`. Positions are 1-based everywhere.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

/// Largest word length accepted by the exhaustive oracles.
pub const DEFAULT_ORACLE_LIMIT: usize = 16;

/// Largest harmonic order that [`harmonic`] will build.
pub const DEFAULT_HARMONIC_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DyckError {
    #[error("unexpected character {found:?} at position {position}")]
    InvalidCharacter { position: usize, found: char },
    #[error("unbalanced word: error at position {position}")]
    Unbalanced { position: usize },
    #[error("word of length {len} exceeds the oracle limit of {limit}")]
    BoundExceeded { len: usize, limit: usize },
    #[error("harmonic order {order} exceeds the cap of {cap}")]
    HarmonicTooLarge { order: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DyckSymbol {
    Open,
    Close,
}

impl DyckSymbol {
    pub fn as_char(self) -> char {
        match self {
            DyckSymbol::Open => '(',
            DyckSymbol::Close => ')',
        }
    }
}

/// True iff every prefix has at least as many opens as closes and the totals agree.
pub fn is_dyck(symbols: &[DyckSymbol]) -> bool {
    first_violation(symbols).is_none()
}

/// 1-based position of the first balance violation; `len + 1` when opens remain unclosed.
fn first_violation(symbols: &[DyckSymbol]) -> Option<usize> {
    let mut depth = 0usize;
    for (idx, s) in symbols.iter().enumerate() {
        match s {
            DyckSymbol::Open => depth += 1,
            DyckSymbol::Close => {
                if depth == 0 {
                    return Some(idx + 1);
                }
                depth -= 1;
            }
        }
    }
    (depth != 0).then_some(symbols.len() + 1)
}

/// A balanced word. The invariant is checked on construction.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckWord(Vec<DyckSymbol>);

impl DyckWord {
    pub fn new(symbols: Vec<DyckSymbol>) -> Result<Self, DyckError> {
        match first_violation(&symbols) {
            Some(position) => Err(DyckError::Unbalanced { position }),
            None => Ok(DyckWord(symbols)),
        }
    }

    pub fn empty() -> Self {
        DyckWord(Vec::new())
    }

    pub fn symbols(&self) -> &[DyckSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Symbol at 1-based position `i`.
    pub fn at(&self, i: usize) -> Option<DyckSymbol> {
        i.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    /// The word with its first symbol removed. Not balanced in general.
    pub fn shifted(&self) -> Vec<DyckSymbol> {
        self.0.iter().skip(1).copied().collect()
    }

    /// `( self )`
    pub fn wrap(&self) -> DyckWord {
        let mut v = Vec::with_capacity(self.len() + 2);
        v.push(DyckSymbol::Open);
        v.extend_from_slice(&self.0);
        v.push(DyckSymbol::Close);
        DyckWord(v)
    }

    pub fn concat(&self, other: &DyckWord) -> DyckWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        DyckWord(v)
    }

    /// Inner words `w_1 … w_n` of the top-level factorisation `(w_1) … (w_n)`.
    pub fn components(&self) -> Vec<DyckWord> {
        let mut out = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        for (idx, s) in self.0.iter().enumerate() {
            match s {
                DyckSymbol::Open => {
                    if depth == 0 {
                        start = idx;
                    }
                    depth += 1;
                }
                DyckSymbol::Close => {
                    depth -= 1;
                    if depth == 0 {
                        out.push(DyckWord(self.0[start + 1..idx].to_vec()));
                    }
                }
            }
        }
        out
    }

    /// Rendering with `ā` and `a`, space separated.
    pub fn to_bar_notation(&self) -> String {
        self.0
            .iter()
            .map(|s| match s {
                DyckSymbol::Open => "ā",
                DyckSymbol::Close => "a",
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// ASCII arc diagram of the matching pairs, one row per nesting height.
    pub fn arc_diagram(&self) -> String {
        let pairs = matching_pairs(self);
        let forest = Forest::build(self);
        let heights = forest.heights();
        let width = self.len() * 2;
        let rows = heights.iter().copied().max().map_or(0, |h| h + 1);
        let mut grid = vec![vec![' '; width]; rows];
        for (node, &(i, j)) in pairs.pairs().iter().enumerate() {
            let h = heights[node];
            let (ci, cj) = ((i - 1) * 2, (j - 1) * 2);
            for row in grid.iter_mut().take(h) {
                row[ci] = '|';
                row[cj] = '|';
            }
            grid[h][ci] = '\'';
            grid[h][cj] = '\'';
            for c in ci + 1..cj {
                grid[h][c] = '-';
            }
        }
        let mut out: String = self
            .0
            .iter()
            .map(|s| format!("{} ", s.as_char()))
            .collect::<String>()
            .trim_end()
            .to_string();
        for row in grid {
            out.push('\n');
            out.push_str(row.iter().collect::<String>().trim_end());
        }
        out
    }
}

impl fmt::Display for DyckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for DyckWord {
    type Err = DyckError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut symbols = Vec::new();
        let mut positions = Vec::new();
        let mut chars = s.chars().enumerate().peekable();
        let mut consumed = 0;
        while let Some((idx, c)) = chars.next() {
            consumed = idx + 1;
            let sym = match c {
                c if c.is_whitespace() => continue,
                '(' | 'ā' => DyckSymbol::Open,
                ')' => DyckSymbol::Close,
                'a' => {
                    // `a` followed by a combining macron is the open symbol
                    if chars.peek().map(|&(_, n)| n) == Some('\u{304}') {
                        chars.next();
                        consumed += 1;
                        DyckSymbol::Open
                    } else {
                        DyckSymbol::Close
                    }
                }
                found => {
                    return Err(DyckError::InvalidCharacter {
                        position: idx + 1,
                        found,
                    })
                }
            };
            symbols.push(sym);
            positions.push(idx + 1);
        }
        match first_violation(&symbols) {
            None => Ok(DyckWord(symbols)),
            Some(p) if p <= positions.len() => Err(DyckError::Unbalanced {
                position: positions[p - 1],
            }),
            Some(_) => Err(DyckError::Unbalanced {
                position: consumed + 1,
            }),
        }
    }
}

/// The matching pairs of a Dyck word, sorted by opening position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatchingPairs(Vec<(usize, usize)>);

impl MatchingPairs {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position matched with `pos`, if any.
    pub fn partner(&self, pos: usize) -> Option<usize> {
        self.0.iter().find_map(|&(i, j)| {
            if i == pos {
                Some(j)
            } else if j == pos {
                Some(i)
            } else {
                None
            }
        })
    }
}

impl fmt::Display for MatchingPairs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(i, j)| format!("{i}-{j}")).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn matching_pairs(w: &DyckWord) -> MatchingPairs {
    let mut open = Vec::new();
    let mut pairs = Vec::with_capacity(w.len() / 2);
    for (idx, s) in w.symbols().iter().enumerate() {
        match s {
            DyckSymbol::Open => open.push(idx + 1),
            DyckSymbol::Close => {
                let i = open.pop().expect("balanced word");
                pairs.push((i, idx + 1));
            }
        }
    }
    pairs.sort_unstable();
    MatchingPairs(pairs)
}

/// Ordered forest view of a Dyck word: one node per matching pair, in
/// preorder (the order of opening positions).
#[derive(Debug, Clone)]
struct Forest {
    /// Number of nodes in the subtree rooted at each node.
    sizes: Vec<usize>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
}

impl Forest {
    fn build(w: &DyckWord) -> Self {
        let n = w.len() / 2;
        let mut sizes = vec![0; n];
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut next = 0;
        for s in w.symbols() {
            match s {
                DyckSymbol::Open => {
                    match stack.last() {
                        Some(&parent) => children[parent].push(next),
                        None => roots.push(next),
                    }
                    stack.push(next);
                    next += 1;
                }
                DyckSymbol::Close => {
                    let node = stack.pop().expect("balanced word");
                    sizes[node] = next - node;
                }
            }
        }
        Forest {
            sizes,
            children,
            roots,
        }
    }

    fn len(&self) -> usize {
        self.sizes.len()
    }

    /// Strahler-style dimension of every node; a leaf has dimension 0.
    fn dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.len()];
        for node in (0..self.len()).rev() {
            dims[node] = combine(self.children[node].iter().map(|&c| dims[c]));
        }
        dims
    }

    fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.len()];
        for node in (0..self.len()).rev() {
            h[node] = self.children[node]
                .iter()
                .map(|&c| h[c] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }
}

/// Maximum, plus one when the maximum is attained at least twice. Empty gives 0.
pub(crate) fn combine(values: impl IntoIterator<Item = usize>) -> usize {
    let mut best = None;
    let mut ties = 0;
    for v in values {
        match best {
            Some(b) if v < b => {}
            Some(b) if v == b => ties += 1,
            _ => {
                best = Some(v);
                ties = 1;
            }
        }
    }
    match best {
        None => 0,
        Some(b) if ties >= 2 => b + 1,
        Some(b) => b,
    }
}

/// `w_a ⪯ w_b`: `w_a` results from `w_b` by deleting zero or more matching pairs.
///
/// Solved as ordered forest inclusion under node deletion. A forest state is a
/// preorder range `[start, end)` closed under descendants; deleting the first
/// root promotes its children, which is the range `[start + 1, end)`.
pub fn embeds(w_a: &DyckWord, w_b: &DyckWord) -> bool {
    if w_a.len() > w_b.len() {
        return false;
    }
    let pattern = Forest::build(w_a);
    let text = Forest::build(w_b);
    let mut inc = Inclusion {
        pattern: &pattern.sizes,
        text: &text.sizes,
        memo: HashMap::new(),
    };
    inc.includes((0, pattern.len()), (0, text.len()))
}

struct Inclusion<'a> {
    pattern: &'a [usize],
    text: &'a [usize],
    memo: HashMap<(usize, usize, usize, usize), bool>,
}

impl Inclusion<'_> {
    fn includes(&mut self, (pi, pe): (usize, usize), (ti, te): (usize, usize)) -> bool {
        if pi == pe {
            return true;
        }
        if te - ti < pe - pi {
            return false;
        }
        let key = (pi, pe, ti, te);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (ps, ts) = (self.pattern[pi], self.text[ti]);
        // map the first pattern root onto the first text root
        let result = (self.includes((pi + 1, pi + ps), (ti + 1, ti + ts))
            && self.includes((pi + ps, pe), (ti + ts, te)))
            // or delete the first text root
            || self.includes((pi, pe), (ti + 1, te));
        self.memo.insert(key, result);
        result
    }
}

/// All words reachable from `w` by deleting matching pairs, `w` included.
pub fn deletion_closure(w: &DyckWord, limit: usize) -> Result<HashSet<DyckWord>, DyckError> {
    if w.len() > limit {
        return Err(DyckError::BoundExceeded {
            len: w.len(),
            limit,
        });
    }
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.clone());
    queue.push_back(w.clone());
    while let Some(cur) = queue.pop_front() {
        for &(i, j) in matching_pairs(&cur).pairs() {
            let next: Vec<DyckSymbol> = cur
                .symbols()
                .iter()
                .enumerate()
                .filter(|&(idx, _)| idx + 1 != i && idx + 1 != j)
                .map(|(_, &s)| s)
                .collect();
            let next = DyckWord(next);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Exhaustive check of `w_a ⪯ w_b` by breadth-first pair deletion.
pub fn embeds_oracle(w_a: &DyckWord, w_b: &DyckWord) -> Result<bool, DyckError> {
    embeds_oracle_with_limit(w_a, w_b, DEFAULT_ORACLE_LIMIT)
}

pub fn embeds_oracle_with_limit(
    w_a: &DyckWord,
    w_b: &DyckWord,
    limit: usize,
) -> Result<bool, DyckError> {
    Ok(deletion_closure(w_b, limit)?.contains(w_a))
}

pub fn harmonic(i: usize) -> Result<DyckWord, DyckError> {
    if i > DEFAULT_HARMONIC_CAP {
        return Err(DyckError::HarmonicTooLarge {
            order: i,
            cap: DEFAULT_HARMONIC_CAP,
        });
    }
    let mut h = DyckWord::empty();
    for _ in 0..i {
        let hat = h.wrap();
        h = hat.concat(&hat);
    }
    Ok(h)
}

pub fn hat_harmonic(i: usize) -> Result<DyckWord, DyckError> {
    Ok(harmonic(i)?.wrap())
}

/// Greatest `q` with `harmonic(q) ⪯ w`.
///
/// Computed bottom-up on the forest of matching pairs: a pair's value is the
/// maximum of its children's values, plus one on a tie for the maximum.
pub fn rank(w: &DyckWord) -> usize {
    let forest = Forest::build(w);
    let dims = forest.dims();
    combine(forest.roots.iter().map(|&r| dims[r]))
}

/// Greatest `k` with `hat_harmonic(k) ⪯ w`, or `-1` for the empty word.
pub fn hat_rank(w: &DyckWord) -> i64 {
    w.components()
        .iter()
        .map(|inner| (rank(inner) as i64).max(hat_rank(inner)))
        .max()
        .unwrap_or(-1)
}

/// Greatest `q` with `embeds_oracle(harmonic(q), w)`.
pub fn rank_oracle(w: &DyckWord) -> Result<usize, DyckError> {
    let closure = deletion_closure(w, DEFAULT_ORACLE_LIMIT)?;
    let mut best = 0;
    let mut q = 1;
    loop {
        let h = harmonic(q)?;
        if h.len() > w.len() {
            break;
        }
        if closure.contains(&h) {
            best = q;
        }
        q += 1;
    }
    Ok(best)
}

/// Every Dyck word of length exactly `2 * pairs`, in lexicographic order.
pub fn all_words(pairs: usize) -> Vec<DyckWord> {
    fn go(open: usize, close: usize, cur: &mut Vec<DyckSymbol>, out: &mut Vec<DyckWord>) {
        if open == 0 && close == 0 {
            out.push(DyckWord(cur.clone()));
            return;
        }
        if open > 0 {
            cur.push(DyckSymbol::Open);
            go(open - 1, close + 1, cur, out);
            cur.pop();
        }
        if close > 0 {
            cur.push(DyckSymbol::Close);
            go(open, close - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pairs, 0, &mut Vec::new(), &mut out);
    out
}
