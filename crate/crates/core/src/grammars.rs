//! Context-free grammars: text format, CNF predicate and conversion, CYK, and
//! bounded parse-tree enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::trees::QuasiTree;

/// A word over an arbitrary alphabet; every letter is a token.
pub type Word = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("start symbol {0} has no rules")]
    UnknownStart(String),
    #[error("symbol {0} is used both as a variable and as a terminal")]
    Overlap(String),
    #[error("the grammar generates the empty word")]
    EpsilonLanguage,
    #[error("the grammar generates no word")]
    EmptyLanguage,
    #[error("grammar is not in Chomsky normal form")]
    NotCnf,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Var(String),
    Term(String),
}

impl Symbol {
    pub fn name(&self) -> &str {
        match self {
            Symbol::Var(s) | Symbol::Term(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub lhs: String,
    pub rhs: Vec<Symbol>,
}

impl Rule {
    pub fn new(lhs: impl Into<String>, rhs: Vec<Symbol>) -> Self {
        Rule {
            lhs: lhs.into(),
            rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub variables: BTreeSet<String>,
    pub terminals: BTreeSet<String>,
    pub start: String,
    pub rules: Vec<Rule>,
}

impl Grammar {
    /// Builds a grammar, inferring the alphabets from the rules. Duplicate
    /// rules are dropped; rule order is otherwise kept.
    pub fn new(start: impl Into<String>, rules: Vec<Rule>) -> Result<Self, GrammarError> {
        let start = start.into();
        let mut variables = BTreeSet::new();
        let mut terminals = BTreeSet::new();
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for r in rules {
            variables.insert(r.lhs.clone());
            for s in &r.rhs {
                match s {
                    Symbol::Var(v) => variables.insert(v.clone()),
                    Symbol::Term(t) => terminals.insert(t.clone()),
                };
            }
            if seen.insert(r.clone()) {
                kept.push(r);
            }
        }
        if !kept.iter().any(|r| r.lhs == start) {
            return Err(GrammarError::UnknownStart(start));
        }
        if let Some(both) = variables.intersection(&terminals).next() {
            return Err(GrammarError::Overlap(both.clone()));
        }
        Ok(Grammar {
            variables,
            terminals,
            start,
            rules: kept,
        })
    }

    pub fn has_rule(&self, lhs: &str, rhs: &[Symbol]) -> bool {
        self.rules.iter().any(|r| r.lhs == lhs && r.rhs == rhs)
    }

    pub fn rules_for<'a>(&'a self, lhs: &'a str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.lhs == lhs)
    }

    pub fn terminal_list(&self) -> Vec<String> {
        self.terminals.iter().cloned().collect()
    }

    /// Variables that derive the empty word.
    pub fn nullable(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        loop {
            let before = out.len();
            for r in &self.rules {
                if r.rhs
                    .iter()
                    .all(|s| matches!(s, Symbol::Var(v) if out.contains(v)))
                {
                    out.insert(r.lhs.clone());
                }
            }
            if out.len() == before {
                return out;
            }
        }
    }

    pub fn generates_epsilon(&self) -> bool {
        self.nullable().contains(&self.start)
    }
}

pub fn is_cnf(g: &Grammar) -> bool {
    g.rules.iter().all(|r| {
        matches!(
            r.rhs.as_slice(),
            [Symbol::Term(_)] | [Symbol::Var(_), Symbol::Var(_)]
        )
    })
}

/// Textbook conversion: drop ε-rules, unit rules and useless symbols, then
/// lift terminals and binarize. Fresh variables carry a `%` so they cannot
/// clash with parsed names.
pub fn to_cnf(g: &Grammar) -> Result<Grammar, GrammarError> {
    if g.generates_epsilon() {
        return Err(GrammarError::EpsilonLanguage);
    }
    if is_cnf(g) {
        return Ok(g.clone());
    }
    let nullable = g.nullable();

    let mut rules: BTreeSet<Rule> = BTreeSet::new();
    for r in &g.rules {
        let optional: Vec<usize> = r
            .rhs
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Symbol::Var(v) if nullable.contains(v)))
            .map(|(i, _)| i)
            .collect();
        for mask in 0u64..(1u64 << optional.len()) {
            let rhs: Vec<Symbol> = r
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    optional
                        .iter()
                        .position(|o| o == i)
                        .map_or(true, |bit| mask & (1 << bit) == 0)
                })
                .map(|(_, s)| s.clone())
                .collect();
            if !rhs.is_empty() {
                rules.insert(Rule::new(r.lhs.clone(), rhs));
            }
        }
    }

    // unit closure
    let vars: Vec<String> = g.variables.iter().cloned().collect();
    let mut non_unit: Vec<Rule> = Vec::new();
    for a in &vars {
        let mut reach: BTreeSet<String> = BTreeSet::from([a.clone()]);
        let mut stack = vec![a.clone()];
        while let Some(x) = stack.pop() {
            for r in rules.iter().filter(|r| r.lhs == x) {
                if let [Symbol::Var(y)] = r.rhs.as_slice() {
                    if reach.insert(y.clone()) {
                        stack.push(y.clone());
                    }
                }
            }
        }
        for b in &reach {
            for r in rules.iter().filter(|r| &r.lhs == b) {
                if !matches!(r.rhs.as_slice(), [Symbol::Var(_)]) {
                    non_unit.push(Rule::new(a.clone(), r.rhs.clone()));
                }
            }
        }
    }

    let used = fresh_names(g);
    let mut out: Vec<Rule> = Vec::new();
    let mut lifted: BTreeMap<String, String> = BTreeMap::new();
    let mut counter = 0usize;
    let trimmed = trim_rules(&g.start, non_unit);
    if trimmed.is_empty() {
        return Err(GrammarError::EmptyLanguage);
    }
    for r in trimmed {
        if let [Symbol::Term(_)] = r.rhs.as_slice() {
            out.push(r);
            continue;
        }
        let mut syms: Vec<String> = Vec::new();
        for s in &r.rhs {
            match s {
                Symbol::Var(v) => syms.push(v.clone()),
                Symbol::Term(t) => {
                    let name = lifted
                        .entry(t.clone())
                        .or_insert_with(|| fresh(&used, &format!("T%{t}")))
                        .clone();
                    syms.push(name);
                }
            }
        }
        let mut lhs = r.lhs.clone();
        while syms.len() > 2 {
            counter += 1;
            let next = fresh(&used, &format!("{}%{counter}", r.lhs));
            let head = syms.remove(0);
            out.push(Rule::new(
                lhs,
                vec![Symbol::Var(head), Symbol::Var(next.clone())],
            ));
            lhs = next;
        }
        out.push(Rule::new(lhs, syms.into_iter().map(Symbol::Var).collect()));
    }
    for (t, v) in &lifted {
        out.push(Rule::new(v.clone(), vec![Symbol::Term(t.clone())]));
    }
    Grammar::new(g.start.clone(), out)
}

fn fresh_names(g: &Grammar) -> HashSet<String> {
    g.variables
        .iter()
        .chain(g.terminals.iter())
        .cloned()
        .collect()
}

fn fresh(used: &HashSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while used.contains(&name) {
        name.push('\'');
    }
    name
}

/// Keeps only rules whose symbols are all generating and reachable from `start`.
fn trim_rules(start: &str, rules: Vec<Rule>) -> Vec<Rule> {
    let mut generating: HashSet<String> = HashSet::new();
    loop {
        let before = generating.len();
        for r in &rules {
            if r.rhs.iter().all(|s| match s {
                Symbol::Var(v) => generating.contains(v),
                Symbol::Term(_) => true,
            }) {
                generating.insert(r.lhs.clone());
            }
        }
        if generating.len() == before {
            break;
        }
    }
    let productive: Vec<Rule> = rules
        .into_iter()
        .filter(|r| {
            generating.contains(&r.lhs)
                && r.rhs
                    .iter()
                    .all(|s| !matches!(s, Symbol::Var(v) if !generating.contains(v)))
        })
        .collect();
    let mut reachable: HashSet<String> = HashSet::from([start.to_string()]);
    let mut stack = vec![start.to_string()];
    while let Some(x) = stack.pop() {
        for r in productive.iter().filter(|r| r.lhs == x) {
            for s in &r.rhs {
                if let Symbol::Var(v) = s {
                    if reachable.insert(v.clone()) {
                        stack.push(v.clone());
                    }
                }
            }
        }
    }
    productive
        .into_iter()
        .filter(|r| reachable.contains(&r.lhs))
        .collect()
}

pub fn cyk(g: &Grammar, w: &[String]) -> Result<bool, GrammarError> {
    if !is_cnf(g) {
        return Err(GrammarError::NotCnf);
    }
    let n = w.len();
    if n == 0 {
        return Ok(false);
    }
    // table[i][l] = variables deriving w[i..i+l+1]
    let mut table: Vec<Vec<HashSet<&str>>> = vec![vec![HashSet::new(); n]; n];
    for (i, b) in w.iter().enumerate() {
        for r in &g.rules {
            if matches!(r.rhs.as_slice(), [Symbol::Term(t)] if t == b) {
                table[i][0].insert(r.lhs.as_str());
            }
        }
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let mut found = HashSet::new();
            for split in 1..len {
                for r in &g.rules {
                    if let [Symbol::Var(y), Symbol::Var(z)] = r.rhs.as_slice() {
                        if table[i][split - 1].contains(y.as_str())
                            && table[i + split][len - split - 1].contains(z.as_str())
                        {
                            found.insert(r.lhs.as_str());
                        }
                    }
                }
            }
            table[i][len - 1] = found;
        }
    }
    Ok(table[0][n - 1].contains(g.start.as_str()))
}

/// All parse trees rooted at the start variable with at most `max_nodes` nodes.
pub fn enumerate_parse_trees(g: &Grammar, max_nodes: usize) -> Vec<QuasiTree> {
    let mut gen = TreeGen {
        g,
        memo: HashMap::new(),
    };
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        out.extend(gen.rooted(&g.start, n));
    }
    out
}

/// Parse trees (bounded by node count) whose yield is `w`.
pub fn parse_trees_for(g: &Grammar, w: &[String], max_nodes: usize) -> Vec<QuasiTree> {
    enumerate_parse_trees(g, max_nodes)
        .into_iter()
        .filter(|t| crate::trees::yield_word(t) == w)
        .collect()
}

struct TreeGen<'a> {
    g: &'a Grammar,
    memo: HashMap<(String, usize), Vec<QuasiTree>>,
}

impl TreeGen<'_> {
    /// Trees for variable `x` with exactly `n` nodes.
    fn rooted(&mut self, x: &str, n: usize) -> Vec<QuasiTree> {
        if let Some(v) = self.memo.get(&(x.to_string(), n)) {
            return v.clone();
        }
        let mut out = Vec::new();
        let rules: Vec<Rule> = self.g.rules_for(x).cloned().collect();
        for r in rules {
            if r.rhs.is_empty() {
                if n == 2 {
                    out.push(QuasiTree::node(x, vec![QuasiTree::epsilon()]));
                }
                continue;
            }
            if n < 1 + r.rhs.len() {
                continue;
            }
            for kids in self.sequences(&r.rhs, n - 1) {
                out.push(QuasiTree::node(x, kids));
            }
        }
        self.memo.insert((x.to_string(), n), out.clone());
        out
    }

    fn symbol(&mut self, s: &Symbol, n: usize) -> Vec<QuasiTree> {
        match s {
            Symbol::Term(t) if n == 1 => vec![QuasiTree::terminal(t.clone())],
            Symbol::Term(_) => Vec::new(),
            Symbol::Var(v) => self.rooted(v, n),
        }
    }

    /// Child sequences matching `syms` with `n` nodes in total.
    fn sequences(&mut self, syms: &[Symbol], n: usize) -> Vec<Vec<QuasiTree>> {
        match syms {
            [] => {
                if n == 0 {
                    vec![Vec::new()]
                } else {
                    Vec::new()
                }
            }
            [first, rest @ ..] => {
                let mut out = Vec::new();
                for here in 1..=n.saturating_sub(rest.len()) {
                    let heads = self.symbol(first, here);
                    if heads.is_empty() {
                        continue;
                    }
                    let tails = self.sequences(rest, n - here);
                    for h in &heads {
                        for t in &tails {
                            let mut v = Vec::with_capacity(syms.len());
                            v.push(h.clone());
                            v.extend(t.iter().cloned());
                            out.push(v);
                        }
                    }
                }
                out
            }
        }
    }
}

/// The Dyck grammar `S -> ā S a S | ε`.
pub fn dyck_grammar() -> Grammar {
    let v = || Symbol::Var("S".into());
    let t = |s: &str| Symbol::Term(s.into());
    Grammar::new(
        "S",
        vec![
            Rule::new("S", vec![t("ā"), v(), t("a"), v()]),
            Rule::new("S", vec![]),
        ],
    )
    .expect("static grammar")
}

/// Splits on whitespace when present, otherwise one token per character.
/// `ε` and `_` alone denote the empty word.
pub fn parse_word(s: &str) -> Word {
    let s = s.trim();
    if s.is_empty() || s == "ε" || s == "_" {
        return Vec::new();
    }
    if s.contains(char::is_whitespace) {
        s.split_whitespace().map(str::to_string).collect()
    } else {
        s.chars().map(|c| c.to_string()).collect()
    }
}

pub fn format_word(w: &[String]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else if w.iter().all(|t| t.chars().count() == 1) {
        w.concat()
    } else {
        w.join(" ")
    }
}

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: &[String], max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for b in alphabet {
                let mut x = w.clone();
                x.push(b.clone());
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn is_variable_token(tok: &str) -> bool {
    tok.chars().next().is_some_and(char::is_uppercase)
}

fn render_symbol(s: &Symbol) -> String {
    match s {
        Symbol::Var(v) => v.clone(),
        Symbol::Term(t) => {
            let plain = !t.is_empty()
                && !is_variable_token(t)
                && t != "_"
                && t != "ε"
                && t != "|"
                && t != "->"
                && !t.starts_with('#')
                && !t.starts_with('@')
                && !t.contains(|c: char| c.is_whitespace() || c == '"');
            if plain {
                t.clone()
            } else {
                format!("\"{t}\"")
            }
        }
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "@start {}", self.start)?;
        let mut order: Vec<&str> = Vec::new();
        for r in &self.rules {
            if !order.contains(&r.lhs.as_str()) {
                order.push(&r.lhs);
            }
        }
        for lhs in order {
            let alts: Vec<String> = self
                .rules_for(lhs)
                .map(|r| {
                    if r.rhs.is_empty() {
                        "_".to_string()
                    } else {
                        r.rhs
                            .iter()
                            .map(render_symbol)
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            writeln!(f, "{lhs} -> {}", alts.join(" | "))?;
        }
        Ok(())
    }
}

fn tokenize_rhs(text: &str, line: usize) -> Result<Vec<String>, GrammarError> {
    // quoted tokens keep their quotes so the caller can classify them
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut end = None;
            for (j, d) in chars.by_ref() {
                if d == '"' {
                    end = Some(j);
                    break;
                }
            }
            let end = end.ok_or(GrammarError::Parse {
                line,
                message: "unterminated quote".into(),
            })?;
            out.push(text[i..=end].to_string());
        } else {
            let mut end = text.len();
            while let Some(&(j, d)) = chars.peek() {
                if d.is_whitespace() || d == '"' {
                    end = j;
                    break;
                }
                chars.next();
            }
            out.push(text[i..end].to_string());
        }
    }
    Ok(out)
}

impl FromStr for Grammar {
    type Err = GrammarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut start: Option<String> = None;
        let mut rules = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if let Some(rest) = text.strip_prefix("@start") {
                start = Some(rest.trim().to_string());
                continue;
            }
            let (lhs, rhs) = text.split_once("->").ok_or(GrammarError::Parse {
                line,
                message: "expected `->`".into(),
            })?;
            let lhs = lhs.trim();
            if !is_variable_token(lhs) || lhs.contains(char::is_whitespace) {
                return Err(GrammarError::Parse {
                    line,
                    message: format!("left side `{lhs}` is not a variable"),
                });
            }
            let mut alt: Vec<Symbol> = Vec::new();
            let mut saw_eps = false;
            let mut toks = tokenize_rhs(rhs, line)?;
            toks.push("|".into());
            for tok in toks {
                match tok.as_str() {
                    "|" => {
                        if saw_eps && !alt.is_empty() {
                            return Err(GrammarError::Parse {
                                line,
                                message: "ε mixed with other symbols".into(),
                            });
                        }
                        rules.push(Rule::new(lhs, std::mem::take(&mut alt)));
                        saw_eps = false;
                    }
                    "_" | "ε" => saw_eps = true,
                    t if t.len() >= 2 && t.starts_with('"') => {
                        alt.push(Symbol::Term(t[1..t.len() - 1].to_string()))
                    }
                    t if is_variable_token(t) => alt.push(Symbol::Var(t.to_string())),
                    t => alt.push(Symbol::Term(t.to_string())),
                }
            }
        }
        let start = start
            .or_else(|| rules.first().map(|r| r.lhs.clone()))
            .ok_or(GrammarError::Parse {
                line: 0,
                message: "no rules".into(),
            })?;
        Grammar::new(start, rules)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{validate_quasi_tree, yield_word};

    fn g(text: &str) -> Grammar {
        text.parse().unwrap()
    }

    fn anbn_cnf() -> Grammar {
        g("S -> A B | A C\nC -> S B\nA -> a\nB -> b")
    }

    #[test]
    fn cnf_predicate() {
        assert!(!is_cnf(&dyck_grammar()));
        assert!(is_cnf(&g("S -> A B\nA -> a\nB -> b")));
        assert!(!is_cnf(&g("S -> _")));
    }

    #[test]
    fn cnf_conversion_keeps_cnf_input() {
        let src = g("S -> A B\nA -> a\nB -> b");
        assert_eq!(to_cnf(&src).unwrap(), src);
    }

    #[test]
    fn cnf_conversion_anbn() {
        let src = g("S -> a S b | a b");
        let cnf = to_cnf(&src).unwrap();
        assert!(is_cnf(&cnf));
        let sigma = cnf.terminal_list();
        for w in words_up_to(&sigma, 8).into_iter().skip(1) {
            let n = w.len() / 2;
            let expect = w.len() % 2 == 0
                && n >= 1
                && w[..n].iter().all(|c| c == "a")
                && w[n..].iter().all(|c| c == "b");
            assert_eq!(cyk(&cnf, &w).unwrap(), expect, "{w:?}");
        }
    }

    #[test]
    fn cnf_conversion_rejects_epsilon() {
        assert_eq!(to_cnf(&dyck_grammar()), Err(GrammarError::EpsilonLanguage));
    }

    #[test]
    fn cnf_conversion_handles_nullable_and_units() {
        let src = g("S -> A S B | C\nA -> a | _\nB -> b\nC -> c");
        let cnf = to_cnf(&src).unwrap();
        assert!(is_cnf(&cnf));
        let w = |s: &str| parse_word(s);
        assert!(cyk(&cnf, &w("c")).unwrap());
        assert!(cyk(&cnf, &w("acb")).unwrap());
        assert!(cyk(&cnf, &w("cbb")).unwrap());
        assert!(!cyk(&cnf, &w("ac")).unwrap());
    }

    #[test]
    fn empty_language_has_no_cnf() {
        let g: Grammar = "S -> S | a S".parse().unwrap();
        assert_eq!(to_cnf(&g), Err(GrammarError::EmptyLanguage));
    }

    #[test]
    fn cyk_examples() {
        let cnf = anbn_cnf();
        assert!(cyk(&cnf, &parse_word("aabb")).unwrap());
        assert!(!cyk(&cnf, &parse_word("aab")).unwrap());
        assert!(!cyk(&cnf, &parse_word("a")).unwrap());
        assert_eq!(
            cyk(&dyck_grammar(), &parse_word("ab")),
            Err(GrammarError::NotCnf)
        );
    }

    #[test]
    fn enumeration_examples() {
        let d = dyck_grammar();
        let two = enumerate_parse_trees(&d, 2);
        assert_eq!(two.len(), 1);
        assert!(yield_word(&two[0]).is_empty());
        let seven = enumerate_parse_trees(&d, 7);
        assert!(seven.iter().any(|t| yield_word(t).join(" ") == "ā a"));
        for t in enumerate_parse_trees(&anbn_cnf(), 3) {
            assert!(yield_word(&t).len() <= 1);
        }
        assert!(enumerate_parse_trees(&anbn_cnf(), 3).is_empty());
        let all = enumerate_parse_trees(&anbn_cnf(), 20);
        assert!(all.iter().all(|t| validate_quasi_tree(t, &anbn_cnf())));
        let uniq: HashSet<_> = all.iter().collect();
        assert_eq!(uniq.len(), all.len());
    }

    #[test]
    fn dyck_grammar_shape() {
        let d = dyck_grammar();
        assert_eq!(d.rules.len(), 2);
        let w = parse_word("ā a ā ā a a");
        assert_eq!(parse_trees_for(&d, &w, 17).len(), 1);
    }

    #[test]
    fn text_round_trip() {
        let src = "# comment\n@start S\nS -> a S b | a b | _\nT -> \"X\" S\n";
        let parsed: Grammar = src.parse().unwrap();
        assert_eq!(parsed.start, "S");
        assert!(parsed.terminals.contains("X"));
        assert!(parsed.has_rule("S", &[]));
        let again: Grammar = parsed.to_string().parse().unwrap();
        assert_eq!(again, parsed);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "S a b".parse::<Grammar>(),
            Err(GrammarError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            "s -> a".parse::<Grammar>(),
            Err(GrammarError::Parse { .. })
        ));
        assert!(matches!(
            "@start T\nS -> a".parse::<Grammar>(),
            Err(GrammarError::UnknownStart(_))
        ));
    }

    #[test]
    fn word_tokens() {
        assert_eq!(parse_word("aab"), vec!["a", "a", "b"]);
        assert_eq!(parse_word("ā a"), vec!["ā", "a"]);
        assert!(parse_word("ε").is_empty());
        assert_eq!(format_word(&parse_word("ā a")), "āa");
        assert_eq!(words_up_to(&["a".into(), "b".into()], 3).len(), 15);
    }
}
