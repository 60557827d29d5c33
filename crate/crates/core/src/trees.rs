//! Quasi-trees: dimension, footprint, flattening, oscillation and yield, plus
//! the two tree families that witness tightness of the dimension/oscillation
//! bounds.

use std::fmt;
use std::str::FromStr;

use crate::dyck::{self, DyckSymbol, DyckWord};
use crate::grammars::{Grammar, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Variable(String),
    Terminal(String),
    Epsilon,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Variable(s) | Label::Terminal(s) => f.write_str(s),
            Label::Epsilon => f.write_str("ε"),
        }
    }
}

/// An ordered labelled tree. Interior nodes carry variables; leaves carry
/// terminals or ε.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiTree {
    pub label: Label,
    pub children: Vec<QuasiTree>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeMetrics {
    pub dimension: usize,
    pub oscillation: usize,
    pub footprint: DyckWord,
    pub flattening: DyckWord,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("tree syntax error at byte {offset}: {message}")]
pub struct TreeParseError {
    pub offset: usize,
    pub message: String,
}

impl QuasiTree {
    pub fn terminal(name: impl Into<String>) -> Self {
        QuasiTree {
            label: Label::Terminal(name.into()),
            children: Vec::new(),
        }
    }

    pub fn epsilon() -> Self {
        QuasiTree {
            label: Label::Epsilon,
            children: Vec::new(),
        }
    }

    pub fn node(var: impl Into<String>, children: Vec<QuasiTree>) -> Self {
        QuasiTree {
            label: Label::Variable(var.into()),
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(QuasiTree::node_count)
            .sum::<usize>()
    }

    /// Every subtree in preorder, the tree itself first.
    pub fn subtrees(&self) -> Vec<&QuasiTree> {
        let mut out = vec![self];
        let mut idx = 0;
        while idx < out.len() {
            let cur = out[idx];
            let at = idx + 1;
            // keep preorder: splice children right after the current position
            let tail = out.split_off(at);
            out.extend(cur.children.iter());
            out.extend(tail);
            idx += 1;
        }
        out
    }

    /// Local shape rules: interior nodes are variables, leaves are
    /// terminals or ε, and ε is always an only child.
    pub fn is_well_formed(&self) -> bool {
        match (&self.label, self.children.is_empty()) {
            (Label::Variable(_), true) => false,
            (Label::Variable(_), false) => {
                let eps_ok = self.children.len() == 1
                    || self.children.iter().all(|c| c.label != Label::Epsilon);
                eps_ok && self.children.iter().all(QuasiTree::is_well_formed)
            }
            (_, leaf) => leaf,
        }
    }

    pub fn metrics(&self) -> TreeMetrics {
        TreeMetrics {
            dimension: dimension(self),
            oscillation: oscillation(self),
            footprint: footprint(self),
            flattening: flattening(self),
        }
    }
}

pub fn dimension(t: &QuasiTree) -> usize {
    if t.is_leaf() {
        0
    } else {
        dyck::combine(t.children.iter().map(dimension))
    }
}

/// Footprint of a single node: `a` for a leaf, otherwise `a ā^k` followed by
/// the children's footprints. Not balanced; its shift is.
pub fn node_footprint(t: &QuasiTree) -> Vec<DyckSymbol> {
    let mut out = Vec::new();
    push_node_footprint(t, &mut out);
    out
}

fn push_node_footprint(t: &QuasiTree, out: &mut Vec<DyckSymbol>) {
    out.push(DyckSymbol::Close);
    out.extend(std::iter::repeat(DyckSymbol::Open).take(t.children.len()));
    for c in &t.children {
        push_node_footprint(c, out);
    }
}

pub fn footprint(t: &QuasiTree) -> DyckWord {
    let mut out = vec![DyckSymbol::Open];
    push_node_footprint(t, &mut out);
    DyckWord::new(out).expect("tree footprints are balanced")
}

pub fn flattening(t: &QuasiTree) -> DyckWord {
    let mut out = Vec::new();
    push_flattening(t, &mut out);
    DyckWord::new(out).expect("flattenings are balanced")
}

fn push_flattening(t: &QuasiTree, out: &mut Vec<DyckSymbol>) {
    for c in &t.children {
        out.push(DyckSymbol::Open);
        push_flattening(c, out);
        out.push(DyckSymbol::Close);
    }
}

pub fn oscillation(t: &QuasiTree) -> usize {
    dyck::rank(&footprint(t))
}

/// Left-to-right leaf labels; ε leaves contribute nothing.
pub fn yield_word(t: &QuasiTree) -> Vec<String> {
    let mut out = Vec::new();
    push_yield(t, &mut out);
    out
}

fn push_yield(t: &QuasiTree, out: &mut Vec<String>) {
    match &t.label {
        Label::Terminal(b) if t.is_leaf() => out.push(b.clone()),
        _ => t.children.iter().for_each(|c| push_yield(c, out)),
    }
}

/// Perfect binary tree of height `h` with synthetic labels.
pub fn perfect_binary(h: usize) -> QuasiTree {
    if h == 0 {
        QuasiTree::terminal("x")
    } else {
        QuasiTree::node("N", vec![perfect_binary(h - 1), perfect_binary(h - 1)])
    }
}

/// `P_0` is a root over one leaf; `P_n` is a root over `P_{n-1}` and a node
/// whose children are `P_{n-1}` and a leaf.
pub fn p_tree(n: usize) -> QuasiTree {
    if n == 0 {
        QuasiTree::node("P", vec![QuasiTree::terminal("x")])
    } else {
        let sub = p_tree(n - 1);
        let right = QuasiTree::node("P", vec![sub.clone(), QuasiTree::terminal("x")]);
        QuasiTree::node("P", vec![sub, right])
    }
}

/// Checks the local rules and that every interior node expands by a rule of `g`.
pub fn validate_quasi_tree(t: &QuasiTree, g: &Grammar) -> bool {
    if !t.is_well_formed() {
        return false;
    }
    validate_rules(t, g)
}

fn validate_rules(t: &QuasiTree, g: &Grammar) -> bool {
    match &t.label {
        Label::Epsilon => true,
        Label::Terminal(b) => g.terminals.contains(b),
        Label::Variable(x) => {
            let rhs: Option<Vec<Symbol>> =
                if t.children.len() == 1 && t.children[0].label == Label::Epsilon {
                    Some(Vec::new())
                } else {
                    t.children
                        .iter()
                        .map(|c| match &c.label {
                            Label::Variable(v) => Some(Symbol::Var(v.clone())),
                            Label::Terminal(b) => Some(Symbol::Term(b.clone())),
                            Label::Epsilon => None,
                        })
                        .collect()
                };
            match rhs {
                Some(rhs) => g.has_rule(x, &rhs) && t.children.iter().all(|c| validate_rules(c, g)),
                None => false,
            }
        }
    }
}

impl fmt::Display for QuasiTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.label)?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for QuasiTree {
    type Err = TreeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = SexpParser { src: s, pos: 0 };
        let tree = parser.tree()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(tree)
    }
}

struct SexpParser<'a> {
    src: &'a str,
    pos: usize,
}

impl SexpParser<'_> {
    fn error(&self, message: &str) -> TreeParseError {
        TreeParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn tree(&mut self) -> Result<QuasiTree, TreeParseError> {
        self.skip_ws();
        if self.peek() != Some('(') {
            return Err(self.error("expected '('"));
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.pos += c.len_utf8();
        }
        let atom = &self.src[start..self.pos];
        if atom.is_empty() {
            return Err(self.error("expected a label"));
        }
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some('(') => children.push(self.tree()?),
                _ => return Err(self.error("expected '(' or ')'")),
            }
        }
        let label = match (atom, children.is_empty()) {
            ("ε" | "_", true) => Label::Epsilon,
            (_, true) => Label::Terminal(atom.to_string()),
            (_, false) => Label::Variable(atom.to_string()),
        };
        Ok(QuasiTree { label, children })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammars::dyck_grammar;

    /// The parse tree of `ā a ā ā a a` in the Dyck grammar.
    pub(crate) fn dyck_example_tree() -> QuasiTree {
        let eps = || QuasiTree::node("S", vec![QuasiTree::epsilon()]);
        let t = |s: &str| QuasiTree::terminal(s);
        let inner = QuasiTree::node("S", vec![t("ā"), eps(), t("a"), eps()]);
        let right = QuasiTree::node("S", vec![t("ā"), inner, t("a"), eps()]);
        QuasiTree::node("S", vec![t("ā"), eps(), t("a"), right])
    }

    fn w(s: &str) -> DyckWord {
        s.parse().unwrap()
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&QuasiTree::terminal("b")), 0);
        assert_eq!(dimension(&dyck_example_tree()), 1);
        assert_eq!(dimension(&perfect_binary(3)), 3);
    }

    #[test]
    fn footprint_examples() {
        let two = QuasiTree::node("S", vec![QuasiTree::terminal("b")]);
        assert_eq!(footprint(&two), w("ā a ā a"));
        let cnf = QuasiTree::node(
            "S",
            vec![
                QuasiTree::node("B", vec![QuasiTree::terminal("b")]),
                QuasiTree::node("C", vec![QuasiTree::terminal("c")]),
            ],
        );
        assert_eq!(footprint(&cnf), w("ā a ā ā a ā a a ā a"));
        assert_eq!(footprint(&p_tree(0)), w("ā a ā a"));
    }

    #[test]
    fn flattening_examples() {
        assert_eq!(flattening(&QuasiTree::terminal("b")), DyckWord::empty());
        let one = QuasiTree::node("S", vec![QuasiTree::terminal("b")]);
        assert_eq!(flattening(&one), w("()"));
        let two = QuasiTree::node(
            "S",
            vec![QuasiTree::terminal("b"), QuasiTree::terminal("c")],
        );
        assert_eq!(flattening(&two), w("()()"));
        assert_eq!(dyck::rank(&flattening(&two)), 1);
    }

    #[test]
    fn oscillation_examples() {
        let two = QuasiTree::node("S", vec![QuasiTree::terminal("b")]);
        assert_eq!(oscillation(&two), 1);
        for n in 0..=5 {
            assert_eq!(oscillation(&p_tree(n)), n + 1);
        }
        assert_eq!(oscillation(&perfect_binary(4)), 2);
    }

    #[test]
    fn yield_examples() {
        assert_eq!(yield_word(&QuasiTree::terminal("b")), vec!["b"]);
        assert_eq!(yield_word(&dyck_example_tree()).join(" "), "ā a ā ā a a");
        let eps = QuasiTree::node("S", vec![QuasiTree::epsilon()]);
        assert!(yield_word(&eps).is_empty());
    }

    #[test]
    fn perfect_binary_shapes() {
        assert_eq!(perfect_binary(0).node_count(), 1);
        assert_eq!(dimension(&perfect_binary(1)), 1);
        assert_eq!(perfect_binary(1).node_count(), 3);
        assert_eq!(dimension(&perfect_binary(2)), 2);
        assert_eq!(oscillation(&perfect_binary(2)), 1);
        for h in 0..8 {
            assert_eq!(perfect_binary(h).node_count(), (1 << (h + 1)) - 1);
        }
    }

    #[test]
    fn p_tree_shapes() {
        assert_eq!(p_tree(0).node_count(), 2);
        assert_eq!(dimension(&p_tree(1)), 1);
        assert_eq!(oscillation(&p_tree(3)), 4);
    }

    #[test]
    fn validation() {
        let g = dyck_grammar();
        assert!(validate_quasi_tree(&dyck_example_tree(), &g));
        let bad_rule = QuasiTree::node("S", vec![QuasiTree::terminal("a")]);
        assert!(!validate_quasi_tree(&bad_rule, &g));
        let eps_sibling = QuasiTree::node(
            "S",
            vec![
                QuasiTree::epsilon(),
                QuasiTree::node("S", vec![QuasiTree::epsilon()]),
            ],
        );
        assert!(!validate_quasi_tree(&eps_sibling, &g));
        assert!(!eps_sibling.is_well_formed());
    }

    #[test]
    fn sexpr_round_trip() {
        let t = dyck_example_tree();
        let text = t.to_string();
        assert!(text.starts_with("(S (ā) (S (ε)) (a) (S"));
        assert_eq!(text.parse::<QuasiTree>().unwrap(), t);
        assert!("(S (a)".parse::<QuasiTree>().is_err());
        assert!("(S) x".parse::<QuasiTree>().is_err());
    }

    #[test]
    fn subtrees_in_preorder() {
        let t = QuasiTree::node(
            "S",
            vec![
                QuasiTree::node("A", vec![QuasiTree::terminal("a")]),
                QuasiTree::terminal("b"),
            ],
        );
        let labels: Vec<String> = t.subtrees().iter().map(|s| s.label.to_string()).collect();
        assert_eq!(labels, vec!["S", "A", "a", "b"]);
    }
}
