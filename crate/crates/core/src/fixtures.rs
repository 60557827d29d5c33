//! Bundled example automata, grammars and graphs.

use crate::decide::Digraph;
use crate::grammars::{is_cnf, to_cnf, Grammar};
use crate::pda::{cfg_to_pda, Pda};

macro_rules! fixture {
    ($path:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/", $path))
    };
}

const PDAS: &[(&str, &str)] = &[
    ("single_pop", fixture!("pda/single_pop.pda")),
    ("example9", fixture!("pda/example9.pda")),
    ("doubled_push", fixture!("pda/doubled_push.pda")),
    ("double_count", fixture!("pda/double_count.pda")),
    ("unit_chain", fixture!("pda/unit_chain.pda")),
    ("anbn_star", fixture!("pda/anbn_star.pda")),
];

const GRAMMARS: &[(&str, &str)] = &[
    ("dyck", fixture!("grammars/dyck.cfg")),
    ("anbn_star", fixture!("grammars/anbn_star.cfg")),
    ("l1", fixture!("grammars/l1.cfg")),
    ("l2", fixture!("grammars/l2.cfg")),
    ("palindromes", fixture!("grammars/palindromes.cfg")),
];

const CNF_CORPUS: &[(&str, &str)] = &[
    ("anbn", fixture!("grammars/cnf/anbn.cfg")),
    ("dyck_plus", fixture!("grammars/cnf/dyck_plus.cfg")),
    ("catalan", fixture!("grammars/cnf/catalan.cfg")),
    ("star_b", fixture!("grammars/cnf/star_b.cfg")),
    ("even_a", fixture!("grammars/cnf/even_a.cfg")),
    ("palindromes", fixture!("grammars/cnf/palindromes.cfg")),
    ("equal_ab", fixture!("grammars/cnf/equal_ab.cfg")),
    ("expr", fixture!("grammars/cnf/expr.cfg")),
    ("a_le_b", fixture!("grammars/cnf/a_le_b.cfg")),
    ("anbnc", fixture!("grammars/cnf/anbnc.cfg")),
    ("brackets", fixture!("grammars/cnf/brackets.cfg")),
];

const GRAPHS: &[(&str, &str)] = &[
    ("chain", fixture!("graphs/chain.graph")),
    ("cut", fixture!("graphs/cut.graph")),
];

fn lookup<'a>(table: &'a [(&'a str, &'a str)], name: &str) -> Option<&'a str> {
    table.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Automata given directly as text.
pub fn pda(name: &str) -> Option<Pda> {
    lookup(PDAS, name).map(|t| t.parse().expect("bundled automaton parses"))
}

pub fn grammar(name: &str) -> Option<Grammar> {
    lookup(GRAMMARS, name).map(|t| t.parse().expect("bundled grammar parses"))
}

pub fn graph(name: &str) -> Option<Digraph> {
    lookup(GRAPHS, name).map(|t| t.parse().expect("bundled graph parses"))
}

/// Every bundled automaton: the text ones, then the translations of the
/// bundled grammars (named `cfg:<grammar>`).
pub fn all_pdas() -> Vec<(String, Pda)> {
    let mut out: Vec<(String, Pda)> = PDAS
        .iter()
        .map(|(n, _)| (n.to_string(), pda(n).expect("listed")))
        .collect();
    for (n, _) in GRAMMARS {
        out.push((format!("cfg:{n}"), cfg_to_pda(&grammar(n).expect("listed"))));
    }
    out
}

/// Grammars in Chomsky normal form; sources not already in that form are
/// converted on load.
pub fn cnf_corpus() -> Vec<(String, Grammar)> {
    CNF_CORPUS
        .iter()
        .map(|(n, text)| {
            let g: Grammar = text.parse().expect("bundled grammar parses");
            let g = if is_cnf(&g) {
                g
            } else {
                to_cnf(&g).expect("corpus grammars avoid ε")
            };
            (n.to_string(), g)
        })
        .collect()
}

pub fn all_graphs() -> Vec<(String, Digraph)> {
    GRAPHS
        .iter()
        .map(|(n, _)| (n.to_string(), graph(n).expect("listed")))
        .collect()
}
