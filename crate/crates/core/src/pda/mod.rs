//! Pushdown automata: actions, instantaneous descriptors, moves, quasi-runs,
//! run enumeration, disassembly and footprints, and the transformations into
//! reduced form.

mod footprint;
mod runs;
mod text;
mod transform;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

pub use footprint::{
    disassemble, reassemble, run_footprint, run_oscillation, run_stack_height, Disassembly,
};
pub use runs::{
    accepts, enumerate_quasi_runs, enumerate_runs, enumerate_runs_with, RunSearch, RunSet,
};
pub use transform::{cfg_to_pda, is_reduced, reduce_pipeline, split_actions, to_reduced, trim};

/// Anything usable as a stack symbol.
pub trait StackSymbol: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display {}

impl<T: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display> StackSymbol for T {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PdaError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("action {action} does not apply to {id}")]
    Inapplicable { action: String, id: String },
    #[error("automaton is not in reduced form: {0}")]
    NotReduced(String),
    #[error("every action must push two symbols or pop: {0}")]
    Shape(String),
    #[error("move bound must be at least 1")]
    ZeroMoves,
    #[error("a quasi-run with a single move cannot be disassembled")]
    TooShort,
    #[error("invalid quasi-run: {0}")]
    InvalidRun(String),
}

/// `(from, read, pop) -> (to, push)`; `read = None` is an ε-move and the
/// pushed word is listed top first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action<G = String> {
    pub from: String,
    pub read: Option<String>,
    pub pop: G,
    pub to: String,
    pub push: Vec<G>,
}

impl<G> Action<G> {
    pub fn new(
        from: impl Into<String>,
        read: Option<&str>,
        pop: G,
        to: impl Into<String>,
        push: Vec<G>,
    ) -> Self {
        Action {
            from: from.into(),
            read: read.map(str::to_string),
            pop,
            to: to.into(),
            push,
        }
    }

    pub fn is_pop(&self) -> bool {
        self.push.is_empty()
    }
}

impl<G: fmt::Display> fmt::Display for Action<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let read = self.read.as_deref().unwrap_or("_");
        write!(f, "{}, {}, {} -> {}, ", self.from, read, self.pop, self.to)?;
        if self.push.is_empty() {
            f.write_str("_")
        } else {
            let parts: Vec<String> = self.push.iter().map(ToString::to_string).collect();
            f.write_str(&parts.join(" "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda<G = String> {
    pub states: BTreeSet<String>,
    pub input_alphabet: BTreeSet<String>,
    pub stack_alphabet: BTreeSet<G>,
    pub actions: Vec<Action<G>>,
    pub start_state: String,
    pub start_stack: G,
}

impl<G: StackSymbol> Pda<G> {
    /// Builds an automaton whose alphabets are exactly those the actions and
    /// start configuration mention. Duplicate actions are dropped.
    pub fn new(start_state: impl Into<String>, start_stack: G, actions: Vec<Action<G>>) -> Self {
        let mut p = Pda {
            states: BTreeSet::new(),
            input_alphabet: BTreeSet::new(),
            stack_alphabet: BTreeSet::new(),
            actions: Vec::new(),
            start_state: start_state.into(),
            start_stack,
        };
        p.states.insert(p.start_state.clone());
        p.stack_alphabet.insert(p.start_stack.clone());
        let mut seen = std::collections::HashSet::new();
        for a in actions {
            if seen.insert(a.clone()) {
                p.insert_unchecked(a);
            }
        }
        p
    }

    pub fn add_action(&mut self, a: Action<G>) {
        if !self.actions.contains(&a) {
            self.insert_unchecked(a);
        }
    }

    fn insert_unchecked(&mut self, a: Action<G>) {
        self.states.insert(a.from.clone());
        self.states.insert(a.to.clone());
        if let Some(b) = &a.read {
            self.input_alphabet.insert(b.clone());
        }
        self.stack_alphabet.insert(a.pop.clone());
        self.stack_alphabet.extend(a.push.iter().cloned());
        self.actions.push(a);
    }

    pub fn initial_id(&self, w: &[String]) -> Id<G> {
        Id {
            state: self.start_state.clone(),
            tape: w.to_vec(),
            stack: vec![self.start_stack.clone()],
        }
    }

    pub fn push_actions(&self) -> impl Iterator<Item = &Action<G>> {
        self.actions.iter().filter(|a| !a.is_pop())
    }

    pub fn pop_actions(&self) -> impl Iterator<Item = &Action<G>> {
        self.actions.iter().filter(|a| a.is_pop())
    }

    /// Rewrites every stack symbol; states and input are kept.
    pub fn map_symbols<H: StackSymbol>(&self, f: impl Fn(&G) -> H) -> Pda<H> {
        let mut out = Pda::new(
            self.start_state.clone(),
            f(&self.start_stack),
            self.actions
                .iter()
                .map(|a| Action {
                    from: a.from.clone(),
                    read: a.read.clone(),
                    pop: f(&a.pop),
                    to: a.to.clone(),
                    push: a.push.iter().map(&f).collect(),
                })
                .collect(),
        );
        out.states.extend(self.states.iter().cloned());
        out.input_alphabet
            .extend(self.input_alphabet.iter().cloned());
        out.stack_alphabet
            .extend(self.stack_alphabet.iter().map(&f));
        out
    }
}

/// Instantaneous descriptor; the stack is listed top first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Id<G = String> {
    pub state: String,
    pub tape: Vec<String>,
    pub stack: Vec<G>,
}

impl<G: fmt::Display> fmt::Display for Id<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tape = if self.tape.is_empty() {
            "ε".to_string()
        } else {
            crate::grammars::format_word(&self.tape)
        };
        let stack = if self.stack.is_empty() {
            "ε".to_string()
        } else {
            self.stack
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "({}, {}, {})", self.state, tape, stack)
    }
}

/// Applies `act` to `id`, failing when the state, stack top or input do not fit.
pub fn move_id<G: StackSymbol>(id: &Id<G>, act: &Action<G>) -> Result<Id<G>, PdaError> {
    let fits = act.from == id.state
        && id.stack.first() == Some(&act.pop)
        && match &act.read {
            None => true,
            Some(b) => id.tape.first() == Some(b),
        };
    if !fits {
        return Err(PdaError::Inapplicable {
            action: act.to_string(),
            id: id.to_string(),
        });
    }
    let tape = id.tape[usize::from(act.read.is_some())..].to_vec();
    let mut stack = act.push.clone();
    stack.extend(id.stack[1..].iter().cloned());
    Ok(Id {
        state: act.to.clone(),
        tape,
        stack,
    })
}

/// A move sequence from a single-symbol stack down to the empty stack. The
/// actions that produced each move are recorded alongside the IDs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiRun<G = String> {
    ids: Vec<Id<G>>,
    actions: Vec<Action<G>>,
}

impl<G: StackSymbol> QuasiRun<G> {
    pub fn new(ids: Vec<Id<G>>, actions: Vec<Action<G>>) -> Result<Self, PdaError> {
        if actions.is_empty() || ids.len() != actions.len() + 1 {
            return Err(PdaError::InvalidRun(
                "need at least one move and one more ID than moves".into(),
            ));
        }
        if ids[0].stack.len() != 1 {
            return Err(PdaError::InvalidRun(
                "first stack must hold one symbol".into(),
            ));
        }
        if !ids[ids.len() - 1].stack.is_empty() {
            return Err(PdaError::InvalidRun("last stack must be empty".into()));
        }
        for (i, act) in actions.iter().enumerate() {
            if move_id(&ids[i], act)? != ids[i + 1] {
                return Err(PdaError::InvalidRun(format!(
                    "move {} does not match",
                    i + 1
                )));
            }
        }
        Ok(QuasiRun { ids, actions })
    }

    /// Replays `actions` from `start`.
    pub fn replay(start: Id<G>, actions: Vec<Action<G>>) -> Result<Self, PdaError> {
        let mut ids = vec![start];
        for a in &actions {
            let next = move_id(ids.last().expect("non-empty"), a)?;
            ids.push(next);
        }
        QuasiRun::new(ids, actions)
    }

    pub fn ids(&self) -> &[Id<G>] {
        &self.ids
    }

    pub fn actions(&self) -> &[Action<G>] {
        &self.actions
    }

    pub fn moves(&self) -> usize {
        self.actions.len()
    }

    /// The input consumed by the quasi-run.
    pub fn consumed(&self) -> Vec<String> {
        self.actions.iter().filter_map(|a| a.read.clone()).collect()
    }

    /// A run of `p` on `w`: starts at the initial ID and consumes all of `w`.
    pub fn is_run_of(&self, p: &Pda<G>, w: &[String]) -> bool {
        self.ids[0] == p.initial_id(w) && self.ids[self.ids.len() - 1].tape.is_empty()
    }
}

impl<G: StackSymbol> fmt::Display for QuasiRun<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ids.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" ⊢ "))
    }
}
