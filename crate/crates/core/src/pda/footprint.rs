//! Disassembly of quasi-runs into sub-quasi-runs, and the footprint built on it.

use crate::dyck::{self, DyckSymbol, DyckWord};

use super::{Action, Id, PdaError, QuasiRun, StackSymbol};

/// A quasi-run split after its first move into one sub-quasi-run per pushed
/// symbol. `splits[i]` is the ID index where sub-run `i + 1` ends; index 1 is
/// where the first sub-run starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disassembly<G = String> {
    pub start: Id<G>,
    pub first: Action<G>,
    pub splits: Vec<usize>,
    pub parts: Vec<QuasiRun<G>>,
}

pub fn disassemble<G: StackSymbol>(r: &QuasiRun<G>) -> Result<Disassembly<G>, PdaError> {
    if r.moves() < 2 {
        return Err(PdaError::TooShort);
    }
    let ids = r.ids();
    let d = ids[1].stack.len();
    let mut splits = Vec::with_capacity(d);
    let mut parts = Vec::with_capacity(d);
    let mut from = 1;
    for _ in 0..d {
        let below = ids[from].stack.len() - 1;
        let to = (from + 1..ids.len())
            .find(|&j| ids[j].stack.len() == below)
            .ok_or_else(|| PdaError::InvalidRun("stack never shrinks".into()))?;
        let part_ids: Vec<Id<G>> = ids[from..=to]
            .iter()
            .map(|id| Id {
                state: id.state.clone(),
                tape: id.tape.clone(),
                stack: id.stack[..id.stack.len() - below].to_vec(),
            })
            .collect();
        parts.push(QuasiRun::new(part_ids, r.actions()[from..to].to_vec())?);
        splits.push(to);
        from = to;
    }
    Ok(Disassembly {
        start: ids[0].clone(),
        first: r.actions()[0].clone(),
        splits,
        parts,
    })
}

/// Inverse of [`disassemble`].
pub fn reassemble<G: StackSymbol>(d: &Disassembly<G>) -> Result<QuasiRun<G>, PdaError> {
    let mut actions = vec![d.first.clone()];
    for part in &d.parts {
        actions.extend(part.actions().iter().cloned());
    }
    QuasiRun::replay(d.start.clone(), actions)
}

pub fn run_footprint<G: StackSymbol>(r: &QuasiRun<G>) -> DyckWord {
    let mut out = vec![DyckSymbol::Open];
    push_footprint(r, &mut out);
    DyckWord::new(out).expect("run footprints are balanced")
}

fn push_footprint<G: StackSymbol>(r: &QuasiRun<G>, out: &mut Vec<DyckSymbol>) {
    out.push(DyckSymbol::Close);
    if r.moves() == 1 {
        return;
    }
    let d = disassemble(r).expect("quasi-runs with two or more moves disassemble");
    out.extend(std::iter::repeat(DyckSymbol::Open).take(d.parts.len()));
    for part in &d.parts {
        push_footprint(part, out);
    }
}

pub fn run_oscillation<G: StackSymbol>(r: &QuasiRun<G>) -> usize {
    dyck::rank(&run_footprint(r))
}

/// Largest stack length over the IDs of `r`.
pub fn run_stack_height<G: StackSymbol>(r: &QuasiRun<G>) -> usize {
    r.ids().iter().map(|id| id.stack.len()).max().unwrap_or(0)
}
