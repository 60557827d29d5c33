//! Bounded-oscillation analysis of context-free languages.
//!
//! Dyck-word ranks and harmonics, tree dimension and oscillation, PDA run
//! oscillation, the level-annotated construction that keeps exactly the
//! k-oscillating runs, and decision procedures for k-emptiness and
//! k-membership.

pub mod decide;
pub mod dyck;
pub mod fixtures;
pub mod grammars;
pub mod kconstruct;
pub mod pda;
pub mod trees;
