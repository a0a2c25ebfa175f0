//! Computation tree logic: syntax, an explicit-state model checker and a
//! naive reference evaluator.

mod checker;
mod formula;
mod naive;

pub use checker::{check, eg_greatest_fixpoint, eg_via_scc, sat_set};
pub use formula::Formula;
pub use naive::naive_sat_set;

pub(crate) use formula::is_atom_char;
