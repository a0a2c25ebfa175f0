//! Explicit-state verification of multiagent systems under dynamic norms.
//!
//! A [`model::Mas`] describes agents, their available actions, partial
//! observations and a labelled transition relation. A
//! [`norm::NormativeSystem`] is an automaton that forbids joint actions
//! depending on its own state and is updated by every environment
//! transition. Applying one to the other ([`kripke::apply_norm`]) gives a
//! Kripke structure on which [`ctl`] formulas are checked.
//!
//! On top of that the crate offers norm synthesis ([`synthesis`]), norm
//! recognition by an outside observer ([`recognition`]), text formats
//! ([`dsl`]), the producer/consumer case study ([`ecosystem`]) and the
//! command-line driver ([`cli`]).

pub mod cli;
pub mod ctl;
pub mod dsl;
pub mod ecosystem;
pub mod error;
mod graph;
pub mod kripke;
pub mod model;
pub mod norm;
pub mod recognition;
pub mod synthesis;

pub use error::{Error, Result};
