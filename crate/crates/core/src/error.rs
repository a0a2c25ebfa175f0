use thiserror::Error;

use crate::dsl::ParseError;
use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown action `{action}` for agent `{agent}`")]
    UnknownAction { agent: String, action: String },
    #[error("unknown normative state `{0}`")]
    UnknownNormState(String),
    #[error("invalid multiagent system:\n{0}")]
    InvalidMas(ValidationReport),
    #[error("invalid normative system:\n{0}")]
    InvalidNorm(ValidationReport),
    #[error("normative system was built for {expected} states, model has {found}")]
    NormShape { expected: usize, found: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("a norm family needs at least two members to build a synchronised product")]
    SingletonFamily,
    #[error("norm family is empty")]
    EmptyFamily,
    #[error("active index {active} out of range for a family of {len}")]
    ActiveOutOfRange { active: usize, len: usize },
    #[error("invalid ecosystem configuration: {0}")]
    Config(String),
    #[error("automaton has an empty alphabet")]
    EmptyAlphabet,
    #[error("symbol `{0}` is reserved by the recognition gadget")]
    ReservedSymbol(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}
