//! Norm recognition by an outside observer.
//!
//! Given a family of candidate normative systems, the observer sees only its
//! own observation of each state. The first problem asks whether every
//! infinite run of the active member eventually betrays its index; it fails
//! exactly when some run of the active member and some run of a rival can be
//! kept observationally equal forever. The second asks whether there is a
//! finite run of the active member whose observations no rival reproduces.

mod brute;
mod family;
mod nc1;
mod nc2;
mod nfa;

pub use brute::{check_nc1_witness, check_nc2_witness, nc1_bruteforce, nc2_bruteforce};
pub use family::NormFamily;
pub use nc1::{build_sync_product, decide_nc1, SyncProduct, SyncProductState};
pub use nc2::{decide_nc2, decide_nc2_detailed, subset_states, Nc2Stats, SubsetState};
pub use nfa::{build_nfa_recognition_instance, nfa_run_universal, Nfa, ENTER_AUTOMATON, ENTER_UNIVERSAL};

use crate::kripke::ProductState;

/// Two runs that stay observationally equal forever: `stem` followed by
/// `cycle` repeated. The first component of each pair is a state of the
/// active member's structure, the second a state of member `rival`'s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoWitness {
    pub rival: usize,
    pub stem: Vec<(ProductState, ProductState)>,
    pub cycle: Vec<(ProductState, ProductState)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecognitionVerdict {
    Nc1Successful,
    Nc1Unsuccessful(LassoWitness),
    /// A finite run of the active member.
    Nc2Successful(Vec<ProductState>),
    Nc2Unsuccessful,
}

impl RecognitionVerdict {
    pub fn is_successful(&self) -> bool {
        matches!(self, RecognitionVerdict::Nc1Successful | RecognitionVerdict::Nc2Successful(_))
    }
}
