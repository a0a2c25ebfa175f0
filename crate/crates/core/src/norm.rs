//! Dynamic normative systems: automata that forbid joint actions depending on
//! the environment state and an internal normative state, and update that
//! normative state as the environment moves.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{is_available, joint_actions_at, JointAction, Mas, StateId, ValidationReport, Violation};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormStateId(pub u32);

impl NormStateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A normative system over a fixed multiagent system.
///
/// The update function is stored densely (`|Q| x |S|`), so it is total by
/// construction; fresh systems update every normative state to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormativeSystem {
    norm_states: Vec<String>,
    initial: NormStateId,
    num_states: usize,
    forbids: BTreeMap<(StateId, NormStateId), BTreeSet<JointAction>>,
    updates: Vec<NormStateId>,
}

impl NormativeSystem {
    /// A system with the given normative states that forbids nothing and
    /// never changes its normative state.
    pub fn new<I, S>(norm_states: I, initial: NormStateId, num_states: usize) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let norm_states: Vec<String> = norm_states.into_iter().map(Into::into).collect();
        let updates =
            (0..norm_states.len()).flat_map(|q| std::iter::repeat_n(NormStateId(q as u32), num_states)).collect();
        NormativeSystem { norm_states, initial, num_states, forbids: BTreeMap::new(), updates }
    }

    /// The single-state system that forbids nothing.
    pub fn identity(m: &Mas) -> Self {
        Self::new(["q0"], NormStateId(0), m.num_states())
    }

    pub fn norm_states(&self) -> &[String] {
        &self.norm_states
    }

    pub fn num_norm_states(&self) -> usize {
        self.norm_states.len()
    }

    pub fn norm_state_ids(&self) -> impl Iterator<Item = NormStateId> {
        (0..self.norm_states.len() as u32).map(NormStateId)
    }

    pub fn norm_state_name(&self, q: NormStateId) -> &str {
        &self.norm_states[q.index()]
    }

    pub fn norm_state_id(&self, name: &str) -> Option<NormStateId> {
        self.norm_states.iter().position(|n| n == name).map(|i| NormStateId(i as u32))
    }

    pub fn initial(&self) -> NormStateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn forbidden(&self, s: StateId, q: NormStateId) -> Option<&BTreeSet<JointAction>> {
        self.forbids.get(&(s, q))
    }

    pub fn is_forbidden(&self, s: StateId, q: NormStateId, a: &JointAction) -> bool {
        self.forbids.get(&(s, q)).is_some_and(|f| f.contains(a))
    }

    pub fn forbid_entries(&self) -> impl Iterator<Item = (StateId, NormStateId, &BTreeSet<JointAction>)> {
        self.forbids.iter().map(|(&(s, q), set)| (s, q, set))
    }

    pub fn forbid(&mut self, s: StateId, q: NormStateId, a: JointAction) {
        self.forbids.entry((s, q)).or_default().insert(a);
    }

    pub fn set_forbidden(&mut self, s: StateId, q: NormStateId, set: BTreeSet<JointAction>) {
        if set.is_empty() {
            self.forbids.remove(&(s, q));
        } else {
            self.forbids.insert((s, q), set);
        }
    }

    /// Normative state after the environment moves into `s` while in `q`.
    pub fn update(&self, q: NormStateId, s: StateId) -> NormStateId {
        self.updates[q.index() * self.num_states + s.index()]
    }

    pub fn set_update(&mut self, q: NormStateId, s: StateId, target: NormStateId) {
        self.updates[q.index() * self.num_states + s.index()] = target;
    }

    /// `|Q| = 1`; a single-state system necessarily updates to itself.
    pub fn is_static(&self) -> bool {
        self.norm_states.len() == 1
    }
}

/// Checks the strict-subset rule and the shape of the update function.
pub fn validate_norm(m: &Mas, n: &NormativeSystem) -> ValidationReport {
    let mut report = ValidationReport::default();
    if n.norm_states.is_empty() || n.initial.index() >= n.norm_states.len() {
        report.push(Violation::NoNormStates);
        return report;
    }
    if n.num_states != m.num_states() || n.updates.len() != n.norm_states.len() * n.num_states {
        report.push(Violation::NormShape { expected: m.num_states(), found: n.num_states });
        return report;
    }
    for q in n.norm_state_ids() {
        for s in m.states() {
            if n.update(q, s).index() >= n.norm_states.len() {
                report.push(Violation::UpdateOutOfRange {
                    norm_state: n.norm_state_name(q).to_string(),
                    state: m.state_name(s).to_string(),
                });
            }
        }
    }
    for (&(s, q), set) in &n.forbids {
        if s.index() >= m.num_states() || q.index() >= n.norm_states.len() {
            report.push(Violation::NormShape { expected: m.num_states(), found: n.num_states });
            continue;
        }
        let state = m.state_name(s).to_string();
        let norm_state = n.norm_state_name(q).to_string();
        let mut covered = 0usize;
        for a in set {
            if is_available(m, s, a) {
                covered += 1;
            } else {
                report.push(Violation::ForbidsUnavailable {
                    state: state.clone(),
                    norm_state: norm_state.clone(),
                    action: m.format_joint_action(a),
                });
            }
        }
        if covered >= joint_actions_at(m, s).len() {
            report.push(Violation::ForbidsEverything { state, norm_state });
        }
    }
    report
}

/// A static normative system forbidding `delta[s]` at each listed state and
/// nothing elsewhere.
pub fn make_static(m: &Mas, delta: &BTreeMap<StateId, BTreeSet<JointAction>>) -> Result<NormativeSystem> {
    let mut n = NormativeSystem::identity(m);
    for (&s, set) in delta {
        m.check_state(s)?;
        n.set_forbidden(s, NormStateId(0), set.clone());
    }
    let report = validate_norm(m, &n);
    if report.is_ok() {
        Ok(n)
    } else {
        Err(Error::InvalidNorm(report))
    }
}
