//! Partial-observation multiagent systems.
//!
//! A [`Mas`] is a finite transition system whose transitions are labelled
//! with joint actions, one local action per agent. Every agent has a set of
//! locally available actions at each state and an observation of each state.
//! Identifiers are interned strings; the numeric ids handed out by the
//! [`MasBuilder`] are dense and stable for the lifetime of the system.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One local action per agent, in the system's agent order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointAction(pub Vec<ActionId>);

impl JointAction {
    pub fn new(actions: impl Into<Vec<ActionId>>) -> Self {
        JointAction(actions.into())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, agent: usize) -> ActionId {
        self.0[agent]
    }
}

/// A finite multiagent system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mas {
    agents: Vec<String>,
    actions: Vec<Vec<String>>,
    action_index: Vec<HashMap<String, ActionId>>,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    /// `[state][agent]`, kept sorted.
    availability: Vec<Vec<Vec<ActionId>>>,
    initial: Vec<StateId>,
    /// Outgoing transitions per source state, sorted and deduplicated.
    transitions: Vec<Vec<(JointAction, StateId)>>,
    /// `[agent][state]`; `None` means the agent observes the state itself.
    observations: Vec<Vec<Option<String>>>,
    labels: Vec<BTreeSet<String>>,
}

impl Mas {
    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == name)
    }

    pub fn actions(&self, agent: usize) -> &[String] {
        &self.actions[agent]
    }

    pub fn action_name(&self, agent: usize, action: ActionId) -> &str {
        &self.actions[agent][action.index()]
    }

    pub fn action_id(&self, agent: usize, name: &str) -> Option<ActionId> {
        self.action_index[agent].get(name).copied()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn available(&self, s: StateId, agent: usize) -> &[ActionId] {
        &self.availability[s.index()][agent]
    }

    pub fn transitions_from(&self, s: StateId) -> &[(JointAction, StateId)] {
        &self.transitions[s.index()]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &JointAction, StateId)> + '_ {
        self.transitions.iter().enumerate().flat_map(|(s, ts)| ts.iter().map(move |(a, t)| (StateId(s as u32), a, *t)))
    }

    /// The observation agent `agent` makes at `s`.
    pub fn observation(&self, agent: usize, s: StateId) -> &str {
        match &self.observations[agent][s.index()] {
            Some(o) => o,
            None => &self.states[s.index()],
        }
    }

    /// The explicitly assigned observation, if any.
    pub fn explicit_observation(&self, agent: usize, s: StateId) -> Option<&str> {
        self.observations[agent][s.index()].as_deref()
    }

    pub fn labels(&self, s: StateId) -> &BTreeSet<String> {
        &self.labels[s.index()]
    }

    pub fn propositions(&self) -> BTreeSet<&str> {
        self.labels.iter().flatten().map(String::as_str).collect()
    }

    pub fn check_state(&self, s: StateId) -> Result<()> {
        if s.index() < self.states.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{}", s.0)))
        }
    }

    pub fn format_joint_action(&self, a: &JointAction) -> String {
        let parts: Vec<&str> =
            a.0.iter()
                .enumerate()
                .map(|(i, act)| {
                    self.actions.get(i).and_then(|acts| acts.get(act.index())).map(String::as_str).unwrap_or("?")
                })
                .collect();
        format!("({})", parts.join(","))
    }

    /// States reachable from the initial states under all transitions.
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = std::collections::VecDeque::new();
        for &s in &self.initial {
            if !seen[s.index()] {
                seen[s.index()] = true;
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for (_, t) in self.transitions_from(s) {
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    queue.push_back(*t);
                }
            }
        }
        self.states().filter(|s| seen[s.index()]).collect()
    }
}

/// Incremental construction of a [`Mas`].
///
/// States and actions are interned by name; re-declaring a name returns the
/// existing id.
#[derive(Clone, Debug, Default)]
pub struct MasBuilder {
    agents: Vec<String>,
    actions: Vec<Vec<String>>,
    action_index: Vec<HashMap<String, ActionId>>,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    availability: Vec<Vec<Vec<ActionId>>>,
    initial: BTreeSet<StateId>,
    transitions: Vec<BTreeSet<(JointAction, StateId)>>,
    observations: Vec<Vec<Option<String>>>,
    labels: Vec<BTreeSet<String>>,
}

impl MasBuilder {
    pub fn new<I, S>(agents: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let agents: Vec<String> = agents.into_iter().map(Into::into).collect();
        let n = agents.len();
        MasBuilder {
            agents,
            actions: vec![Vec::new(); n],
            action_index: vec![HashMap::new(); n],
            observations: vec![Vec::new(); n],
            ..Default::default()
        }
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == name)
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.state_index.get(name) {
            return id;
        }
        let id = StateId(self.states.len() as u32);
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        self.availability.push(vec![Vec::new(); self.agents.len()]);
        self.transitions.push(BTreeSet::new());
        self.labels.push(BTreeSet::new());
        for obs in &mut self.observations {
            obs.push(None);
        }
        id
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn action(&mut self, agent: usize, name: &str) -> ActionId {
        if let Some(&id) = self.action_index[agent].get(name) {
            return id;
        }
        let id = ActionId(self.actions[agent].len() as u32);
        self.actions[agent].push(name.to_string());
        self.action_index[agent].insert(name.to_string(), id);
        id
    }

    pub fn action_id(&self, agent: usize, name: &str) -> Option<ActionId> {
        self.action_index[agent].get(name).copied()
    }

    pub fn set_available(&mut self, s: StateId, agent: usize, actions: impl IntoIterator<Item = ActionId>) {
        let mut acts: Vec<ActionId> = actions.into_iter().collect();
        acts.sort();
        acts.dedup();
        self.availability[s.index()][agent] = acts;
    }

    pub fn add_initial(&mut self, s: StateId) {
        self.initial.insert(s);
    }

    pub fn add_transition(&mut self, from: StateId, action: JointAction, to: StateId) {
        self.transitions[from.index()].insert((action, to));
    }

    pub fn set_observation(&mut self, agent: usize, s: StateId, obs: impl Into<String>) {
        self.observations[agent][s.index()] = Some(obs.into());
    }

    pub fn add_label(&mut self, s: StateId, prop: impl Into<String>) {
        self.labels[s.index()].insert(prop.into());
    }

    pub fn build(self) -> Mas {
        Mas {
            agents: self.agents,
            actions: self.actions,
            action_index: self.action_index,
            states: self.states,
            state_index: self.state_index,
            availability: self.availability,
            initial: self.initial.into_iter().collect(),
            transitions: self.transitions.into_iter().map(|t| t.into_iter().collect()).collect(),
            observations: self.observations,
            labels: self.labels,
        }
    }
}

/// One broken invariant of a multiagent or normative system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoAgents,
    NoStates,
    NoInitialState,
    EmptyAvailability { state: String, agent: String },
    ArityMismatch { state: String, expected: usize, found: usize },
    UnavailableAction { state: String, agent: String, action: String },
    NotSerial { state: String, action: String },
    ObservationMismatch { agent: String, first: String, second: String },
    NoNormStates,
    NormShape { expected: usize, found: usize },
    ForbidsEverything { state: String, norm_state: String },
    ForbidsUnavailable { state: String, norm_state: String, action: String },
    UpdateOutOfRange { norm_state: String, state: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAgents => write!(f, "system has no agents"),
            Violation::NoStates => write!(f, "system has no states"),
            Violation::NoInitialState => write!(f, "system has no initial state"),
            Violation::EmptyAvailability { state, agent } => {
                write!(f, "agent `{agent}` has no available action at `{state}`")
            }
            Violation::ArityMismatch { state, expected, found } => {
                write!(f, "transition from `{state}` has {found} local actions, expected {expected}")
            }
            Violation::UnavailableAction { state, agent, action } => {
                write!(f, "transition from `{state}` uses action `{action}` not available to `{agent}`")
            }
            Violation::NotSerial { state, action } => {
                write!(f, "no transition from `{state}` on available joint action {action}")
            }
            Violation::ObservationMismatch { agent, first, second } => {
                write!(f, "agent `{agent}` observes `{first}` and `{second}` alike but has different available actions")
            }
            Violation::NoNormStates => write!(f, "normative system has no normative states"),
            Violation::NormShape { expected, found } => {
                write!(f, "update table covers {found} states, model has {expected}")
            }
            Violation::ForbidsEverything { state, norm_state } => {
                write!(f, "every available joint action is forbidden at (`{state}`, `{norm_state}`)")
            }
            Violation::ForbidsUnavailable { state, norm_state, action } => {
                write!(f, "forbidden joint action {action} at (`{state}`, `{norm_state}`) is not available")
            }
            Violation::UpdateOutOfRange { norm_state, state } => {
                write!(f, "update of `{norm_state}` on `{state}` targets an undeclared normative state")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// The cartesian product of the agents' available actions at `s`, in
/// lexicographic order of the (sorted) availability lists.
pub fn available_joint_actions(m: &Mas, s: StateId) -> Result<Vec<JointAction>> {
    m.check_state(s)?;
    Ok(joint_actions_at(m, s))
}

pub(crate) fn joint_actions_at(m: &Mas, s: StateId) -> Vec<JointAction> {
    let avail = &m.availability[s.index()];
    if avail.is_empty() || avail.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = vec![Vec::with_capacity(avail.len())];
    for choices in avail {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(JointAction).collect()
}

pub(crate) fn is_available(m: &Mas, s: StateId, a: &JointAction) -> bool {
    a.arity() == m.num_agents() && a.0.iter().enumerate().all(|(i, act)| m.available(s, i).binary_search(act).is_ok())
}

/// Checks every structural invariant of `m`; an empty report certifies a
/// well-formed system.
pub fn validate_mas(m: &Mas) -> ValidationReport {
    let mut report = ValidationReport::default();
    if m.num_agents() == 0 {
        report.push(Violation::NoAgents);
    }
    if m.num_states() == 0 {
        report.push(Violation::NoStates);
    }
    if m.initial.is_empty() {
        report.push(Violation::NoInitialState);
    }
    if !report.is_ok() {
        return report;
    }

    for s in m.states() {
        for agent in 0..m.num_agents() {
            if m.available(s, agent).is_empty() {
                report.push(Violation::EmptyAvailability {
                    state: m.state_name(s).to_string(),
                    agent: m.agents[agent].clone(),
                });
            }
        }
    }

    for (s, a, _) in m.transitions() {
        if a.arity() != m.num_agents() {
            report.push(Violation::ArityMismatch {
                state: m.state_name(s).to_string(),
                expected: m.num_agents(),
                found: a.arity(),
            });
            continue;
        }
        for (agent, act) in a.0.iter().enumerate() {
            if m.available(s, agent).binary_search(act).is_err() {
                report.push(Violation::UnavailableAction {
                    state: m.state_name(s).to_string(),
                    agent: m.agents[agent].clone(),
                    action: m.actions[agent].get(act.index()).cloned().unwrap_or_else(|| format!("#{}", act.0)),
                });
            }
        }
    }

    for s in m.states() {
        let outgoing = m.transitions_from(s);
        for a in joint_actions_at(m, s) {
            let has = outgoing.iter().any(|(b, _)| *b == a);
            if !has {
                report.push(Violation::NotSerial {
                    state: m.state_name(s).to_string(),
                    action: m.format_joint_action(&a),
                });
            }
        }
    }

    for agent in 0..m.num_agents() {
        let mut first_with: BTreeMap<&str, StateId> = BTreeMap::new();
        for s in m.states() {
            let obs = m.observation(agent, s);
            match first_with.get(obs) {
                None => {
                    first_with.insert(obs, s);
                }
                Some(&u) => {
                    if m.available(u, agent) != m.available(s, agent) {
                        report.push(Violation::ObservationMismatch {
                            agent: m.agents[agent].clone(),
                            first: m.state_name(u).to_string(),
                            second: m.state_name(s).to_string(),
                        });
                    }
                }
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_state() -> Mas {
        let mut b = MasBuilder::new(["x"]);
        let s = b.state("s");
        let a = b.action(0, "a");
        b.set_available(s, 0, [a]);
        b.add_initial(s);
        b.add_transition(s, JointAction::new([a]), s);
        b.build()
    }

    #[test]
    fn minimal_system_is_valid() {
        assert!(validate_mas(&single_state()).is_ok());
    }

    #[test]
    fn observation_availability_mismatch_is_reported() {
        let mut b = MasBuilder::new(["x"]);
        let u = b.state("u");
        let v = b.state("v");
        let a = b.action(0, "a");
        let c = b.action(0, "c");
        b.set_available(u, 0, [a]);
        b.set_available(v, 0, [a, c]);
        b.set_observation(0, u, "same");
        b.set_observation(0, v, "same");
        b.add_initial(u);
        b.add_transition(u, JointAction::new([a]), v);
        b.add_transition(v, JointAction::new([a]), u);
        b.add_transition(v, JointAction::new([c]), v);
        let report = validate_mas(&b.build());
        assert_eq!(
            report.violations,
            vec![Violation::ObservationMismatch { agent: "x".into(), first: "u".into(), second: "v".into() }]
        );
    }

    #[test]
    fn degenerate_systems_are_reported_not_panicking() {
        let empty = MasBuilder::new(Vec::<String>::new()).build();
        let report = validate_mas(&empty);
        assert!(report.violations.contains(&Violation::NoAgents));
        assert!(report.violations.contains(&Violation::NoStates));

        let no_states = MasBuilder::new(["x"]).build();
        assert!(validate_mas(&no_states).violations.contains(&Violation::NoStates));
    }

    #[test]
    fn missing_transition_breaks_seriality() {
        let mut b = MasBuilder::new(["x"]);
        let s = b.state("s");
        let a = b.action(0, "a");
        let c = b.action(0, "c");
        b.set_available(s, 0, [a, c]);
        b.add_initial(s);
        b.add_transition(s, JointAction::new([a]), s);
        let report = validate_mas(&b.build());
        assert_eq!(report.violations, vec![Violation::NotSerial { state: "s".into(), action: "(c)".into() }]);
    }

    #[test]
    fn unavailable_transition_action_is_reported() {
        let mut b = MasBuilder::new(["x"]);
        let s = b.state("s");
        let a = b.action(0, "a");
        let c = b.action(0, "c");
        b.set_available(s, 0, [a]);
        b.add_initial(s);
        b.add_transition(s, JointAction::new([a]), s);
        b.add_transition(s, JointAction::new([c]), s);
        let report = validate_mas(&b.build());
        assert!(matches!(report.violations[..], [Violation::UnavailableAction { .. }]));
    }

    #[test]
    fn joint_actions_are_the_cartesian_product() {
        let mut b = MasBuilder::new(["x", "y"]);
        let s = b.state("s");
        let xa: Vec<_> = ["a", "b"].iter().map(|n| b.action(0, n)).collect();
        let ya: Vec<_> = ["c", "d", "e"].iter().map(|n| b.action(1, n)).collect();
        b.set_available(s, 0, xa.clone());
        b.set_available(s, 1, ya.clone());
        let m = b.build();
        let joint = available_joint_actions(&m, s).unwrap();
        assert_eq!(joint.len(), 6);
        assert_eq!(joint[0], JointAction::new([xa[0], ya[0]]));
        assert_eq!(joint[5], JointAction::new([xa[1], ya[2]]));
        assert!(available_joint_actions(&m, StateId(7)).is_err());
    }

    #[test]
    fn singleton_availability_gives_one_joint_action() {
        let m = single_state();
        assert_eq!(available_joint_actions(&m, StateId(0)).unwrap().len(), 1);
    }
}
