use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::kripke::{build_product, KripkeStructure, ProductState};
use crate::model::{validate_mas, Mas, StateId};
use crate::norm::{validate_norm, NormativeSystem};

/// A model together with the candidate normative systems an outside agent
/// may be facing, and that agent's observation function.
///
/// Members are identified by position. The product structure of every member
/// is computed once at construction.
#[derive(Clone, Debug)]
pub struct NormFamily {
    mas: Mas,
    members: Vec<NormativeSystem>,
    active: usize,
    observations: Vec<String>,
    obs_ids: Vec<u32>,
    structures: Vec<KripkeStructure>,
}

impl NormFamily {
    /// `observations[s]` is what the outside agent sees in state `s`.
    pub fn new(mas: Mas, members: Vec<NormativeSystem>, active: usize, observations: Vec<String>) -> Result<Self> {
        let report = validate_mas(&mas);
        if !report.is_ok() {
            return Err(Error::InvalidMas(report));
        }
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if active >= members.len() {
            return Err(Error::ActiveOutOfRange { active, len: members.len() });
        }
        if observations.len() != mas.num_states() {
            return Err(Error::Config(format!(
                "expected {} observations, found {}",
                mas.num_states(),
                observations.len()
            )));
        }
        for n in &members {
            if n.num_states() != mas.num_states() {
                return Err(Error::NormShape { expected: n.num_states(), found: mas.num_states() });
            }
            let report = validate_norm(&mas, n);
            if !report.is_ok() {
                return Err(Error::InvalidNorm(report));
            }
        }
        let mut intern: HashMap<&str, u32> = HashMap::new();
        let obs_ids = observations
            .iter()
            .map(|o| {
                let next = intern.len() as u32;
                *intern.entry(o.as_str()).or_insert(next)
            })
            .collect();
        let structures = members.iter().map(|n| build_product(&mas, n)).collect();
        Ok(NormFamily { mas, members, active, observations, obs_ids, structures })
    }

    /// Uses the observation function of one of the system's own agents.
    pub fn observed_by(mas: Mas, members: Vec<NormativeSystem>, active: usize, agent: usize) -> Result<Self> {
        if agent >= mas.num_agents() {
            return Err(Error::UnknownAgent(agent.to_string()));
        }
        let obs = mas.states().map(|s| mas.observation(agent, s).to_string()).collect();
        NormFamily::new(mas, members, active, obs)
    }

    pub fn mas(&self) -> &Mas {
        &self.mas
    }

    pub fn members(&self) -> &[NormativeSystem] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn active(&self) -> usize {
        self.active
    }

    /// The product structure of member `i`.
    pub fn structure(&self, i: usize) -> &KripkeStructure {
        &self.structures[i]
    }

    pub fn observation(&self, s: StateId) -> &str {
        &self.observations[s.index()]
    }

    pub fn observations(&self) -> &[String] {
        &self.observations
    }

    pub(crate) fn obs(&self, member: usize, i: usize) -> u32 {
        self.obs_ids[self.structures[member].state(i).state.index()]
    }

    /// Pointwise observation of a sequence of product states.
    pub fn extend_observation(&self, path: &[ProductState]) -> Vec<String> {
        path.iter().map(|p| self.observation(p.state).to_string()).collect()
    }

    /// The same family with a different active member.
    pub fn with_active(&self, active: usize) -> Result<Self> {
        if active >= self.members.len() {
            return Err(Error::ActiveOutOfRange { active, len: self.members.len() });
        }
        Ok(NormFamily { active, ..self.clone() })
    }
}
