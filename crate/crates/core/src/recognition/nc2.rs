use std::collections::{HashMap, VecDeque};

use super::{NormFamily, RecognitionVerdict};
use crate::kripke::ProductState;

/// A state of the subset construction: a state of the active member's
/// structure and every `(member, state)` whose runs are observationally
/// indistinguishable from the runs leading to it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetState {
    pub first: usize,
    /// Sorted `(member, state index)` pairs.
    pub set: Vec<(usize, usize)>,
    pub goal: bool,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Nc2Stats {
    /// Subset states generated before the search stopped.
    pub explored: usize,
}

struct Explorer<'f> {
    f: &'f NormFamily,
    states: Vec<SubsetState>,
    parent: Vec<usize>,
    index: HashMap<(usize, Vec<(usize, usize)>), usize>,
    queue: VecDeque<usize>,
}

impl<'f> Explorer<'f> {
    fn new(f: &'f NormFamily) -> Self {
        let mut e =
            Explorer { f, states: Vec::new(), parent: Vec::new(), index: HashMap::new(), queue: VecDeque::new() };
        let a = f.active();
        for &s in f.structure(a).initial() {
            let o = f.obs(a, s);
            let mut set = Vec::new();
            for j in 0..f.len() {
                set.extend(f.structure(j).initial().iter().filter(|&&t| f.obs(j, t) == o).map(|&t| (j, t)));
            }
            e.add(s, set, usize::MAX);
        }
        e
    }

    fn add(&mut self, first: usize, mut set: Vec<(usize, usize)>, parent: usize) -> Option<usize> {
        set.sort_unstable();
        set.dedup();
        let key = (first, set);
        if self.index.contains_key(&key) {
            return None;
        }
        let a = self.f.active();
        let goal = key.1.iter().all(|&(j, _)| j == a);
        let i = self.states.len();
        self.states.push(SubsetState { first, set: key.1.clone(), goal });
        self.parent.push(parent);
        self.index.insert(key, i);
        self.queue.push_back(i);
        Some(i)
    }

    fn expand(&mut self, i: usize) -> Vec<usize> {
        let f = self.f;
        let a = f.active();
        let first = self.states[i].first;
        let set = self.states[i].set.clone();
        let mut out = Vec::new();
        for &t in f.structure(a).successors(first) {
            let o = f.obs(a, t);
            let mut next = Vec::new();
            for &(j, s) in &set {
                next.extend(f.structure(j).successors(s).iter().filter(|&&u| f.obs(j, u) == o).map(|&u| (j, u)));
            }
            if let Some(k) = self.add(t, next, i) {
                out.push(k);
            }
        }
        out
    }

    fn path_to(&self, mut i: usize) -> Vec<ProductState> {
        let k0 = self.f.structure(self.f.active());
        let mut out = Vec::new();
        while i != usize::MAX {
            out.push(k0.state(self.states[i].first));
            i = self.parent[i];
        }
        out.reverse();
        out
    }
}

/// Decides whether some finite run of the active member has an observation
/// sequence produced only by the active member's runs. The witness is the
/// shortest such run.
pub fn decide_nc2(f: &NormFamily) -> RecognitionVerdict {
    decide_nc2_detailed(f).0
}

/// [`decide_nc2`] together with search statistics.
pub fn decide_nc2_detailed(f: &NormFamily) -> (RecognitionVerdict, Nc2Stats) {
    let mut e = Explorer::new(f);
    while let Some(i) = e.queue.pop_front() {
        if e.states[i].goal {
            let stats = Nc2Stats { explored: e.states.len() };
            return (RecognitionVerdict::Nc2Successful(e.path_to(i)), stats);
        }
        e.expand(i);
    }
    (RecognitionVerdict::Nc2Unsuccessful, Nc2Stats { explored: e.states.len() })
}

/// Every subset state reachable from the initial ones, in breadth-first
/// order, stopping after `limit` states.
pub fn subset_states(f: &NormFamily, limit: usize) -> Vec<SubsetState> {
    let mut e = Explorer::new(f);
    while let Some(i) = e.queue.pop_front() {
        if e.states.len() >= limit {
            break;
        }
        e.expand(i);
    }
    e.states.truncate(limit);
    e.states
}
