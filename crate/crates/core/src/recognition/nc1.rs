use std::collections::{HashMap, VecDeque};

use super::{LassoWitness, NormFamily, RecognitionVerdict};
use crate::error::{Error, Result};
use crate::graph::{bfs_path, is_nontrivial, tarjan_scc};

/// A state of the synchronised product: a state of the active member's
/// structure paired with a state of a rival's structure.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SyncProductState {
    /// Index into the active member's structure.
    pub left: usize,
    pub rival: usize,
    /// Index into the rival's structure.
    pub right: usize,
    pub safe: bool,
}

/// The reachable part of the synchronised product.
#[derive(Clone, Debug)]
pub struct SyncProduct {
    pub states: Vec<SyncProductState>,
    pub initial: Vec<usize>,
    pub successors: Vec<Vec<usize>>,
}

impl SyncProduct {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Builds the pairs reachable from observation-equal initial pairs, where
/// both components move along their own edges and the destinations have
/// equal observations.
pub fn build_sync_product(f: &NormFamily) -> Result<SyncProduct> {
    if f.len() < 2 {
        return Err(Error::SingletonFamily);
    }
    let a = f.active();
    let k0 = f.structure(a);
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut p = SyncProduct { states: Vec::new(), initial: Vec::new(), successors: Vec::new() };
    let mut queue = VecDeque::new();

    let mut add = |p: &mut SyncProduct, key: (usize, usize, usize), queue: &mut VecDeque<usize>| -> usize {
        *index.entry(key).or_insert_with(|| {
            let (left, rival, right) = key;
            p.states.push(SyncProductState { left, rival, right, safe: rival != a });
            p.successors.push(Vec::new());
            queue.push_back(p.states.len() - 1);
            p.states.len() - 1
        })
    };

    for rival in (0..f.len()).filter(|&j| j != a) {
        let kj = f.structure(rival);
        for &s in k0.initial() {
            for &t in kj.initial() {
                if f.obs(a, s) == f.obs(rival, t) {
                    let i = add(&mut p, (s, rival, t), &mut queue);
                    if !p.initial.contains(&i) {
                        p.initial.push(i);
                    }
                }
            }
        }
    }
    while let Some(i) = queue.pop_front() {
        let SyncProductState { left, rival, right, .. } = p.states[i];
        let kj = f.structure(rival);
        let mut succ = Vec::new();
        for &s2 in k0.successors(left) {
            for &t2 in kj.successors(right) {
                if f.obs(a, s2) == f.obs(rival, t2) {
                    succ.push(add(&mut p, (s2, rival, t2), &mut queue));
                }
            }
        }
        succ.sort_unstable();
        succ.dedup();
        p.successors[i] = succ;
    }
    Ok(p)
}

/// Decides whether every infinite observation sequence of the active
/// member's runs pins down its index. A family with a single member is
/// successful.
pub fn decide_nc1(f: &NormFamily) -> RecognitionVerdict {
    if f.len() < 2 {
        return RecognitionVerdict::Nc1Successful;
    }
    let p = build_sync_product(f).expect("family has a rival");
    let keep: Vec<bool> = p.states.iter().map(|s| s.safe).collect();
    let mut on_cycle = vec![false; p.len()];
    let mut comp_of = vec![usize::MAX; p.len()];
    for (ci, comp) in tarjan_scc(&p.successors, &keep).into_iter().enumerate() {
        if is_nontrivial(&comp, &p.successors) {
            for &v in &comp {
                on_cycle[v] = true;
                comp_of[v] = ci;
            }
        }
    }
    let Some(to_cycle) = bfs_path(&p.successors, &p.initial, |v| keep[v], |v| on_cycle[v]) else {
        return RecognitionVerdict::Nc1Successful;
    };
    let c = *to_cycle.last().unwrap();
    let mut cycle_nodes = vec![c];
    if !p.successors[c].contains(&c) {
        let same = |v: usize| comp_of[v] == comp_of[c];
        let starts: Vec<usize> = p.successors[c].iter().copied().filter(|&v| same(v)).collect();
        let back = bfs_path(&p.successors, &starts, same, |v| v == c).expect("strongly connected");
        cycle_nodes.extend_from_slice(&back[..back.len() - 1]);
    }
    let decode = |v: usize| {
        let st = p.states[v];
        (f.structure(f.active()).state(st.left), f.structure(st.rival).state(st.right))
    };
    RecognitionVerdict::Nc1Unsuccessful(LassoWitness {
        rival: p.states[c].rival,
        stem: to_cycle[..to_cycle.len() - 1].iter().map(|&v| decode(v)).collect(),
        cycle: cycle_nodes.into_iter().map(decode).collect(),
    })
}
