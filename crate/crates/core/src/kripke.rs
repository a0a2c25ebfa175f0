//! Kripke structures and the product of a multiagent system with a
//! normative system.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::model::{validate_mas, Mas, StateId};
use crate::norm::{validate_norm, NormStateId, NormativeSystem};

/// A pair of an environment state and a normative state.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState {
    pub state: StateId,
    pub norm: NormStateId,
}

/// An explicit Kripke structure with dense state indices.
///
/// Structures produced by [`apply_norm`] contain exactly the product states
/// reachable from the initial states; [`KripkeStructure::from_graph`] builds
/// arbitrary structures (used for testing the checker in isolation).
#[derive(Clone, Debug)]
pub struct KripkeStructure {
    states: Vec<ProductState>,
    index: HashMap<ProductState, usize>,
    initial: Vec<usize>,
    successors: Vec<Vec<usize>>,
    props: Vec<String>,
    prop_index: HashMap<String, usize>,
    labels: Vec<Vec<usize>>,
}

impl KripkeStructure {
    /// Builds a structure from an explicit graph. State `i` is tagged with
    /// the product state `(i, 0)`.
    pub fn from_graph(initial: Vec<usize>, successors: Vec<Vec<usize>>, labels: Vec<Vec<String>>) -> Self {
        assert_eq!(successors.len(), labels.len(), "one label set per state");
        let states: Vec<ProductState> =
            (0..successors.len()).map(|i| ProductState { state: StateId(i as u32), norm: NormStateId(0) }).collect();
        let mut k = KripkeStructure::empty();
        for (i, st) in states.iter().enumerate() {
            k.index.insert(*st, i);
        }
        k.states = states;
        k.initial = initial;
        k.successors = successors
            .into_iter()
            .map(|mut v| {
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        k.labels = labels
            .into_iter()
            .map(|ls| {
                let mut ids: Vec<usize> = ls.iter().map(|p| k.intern_prop(p)).collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            })
            .collect();
        k
    }

    fn empty() -> Self {
        KripkeStructure {
            states: Vec::new(),
            index: HashMap::new(),
            initial: Vec::new(),
            successors: Vec::new(),
            props: Vec::new(),
            prop_index: HashMap::new(),
            labels: Vec::new(),
        }
    }

    fn intern_prop(&mut self, p: &str) -> usize {
        if let Some(&i) = self.prop_index.get(p) {
            return i;
        }
        let i = self.props.len();
        self.props.push(p.to_string());
        self.prop_index.insert(p.to_string(), i);
        i
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> ProductState {
        self.states[i]
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn index_of(&self, st: ProductState) -> Option<usize> {
        self.index.get(&st).copied()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.successors[from].binary_search(&to).is_ok()
    }

    pub fn has_product_edge(&self, from: ProductState, to: ProductState) -> bool {
        match (self.index_of(from), self.index_of(to)) {
            (Some(a), Some(b)) => self.has_edge(a, b),
            _ => false,
        }
    }

    pub fn prop_id(&self, p: &str) -> Option<usize> {
        self.prop_index.get(p).copied()
    }

    pub fn labels(&self, i: usize) -> impl Iterator<Item = &str> {
        self.labels[i].iter().map(|&p| self.props[p].as_str())
    }

    pub fn has_label(&self, i: usize, prop: usize) -> bool {
        self.labels[i].binary_search(&prop).is_ok()
    }

    pub(crate) fn successor_lists(&self) -> &[Vec<usize>] {
        &self.successors
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (i, succ) in self.successors.iter().enumerate() {
            for &j in succ {
                pred[j].push(i);
            }
        }
        pred
    }

    pub(crate) fn reachable_mask(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &i in &self.initial {
            if !seen[i] {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &j in &self.successors[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    }
}

/// Least set containing the initial states closed under the edge relation.
pub fn reachable(k: &KripkeStructure) -> BTreeSet<usize> {
    k.reachable_mask().into_iter().enumerate().filter_map(|(i, r)| r.then_some(i)).collect()
}

/// The Kripke structure obtained by applying `n` to `m`, restricted to the
/// product states reachable from `I x {q0}`.
pub fn apply_norm(m: &Mas, n: &NormativeSystem) -> Result<KripkeStructure> {
    let report = validate_mas(m);
    if !report.is_ok() {
        return Err(Error::InvalidMas(report));
    }
    if n.num_states() != m.num_states() {
        return Err(Error::NormShape { expected: n.num_states(), found: m.num_states() });
    }
    let report = validate_norm(m, n);
    if !report.is_ok() {
        return Err(Error::InvalidNorm(report));
    }
    Ok(build_product(m, n))
}

/// Product construction without validating its inputs.
pub(crate) fn build_product(m: &Mas, n: &NormativeSystem) -> KripkeStructure {
    let mut k = KripkeStructure::empty();
    let mut label_cache: HashMap<StateId, Vec<usize>> = HashMap::new();
    let mut queue = VecDeque::new();

    let mut add = |k: &mut KripkeStructure, st: ProductState, queue: &mut VecDeque<usize>| -> usize {
        if let Some(&i) = k.index.get(&st) {
            return i;
        }
        let i = k.states.len();
        k.states.push(st);
        k.index.insert(st, i);
        k.successors.push(Vec::new());
        let labels = match label_cache.get(&st.state) {
            Some(l) => l.clone(),
            None => {
                let mut ids: Vec<usize> = m.labels(st.state).iter().map(|p| k.intern_prop(p)).collect();
                ids.sort_unstable();
                label_cache.insert(st.state, ids.clone());
                ids
            }
        };
        k.labels.push(labels);
        queue.push_back(i);
        i
    };

    for &s in m.initial() {
        let i = add(&mut k, ProductState { state: s, norm: n.initial() }, &mut queue);
        if !k.initial.contains(&i) {
            k.initial.push(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let ProductState { state: s, norm: q } = k.states[i];
        let forbidden = n.forbidden(s, q);
        let mut succ = Vec::new();
        for (a, t) in m.transitions_from(s) {
            if forbidden.is_some_and(|f| f.contains(a)) {
                continue;
            }
            let next = ProductState { state: *t, norm: n.update(q, *t) };
            succ.push(add(&mut k, next, &mut queue));
        }
        succ.sort_unstable();
        succ.dedup();
        k.successors[i] = succ;
    }
    k
}
