//! Bottom-up labeling model checker.
//!
//! Formulas are normalised to `True, Atom, Not, Or, EX, EU, EG` and each
//! subformula is labelled once per call. Everything is evaluated over the
//! states reachable from the initial states; unknown atoms hold nowhere.

use std::collections::{BTreeSet, HashMap};

use super::formula::Formula;
use crate::graph::{is_nontrivial, tarjan_scc};
use crate::kripke::KripkeStructure;

type Mask = Vec<bool>;

struct Labeler<'k> {
    k: &'k KripkeStructure,
    reach: Mask,
    pred: Vec<Vec<usize>>,
    memo: HashMap<Formula, Mask>,
}

impl<'k> Labeler<'k> {
    fn new(k: &'k KripkeStructure) -> Self {
        Labeler { k, reach: k.reachable_mask(), pred: k.predecessors(), memo: HashMap::new() }
    }

    fn sat(&mut self, f: &Formula) -> Mask {
        if let Some(m) = self.memo.get(f) {
            return m.clone();
        }
        let n = self.k.len();
        let out = match f {
            Formula::True => self.reach.clone(),
            Formula::Atom(p) => match self.k.prop_id(p) {
                Some(id) => (0..n).map(|i| self.reach[i] && self.k.has_label(i, id)).collect(),
                None => vec![false; n],
            },
            Formula::Not(g) => {
                let inner = self.sat(g);
                (0..n).map(|i| self.reach[i] && !inner[i]).collect()
            }
            Formula::Or(a, b) => {
                let x = self.sat(a);
                let y = self.sat(b);
                x.iter().zip(&y).map(|(p, q)| *p || *q).collect()
            }
            Formula::EX(g) => {
                let inner = self.sat(g);
                self.pre_exists(&inner)
            }
            Formula::EU(a, b) => {
                let x = self.sat(a);
                let y = self.sat(b);
                self.exists_until(&x, &y)
            }
            Formula::EG(g) => {
                let inner = self.sat(g);
                eg_by_scc(self.k, &inner, &self.pred)
            }
            other => {
                let core = other.normalize();
                self.sat(&core)
            }
        };
        self.memo.insert(f.clone(), out.clone());
        out
    }

    fn pre_exists(&self, target: &Mask) -> Mask {
        let mut out = vec![false; self.k.len()];
        for (j, &t) in target.iter().enumerate() {
            if t {
                for &i in &self.pred[j] {
                    if self.reach[i] {
                        out[i] = true;
                    }
                }
            }
        }
        out
    }

    fn exists_until(&self, hold: &Mask, goal: &Mask) -> Mask {
        let mut out = goal.clone();
        let mut stack: Vec<usize> = (0..out.len()).filter(|&i| out[i]).collect();
        while let Some(j) = stack.pop() {
            for &i in &self.pred[j] {
                if !out[i] && hold[i] {
                    out[i] = true;
                    stack.push(i);
                }
            }
        }
        out
    }
}

/// `EG` as backward closure, within `hold`, of the nontrivial strongly
/// connected components of the `hold`-restricted graph.
pub(crate) fn eg_by_scc(k: &KripkeStructure, hold: &[bool], pred: &[Vec<usize>]) -> Mask {
    let succ = k.successor_lists();
    let mut out = vec![false; k.len()];
    let mut stack = Vec::new();
    for comp in tarjan_scc(succ, hold) {
        if is_nontrivial(&comp, succ) {
            for &v in &comp {
                out[v] = true;
                stack.push(v);
            }
        }
    }
    while let Some(j) = stack.pop() {
        for &i in &pred[j] {
            if hold[i] && !out[i] {
                out[i] = true;
                stack.push(i);
            }
        }
    }
    out
}

/// `EG` as the greatest fixpoint `Z = hold & EX Z`, iterated from `hold`.
pub fn eg_greatest_fixpoint(k: &KripkeStructure, hold: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut z = hold.clone();
    loop {
        let next: BTreeSet<usize> =
            z.iter().copied().filter(|&i| k.successors(i).iter().any(|j| z.contains(j))).collect();
        if next == z {
            return z;
        }
        z = next;
    }
}

/// `EG` computed through strongly connected components, as used by
/// [`sat_set`]. Exposed to cross-check against [`eg_greatest_fixpoint`].
pub fn eg_via_scc(k: &KripkeStructure, hold: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mask: Mask = (0..k.len()).map(|i| hold.contains(&i)).collect();
    to_set(&eg_by_scc(k, &mask, &k.predecessors()))
}

fn to_set(mask: &[bool]) -> BTreeSet<usize> {
    mask.iter().enumerate().filter_map(|(i, &b)| b.then_some(i)).collect()
}

/// The reachable states of `k` satisfying `f`.
pub fn sat_set(k: &KripkeStructure, f: &Formula) -> BTreeSet<usize> {
    let mut labeler = Labeler::new(k);
    let core = f.normalize();
    to_set(&labeler.sat(&core))
}

/// True iff every initial state satisfies `f`.
pub fn check(k: &KripkeStructure, f: &Formula) -> bool {
    let mut labeler = Labeler::new(k);
    let core = f.normalize();
    let sat = labeler.sat(&core);
    k.initial().iter().all(|&i| sat[i])
}
