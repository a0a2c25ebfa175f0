//! Reference evaluator for differential testing.
//!
//! Every operator, derived or not, is evaluated straight from its fixpoint
//! characterisation by repeated full sweeps over the reachable states until
//! nothing changes. No normalisation, no predecessor tables, no SCCs.

use std::collections::BTreeSet;

use super::formula::Formula;
use crate::kripke::{reachable, KripkeStructure};

pub fn naive_sat_set(k: &KripkeStructure, f: &Formula) -> BTreeSet<usize> {
    let universe: Vec<usize> = reachable(k).into_iter().collect();
    eval(k, &universe, f)
}

fn eval(k: &KripkeStructure, u: &[usize], f: &Formula) -> BTreeSet<usize> {
    let all: BTreeSet<usize> = u.iter().copied().collect();
    let some_succ = |z: &BTreeSet<usize>, s: usize| k.successors(s).iter().any(|t| z.contains(t));
    let all_succ = |z: &BTreeSet<usize>, s: usize| k.successors(s).iter().all(|t| z.contains(t));
    match f {
        Formula::True => all,
        Formula::False => BTreeSet::new(),
        Formula::Atom(p) => u.iter().copied().filter(|&s| k.labels(s).any(|l| l == p)).collect(),
        Formula::Not(g) => {
            let x = eval(k, u, g);
            all.difference(&x).copied().collect()
        }
        Formula::And(a, b) => {
            let (x, y) = (eval(k, u, a), eval(k, u, b));
            x.intersection(&y).copied().collect()
        }
        Formula::Or(a, b) => {
            let (x, y) = (eval(k, u, a), eval(k, u, b));
            x.union(&y).copied().collect()
        }
        Formula::Implies(a, b) => {
            let (x, y) = (eval(k, u, a), eval(k, u, b));
            u.iter().copied().filter(|s| !x.contains(s) || y.contains(s)).collect()
        }
        Formula::EX(g) => {
            let x = eval(k, u, g);
            u.iter().copied().filter(|&s| some_succ(&x, s)).collect()
        }
        Formula::AX(g) => {
            let x = eval(k, u, g);
            u.iter().copied().filter(|&s| all_succ(&x, s)).collect()
        }
        Formula::EF(g) => {
            let x = eval(k, u, g);
            least(u, |z, s| x.contains(&s) || some_succ(z, s))
        }
        Formula::AF(g) => {
            let x = eval(k, u, g);
            least(u, |z, s| x.contains(&s) || all_succ(z, s))
        }
        Formula::EG(g) => {
            let x = eval(k, u, g);
            greatest(u, |z, s| x.contains(&s) && some_succ(z, s))
        }
        Formula::AG(g) => {
            let x = eval(k, u, g);
            greatest(u, |z, s| x.contains(&s) && all_succ(z, s))
        }
        Formula::EU(a, b) => {
            let (x, y) = (eval(k, u, a), eval(k, u, b));
            least(u, |z, s| y.contains(&s) || (x.contains(&s) && some_succ(z, s)))
        }
        Formula::AU(a, b) => {
            let (x, y) = (eval(k, u, a), eval(k, u, b));
            least(u, |z, s| y.contains(&s) || (x.contains(&s) && all_succ(z, s)))
        }
    }
}

fn least(u: &[usize], step: impl Fn(&BTreeSet<usize>, usize) -> bool) -> BTreeSet<usize> {
    let mut z = BTreeSet::new();
    loop {
        let next: BTreeSet<usize> = u.iter().copied().filter(|&s| step(&z, s)).collect();
        if next == z {
            return z;
        }
        z = next;
    }
}

fn greatest(u: &[usize], step: impl Fn(&BTreeSet<usize>, usize) -> bool) -> BTreeSet<usize> {
    let mut z: BTreeSet<usize> = u.iter().copied().collect();
    loop {
        let next: BTreeSet<usize> = u.iter().copied().filter(|&s| step(&z, s)).collect();
        if next == z {
            return z;
        }
        z = next;
    }
}
