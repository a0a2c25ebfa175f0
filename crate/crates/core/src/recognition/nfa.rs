use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use super::NormFamily;
use crate::error::{Error, Result};
use crate::model::{JointAction, Mas, MasBuilder};
use crate::norm::{NormStateId, NormativeSystem};

/// A nondeterministic finite automaton with named states and symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    /// `(state, symbol) -> successors`; absent keys have no successor.
    pub delta: BTreeMap<(usize, usize), BTreeSet<usize>>,
}

impl Nfa {
    pub fn successors(&self, q: usize, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.delta.get(&(q, a)).into_iter().flatten().copied()
    }

    pub fn has_successor(&self, q: usize, a: usize) -> bool {
        self.delta.get(&(q, a)).is_some_and(|t| !t.is_empty())
    }
}

/// True iff every finite word has at least one run, ignoring final states.
pub fn nfa_run_universal(nfa: &Nfa) -> bool {
    let start: BTreeSet<usize> = BTreeSet::from([nfa.initial]);
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(set) = queue.pop_front() {
        for a in 0..nfa.alphabet.len() {
            let next: BTreeSet<usize> = set.iter().flat_map(|&q| nfa.successors(q, a)).collect();
            if next.is_empty() {
                return false;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    true
}

pub const ENTER_AUTOMATON: &str = "a1";
pub const ENTER_UNIVERSAL: &str = "a2";
const BOT: &str = "bot";
const START: &str = "start";

/// Builds the single-agent recognition instance of `nfa`: one branch from
/// `s0` simulates the automaton, the other generates every word, and the
/// two static norms each close one branch. The active member closes the
/// automaton branch, so recognition succeeds iff some word has no run.
///
/// State names: `s0`, `s_loop`, `s_<a>` for the word generator and
/// `(<a>,<q>)` for the simulation, where `<a>` ranges over the alphabet
/// and `bot`. `s0` is observed as `start`, since it is the only state where
/// the branch actions are available; every other state is observed as its
/// symbol, `s_loop` as `bot`.
pub fn build_nfa_recognition_instance(nfa: &Nfa) -> Result<(Mas, NormFamily)> {
    if nfa.alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    for a in &nfa.alphabet {
        if [ENTER_AUTOMATON, ENTER_UNIVERSAL, BOT, START].contains(&a.as_str()) {
            return Err(Error::ReservedSymbol(a.clone()));
        }
    }
    let mut b = MasBuilder::new(["x"]);
    let s0 = b.state("s0");
    let letters: Vec<_> = nfa.alphabet.iter().map(|a| b.action(0, a)).collect();
    let a1 = b.action(0, ENTER_AUTOMATON);
    let a2 = b.action(0, ENTER_UNIVERSAL);
    let act = |x| JointAction::new([x]);

    // Sigma_1 = alphabet + bot; index `k` is bot.
    let k = nfa.alphabet.len();
    let sym = |i: usize| if i == k { BOT } else { nfa.alphabet[i].as_str() };
    let sim: Vec<Vec<_>> =
        (0..=k).map(|i| nfa.states.iter().map(|q| b.state(&format!("({},{q})", sym(i)))).collect()).collect();
    let gen: Vec<_> = (0..=k).map(|i| b.state(&format!("s_{}", sym(i)))).collect();
    let s_loop = b.state("s_loop");

    b.add_initial(s0);
    b.set_available(s0, 0, [a1, a2]);
    b.set_observation(0, s0, START);
    b.add_transition(s0, act(a1), sim[k][nfa.initial]);
    b.add_transition(s0, act(a2), gen[k]);

    for (i, row) in sim.iter().enumerate() {
        for (q, &s) in row.iter().enumerate() {
            b.set_available(s, 0, letters.iter().copied());
            b.set_observation(0, s, sym(i));
            for (c, &l) in letters.iter().enumerate() {
                if nfa.has_successor(q, c) {
                    for r in nfa.successors(q, c) {
                        b.add_transition(s, act(l), sim[c][r]);
                    }
                } else {
                    b.add_transition(s, act(l), s_loop);
                }
            }
        }
    }
    for (i, &s) in gen.iter().enumerate() {
        b.set_available(s, 0, letters.iter().copied());
        b.set_observation(0, s, sym(i));
        for (c, &l) in letters.iter().enumerate() {
            b.add_transition(s, act(l), gen[c]);
        }
    }
    b.set_available(s_loop, 0, letters.iter().copied());
    b.set_observation(0, s_loop, BOT);
    for &l in &letters {
        b.add_transition(s_loop, act(l), s_loop);
    }
    let m = b.build();

    let static_norm = |name: &str, forbidden| {
        let mut n = NormativeSystem::new([name], NormStateId(0), m.num_states());
        n.forbid(s0, NormStateId(0), act(forbidden));
        n
    };
    let n0 = static_norm("t0", a1);
    let n1 = static_norm("t1", a2);
    let family = NormFamily::observed_by(m.clone(), vec![n0, n1], 0, 0)?;
    Ok((m, family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_nfa;
    use crate::model::validate_mas;

    #[test]
    fn universality_by_subsets() {
        assert!(nfa_run_universal(&parse_nfa("initial q\nq a q\nq b q\n").unwrap()));
        assert!(!nfa_run_universal(&parse_nfa("alphabet a b\ninitial q\nq a q\n").unwrap()));
        let stuck = parse_nfa("states p q\ninitial p\np a q\np b p\nq a p\n").unwrap();
        assert!(!nfa_run_universal(&stuck));
        let split = parse_nfa("states p q r\ninitial p\np a q\np a r\nq a q\nr b r\nq b p\np b p\n").unwrap();
        assert!(nfa_run_universal(&split));
    }

    #[test]
    fn gadget_is_valid() {
        let nfa = parse_nfa("states q r\nalphabet a b\ninitial q\nfinal q\nq a q\nq a r\nr b q\n").unwrap();
        let (m, f) = build_nfa_recognition_instance(&nfa).unwrap();
        assert!(validate_mas(&m).is_ok(), "{}", validate_mas(&m));
        assert_eq!(m.num_states(), 3 * 2 + 3 + 2);
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn reserved_and_empty_alphabets() {
        let nfa = parse_nfa("initial q\nq a1 q\n").unwrap();
        assert!(matches!(build_nfa_recognition_instance(&nfa), Err(Error::ReservedSymbol(_))));
        let nfa = parse_nfa("initial q\n").unwrap();
        assert!(matches!(build_nfa_recognition_instance(&nfa), Err(Error::EmptyAlphabet)));
    }
}
