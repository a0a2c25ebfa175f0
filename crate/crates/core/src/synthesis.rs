//! Norm synthesis by bounded exhaustive enumeration.
//!
//! Two restrictions at the same state that leave the same set of successor
//! states produce the same product structure, so candidates are enumerated
//! per distinct successor set. Each set is realised by forbidding exactly the
//! joint actions that could leave it.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use crate::ctl::{check, Formula};
use crate::error::{Error, Result};
use crate::kripke::{apply_norm, build_product};
use crate::model::{joint_actions_at, validate_mas, JointAction, Mas, StateId};
use crate::norm::{NormStateId, NormativeSystem};

/// Limits on a synthesis run.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SynthesisBudget {
    /// Candidates verified before giving up.
    pub max_candidates: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SynthesisBudget {
    fn default() -> Self {
        SynthesisBudget { max_candidates: 1_000_000, time_limit: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SynthesisOutcome {
    Found(NormativeSystem),
    /// No candidate with at most this many normative states works.
    NoneExists(usize),
    /// The budget ran out after this many candidates.
    BudgetExceeded(u64),
}

/// Model checks `f` on the product of `m` and `n`.
pub fn verify(m: &Mas, n: &NormativeSystem, f: &Formula) -> Result<bool> {
    Ok(check(&apply_norm(m, n)?, f))
}

/// One way to restrict a state.
#[derive(Clone, Debug)]
struct Restriction {
    successors: Vec<StateId>,
    forbidden: BTreeSet<JointAction>,
}

/// The distinct restrictions at `s`, starting with the one that forbids
/// nothing.
fn restrictions(m: &Mas, s: StateId) -> Vec<Restriction> {
    let actions = joint_actions_at(m, s);
    let dest = |a: &JointAction| -> BTreeSet<StateId> {
        m.transitions_from(s).iter().filter(|(b, _)| b == a).map(|(_, t)| *t).collect()
    };
    let per_action: Vec<(JointAction, BTreeSet<StateId>)> = actions.iter().map(|a| (a.clone(), dest(a))).collect();
    let all: BTreeSet<StateId> = per_action.iter().flat_map(|(_, d)| d.iter().copied()).collect();
    if actions.len() < 2 {
        return vec![Restriction { successors: all.into_iter().collect(), forbidden: BTreeSet::new() }];
    }
    let mut groups: Vec<BTreeSet<StateId>> = Vec::new();
    for (_, d) in &per_action {
        if !groups.contains(d) {
            groups.push(d.clone());
        }
    }
    assert!(groups.len() < 32, "too many distinct successor sets at one state");
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in (1u32..(1 << groups.len())).rev() {
        let keep: BTreeSet<StateId> =
            (0..groups.len()).filter(|i| mask >> i & 1 == 1).flat_map(|i| groups[i].iter().copied()).collect();
        if !seen.insert(keep.clone()) {
            continue;
        }
        let forbidden = per_action.iter().filter(|(_, d)| !d.is_subset(&keep)).map(|(a, _)| a.clone()).collect();
        out.push(Restriction { successors: keep.into_iter().collect(), forbidden });
    }
    out
}

struct Meter {
    budget: SynthesisBudget,
    start: Instant,
    tried: u64,
}

impl Meter {
    fn new(budget: SynthesisBudget) -> Self {
        Meter { budget, start: Instant::now(), tried: 0 }
    }

    /// Accounts for one more candidate; false once the budget is spent.
    fn take(&mut self) -> bool {
        if self.tried >= self.budget.max_candidates {
            return false;
        }
        if self.budget.time_limit.is_some_and(|t| self.start.elapsed() >= t) {
            return false;
        }
        self.tried += 1;
        true
    }
}

fn valid(m: &Mas) -> Result<()> {
    let report = validate_mas(m);
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::InvalidMas(report))
    }
}

enum Flow {
    Continue,
    Found(NormativeSystem),
    Exhausted,
}

/// Searches static norms: one restriction per reachable state of `m`.
pub fn synthesize_static(m: &Mas, f: &Formula, budget: SynthesisBudget) -> Result<SynthesisOutcome> {
    valid(m)?;
    let choices: Vec<(StateId, Vec<Restriction>)> =
        m.reachable_states().into_iter().map(|s| (s, restrictions(m, s))).filter(|(_, r)| r.len() > 1).collect();
    let mut meter = Meter::new(budget);
    let mut pick = vec![0usize; choices.len()];
    loop {
        if !meter.take() {
            return Ok(SynthesisOutcome::BudgetExceeded(meter.tried));
        }
        let mut n = NormativeSystem::new(["q0"], NormStateId(0), m.num_states());
        for ((s, rs), &i) in choices.iter().zip(&pick) {
            n.set_forbidden(*s, NormStateId(0), rs[i].forbidden.clone());
        }
        if check(&build_product(m, &n), f) {
            return Ok(SynthesisOutcome::Found(n));
        }
        // Odometer step, last state fastest.
        let mut i = choices.len();
        loop {
            if i == 0 {
                return Ok(SynthesisOutcome::NoneExists(1));
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].1.len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

struct Dynamic<'a> {
    m: &'a Mas,
    f: &'a Formula,
    k: usize,
    options: HashMap<StateId, Vec<Restriction>>,
    pairs: Vec<(StateId, usize)>,
    discovered: HashSet<(StateId, usize)>,
    chosen: HashMap<(StateId, usize), usize>,
    updates: HashMap<(usize, StateId), usize>,
    used: usize,
    meter: Meter,
}

impl Dynamic<'_> {
    fn options_at(&mut self, s: StateId) -> usize {
        let m = self.m;
        self.options.entry(s).or_insert_with(|| restrictions(m, s)).len()
    }

    fn discover(&mut self, pair: (StateId, usize)) -> bool {
        if !self.discovered.insert(pair) {
            return false;
        }
        self.pairs.push(pair);
        true
    }

    fn undiscover(&mut self, added: bool) {
        if added {
            let p = self.pairs.pop().unwrap();
            self.discovered.remove(&p);
        }
    }

    fn pair(&mut self, pos: usize) -> Flow {
        if pos == self.pairs.len() {
            return self.evaluate();
        }
        let (s, q) = self.pairs[pos];
        for opt in 0..self.options_at(s) {
            self.chosen.insert((s, q), opt);
            let succ = self.options[&s][opt].successors.clone();
            match self.destinations(pos, &succ, 0) {
                Flow::Continue => {}
                other => return other,
            }
        }
        self.chosen.remove(&(s, q));
        Flow::Continue
    }

    fn destinations(&mut self, pos: usize, succ: &[StateId], i: usize) -> Flow {
        if i == succ.len() {
            return self.pair(pos + 1);
        }
        let q = self.pairs[pos].1;
        let t = succ[i];
        if let Some(&q2) = self.updates.get(&(q, t)) {
            let added = self.discover((t, q2));
            let flow = self.destinations(pos, succ, i + 1);
            self.undiscover(added);
            return flow;
        }
        let limit = if self.used < self.k { self.used + 1 } else { self.used };
        for q2 in 0..limit {
            let fresh = q2 == self.used;
            if fresh {
                self.used += 1;
            }
            self.updates.insert((q, t), q2);
            let added = self.discover((t, q2));
            let flow = self.destinations(pos, succ, i + 1);
            self.undiscover(added);
            self.updates.remove(&(q, t));
            if fresh {
                self.used -= 1;
            }
            match flow {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }

    fn evaluate(&mut self) -> Flow {
        // Candidates with fewer states were already tried at a smaller bound.
        if self.used < self.k {
            return Flow::Continue;
        }
        if !self.meter.take() {
            return Flow::Exhausted;
        }
        let names: Vec<String> = (0..self.used).map(|i| format!("q{i}")).collect();
        let mut n = NormativeSystem::new(names, NormStateId(0), self.m.num_states());
        for (&(s, q), &opt) in &self.chosen {
            let forbidden = &self.options[&s][opt].forbidden;
            if !forbidden.is_empty() {
                n.set_forbidden(s, NormStateId(q as u32), forbidden.clone());
            }
        }
        for (&(q, t), &q2) in &self.updates {
            n.set_update(NormStateId(q as u32), t, NormStateId(q2 as u32));
        }
        if check(&build_product(self.m, &n), self.f) {
            Flow::Found(n)
        } else {
            Flow::Continue
        }
    }
}

/// Searches dynamic norms with up to `k_max` normative states, trying each
/// bound in increasing order. Normative states are numbered in order of
/// first use, so relabelings of one candidate are visited once.
pub fn synthesize_dynamic(m: &Mas, f: &Formula, k_max: usize, budget: SynthesisBudget) -> Result<SynthesisOutcome> {
    valid(m)?;
    let mut meter = Meter::new(budget);
    for k in 1..=k_max {
        let mut d = Dynamic {
            m,
            f,
            k,
            options: HashMap::new(),
            pairs: Vec::new(),
            discovered: HashSet::new(),
            chosen: HashMap::new(),
            updates: HashMap::new(),
            used: 1,
            meter,
        };
        for &s in m.initial() {
            d.discover((s, 0));
        }
        let flow = d.pair(0);
        meter = d.meter;
        match flow {
            Flow::Found(n) => return Ok(SynthesisOutcome::Found(n)),
            Flow::Exhausted => return Ok(SynthesisOutcome::BudgetExceeded(meter.tried)),
            Flow::Continue => {}
        }
    }
    Ok(SynthesisOutcome::NoneExists(k_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MasBuilder;

    /// `u -go-> v`, self-loops on `stay`, `p` holds at `v`.
    fn toy() -> Mas {
        let mut b = MasBuilder::new(["x"]);
        let u = b.state("u");
        let v = b.state("v");
        let go = b.action(0, "go");
        let stay = b.action(0, "stay");
        b.set_available(u, 0, [go, stay]);
        b.set_available(v, 0, [stay]);
        b.add_transition(u, JointAction::new([go]), v);
        b.add_transition(u, JointAction::new([stay]), u);
        b.add_transition(v, JointAction::new([stay]), v);
        b.add_label(v, "p");
        b.add_initial(u);
        b.build()
    }

    fn never_p() -> Formula {
        Formula::ag(Formula::not(Formula::atom("p")))
    }

    #[test]
    fn toy_static_forbids_go() {
        let m = toy();
        let SynthesisOutcome::Found(n) = synthesize_static(&m, &never_p(), SynthesisBudget::default()).unwrap() else {
            panic!("expected a norm");
        };
        let u = m.state_id("u").unwrap();
        let go = JointAction::new([m.action_id(0, "go").unwrap()]);
        assert!(n.is_forbidden(u, NormStateId(0), &go));
        assert!(verify(&m, &n, &never_p()).unwrap());
    }

    #[test]
    fn toy_dynamic_matches_static() {
        let m = toy();
        let out = synthesize_dynamic(&m, &never_p(), 1, SynthesisBudget::default()).unwrap();
        let SynthesisOutcome::Found(n) = out else { panic!("{out:?}") };
        assert!(verify(&m, &n, &never_p()).unwrap());
    }

    #[test]
    fn restrictions_are_distinct_successor_sets() {
        let m = toy();
        let rs = restrictions(&m, m.state_id("u").unwrap());
        assert_eq!(rs.len(), 3);
        assert!(rs[0].forbidden.is_empty());
    }

    #[test]
    fn zero_budget_is_exceeded() {
        let m = toy();
        let zero = SynthesisBudget { max_candidates: 0, time_limit: None };
        assert_eq!(synthesize_static(&m, &never_p(), zero).unwrap(), SynthesisOutcome::BudgetExceeded(0));
        assert_eq!(synthesize_dynamic(&m, &never_p(), 2, zero).unwrap(), SynthesisOutcome::BudgetExceeded(0));
    }

    #[test]
    fn unsatisfiable_goal_has_no_norm() {
        let m = toy();
        let f = Formula::ef(Formula::atom("nowhere"));
        assert_eq!(synthesize_static(&m, &f, SynthesisBudget::default()).unwrap(), SynthesisOutcome::NoneExists(1));
        assert_eq!(synthesize_dynamic(&m, &f, 2, SynthesisBudget::default()).unwrap(), SynthesisOutcome::NoneExists(2));
    }
}
