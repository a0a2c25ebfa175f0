//! The producer/consumer ecosystem: generator, norms and objectives.
//!
//! Producers `p_1..p_n` each make one kind of good and can serve up to their
//! capacity per round. Consumers `c_1..c_m` (and optionally a newcomer `c_v`)
//! repeatedly work through a multiset of required goods. Round 1: every
//! consumer without a pending request picks a good it still needs and a
//! producer of that good. Round 2: every producer serves a maximal set of its
//! requesters within capacity.
//!
//! Atoms are `k=1`, `rr_i={g_1}`, `d_i=g_1` / `d_i=bot` and `t_i=p_1` /
//! `t_i=bot`, with `i` the consumer's roster label (`1..m` or `v`).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::ctl::Formula;
use crate::error::{Error, Result};
use crate::model::{ActionId, JointAction, Mas, MasBuilder, StateId};
use crate::norm::{NormStateId, NormativeSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EcoConfig {
    /// Good produced by each producer.
    pub goods: Vec<String>,
    /// Goods served per round by each producer.
    pub capacity: Vec<usize>,
    /// Required multiset of goods of each consumer.
    pub requirements: Vec<Vec<String>>,
    /// Requirement of the newcomer `c_v`, if present.
    pub new_agent: Option<Vec<String>>,
    /// The newcomer may cancel its pending request in round 2.
    pub cancel_rule: bool,
}

fn good_list(gs: &[&str]) -> Vec<String> {
    gs.iter().map(|g| g.to_string()).collect()
}

impl EcoConfig {
    /// Two producers of `g_1`/`g_2` with capacity 1; consumers need `{g_1}`,
    /// `{g_2}` and `{g_1,g_2}`.
    pub fn instantiation() -> Self {
        EcoConfig {
            goods: good_list(&["g_1", "g_2"]),
            capacity: vec![1, 1],
            requirements: vec![good_list(&["g_1"]), good_list(&["g_2"]), good_list(&["g_1", "g_2"])],
            new_agent: None,
            cancel_rule: false,
        }
    }

    /// One producer of capacity 1 and `m` consumers all needing `{g_1}`.
    pub fn single_producer(m: usize, new_agent: bool, cancel_rule: bool) -> Self {
        EcoConfig {
            goods: good_list(&["g_1"]),
            capacity: vec![1],
            requirements: vec![good_list(&["g_1"]); m],
            new_agent: new_agent.then(|| good_list(&["g_1"])),
            cancel_rule,
        }
    }

    /// One producer of capacity 1 and two consumers needing `{g_1}`.
    pub fn simple() -> Self {
        EcoConfig::single_producer(2, false, false)
    }

    pub fn n(&self) -> usize {
        self.goods.len()
    }

    pub fn m(&self) -> usize {
        self.requirements.len()
    }

    /// Consumers including the newcomer.
    pub fn roster_len(&self) -> usize {
        self.m() + usize::from(self.new_agent.is_some())
    }

    /// Roster labels: `1..m`, then `v`.
    pub fn roster_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = (1..=self.m()).map(|i| i.to_string()).collect();
        if self.new_agent.is_some() {
            out.push("v".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n() == 0 || self.m() == 0 {
            return bad("need at least one producer and one consumer".into());
        }
        if self.capacity.len() != self.n() {
            return bad(format!("{} capacities for {} producers", self.capacity.len(), self.n()));
        }
        if self.capacity.contains(&0) {
            return bad("capacities must be at least 1".into());
        }
        for g in &self.goods {
            if g.is_empty() || !g.chars().all(|c| c.is_alphanumeric() || c == '_') || g == "bot" {
                return bad(format!("`{g}` is not a valid good name"));
            }
        }
        let produced: BTreeSet<&String> = self.goods.iter().collect();
        let reqs = self.requirements.iter().chain(self.new_agent.as_ref());
        for (label, r) in self.roster_labels().iter().zip(reqs) {
            if r.is_empty() {
                return bad(format!("consumer c_{label} has an empty requirement"));
            }
            if let Some(g) = r.iter().find(|g| !produced.contains(g)) {
                return bad(format!("good `{g}` required by c_{label} is not produced"));
            }
        }
        if let Some(r) = &self.new_agent {
            if r.iter().collect::<BTreeSet<_>>().len() != 1 {
                return bad("the newcomer must require a single kind of good".into());
            }
        }
        if self.cancel_rule && self.new_agent.is_none() {
            return bad("cancel_rule needs the newcomer".into());
        }
        Ok(())
    }

    /// Reads `key = value` lines: `n`, `m`, `goods`, `capacity`, `r_1..r_m`,
    /// `new_agent`, `r_v`, `cancel_rule`. Lists are comma separated; `#`
    /// starts a comment. `capacity` defaults to all ones.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected `key = value`", no + 1)));
            };
            let k = k.trim().to_string();
            if kv.insert(k.clone(), (no + 1, v.trim().to_string())).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", no + 1)));
            }
        }
        let mut take = |k: &str| kv.remove(k).map(|(_, v)| v);
        let list = |v: String| -> Vec<String> {
            v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
        };
        let int = |k: &str, v: String| -> Result<usize> {
            v.parse().map_err(|_| Error::Config(format!("`{k}` must be a non-negative integer, got `{v}`")))
        };
        let flag = |k: &str, v: Option<String>| -> Result<bool> {
            match v.as_deref() {
                None | Some("false") => Ok(false),
                Some("true") => Ok(true),
                Some(other) => Err(Error::Config(format!("`{k}` must be true or false, got `{other}`"))),
            }
        };
        let n = int("n", take("n").ok_or_else(|| Error::Config("missing `n`".into()))?)?;
        let m = int("m", take("m").ok_or_else(|| Error::Config("missing `m`".into()))?)?;
        let goods = list(take("goods").ok_or_else(|| Error::Config("missing `goods`".into()))?);
        if goods.len() != n {
            return Err(Error::Config(format!("{} goods listed for n = {n}", goods.len())));
        }
        let capacity = match take("capacity") {
            Some(v) => list(v).into_iter().map(|c| int("capacity", c)).collect::<Result<Vec<_>>>()?,
            None => vec![1; n],
        };
        let mut requirements = Vec::with_capacity(m);
        for i in 1..=m {
            let key = format!("r_{i}");
            requirements.push(list(take(&key).ok_or_else(|| Error::Config(format!("missing `{key}`")))?));
        }
        let with_v = flag("new_agent", take("new_agent"))?;
        let r_v = take("r_v");
        let new_agent = match (with_v, r_v) {
            (true, Some(v)) => Some(list(v)),
            (true, None) => return Err(Error::Config("missing `r_v`".into())),
            (false, Some(_)) => return Err(Error::Config("`r_v` given without `new_agent = true`".into())),
            (false, None) => None,
        };
        let cancel_rule = flag("cancel_rule", take("cancel_rule"))?;
        if let Some((k, (line, _))) = kv.into_iter().next() {
            return Err(Error::Config(format!("line {line}: unknown key `{k}`")));
        }
        let cfg = EcoConfig { goods, capacity, requirements, new_agent, cancel_rule };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Inverse of [`EcoConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n = {}", self.n()).unwrap();
        writeln!(out, "m = {}", self.m()).unwrap();
        writeln!(out, "goods = {}", self.goods.join(",")).unwrap();
        let caps: Vec<String> = self.capacity.iter().map(|c| c.to_string()).collect();
        writeln!(out, "capacity = {}", caps.join(",")).unwrap();
        for (i, r) in self.requirements.iter().enumerate() {
            writeln!(out, "r_{} = {}", i + 1, r.join(",")).unwrap();
        }
        writeln!(out, "new_agent = {}", self.new_agent.is_some()).unwrap();
        if let Some(r) = &self.new_agent {
            writeln!(out, "r_v = {}", r.join(",")).unwrap();
        }
        writeln!(out, "cancel_rule = {}", self.cancel_rule).unwrap();
        out
    }
}

/// Local state of one consumer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConsumerState {
    /// Remaining goods, as sorted producer-independent good indices.
    pub remaining: Vec<usize>,
    /// Demanded good.
    pub demand: Option<usize>,
    /// Producer the demand was sent to.
    pub target: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EcoState {
    /// 1 or 2.
    pub round: u8,
    /// One entry per roster member.
    pub consumers: Vec<ConsumerState>,
}

impl EcoState {
    /// `d = bot` iff `t = bot`, a demand is still required, and it is a good
    /// made by its target.
    pub fn invariants_hold(&self, eco: &Ecosystem) -> bool {
        (self.round == 1 || self.round == 2)
            && self.consumers.iter().all(|c| match (c.demand, c.target) {
                (None, None) => true,
                (Some(d), Some(t)) => c.remaining.contains(&d) && eco.producer_good[t] == d,
                _ => false,
            })
    }

    /// Roster indices with a pending request at producer `j`.
    pub fn requesters(&self, j: usize) -> Vec<usize> {
        (0..self.consumers.len()).filter(|&i| self.consumers[i].target == Some(j)).collect()
    }
}

/// A generated system with the ecosystem state behind every model state.
#[derive(Clone, Debug)]
pub struct Ecosystem {
    pub config: EcoConfig,
    pub mas: Mas,
    /// Indexed by state id.
    pub states: Vec<EcoState>,
    good_names: Vec<String>,
    producer_good: Vec<usize>,
    /// Per producer, the roster indices served by each action.
    served: Vec<HashMap<ActionId, Vec<usize>>>,
}

impl Ecosystem {
    pub fn state(&self, s: StateId) -> &EcoState {
        &self.states[s.index()]
    }

    /// Roster indices served by producer `j`'s action `a`.
    pub fn served_by(&self, j: usize, a: ActionId) -> &[usize] {
        self.served[j].get(&a).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn find_state(&self, st: &EcoState) -> Option<StateId> {
        self.states.iter().position(|x| x == st).map(|i| StateId(i as u32))
    }

    pub fn good_index(&self, name: &str) -> Option<usize> {
        self.good_names.iter().position(|g| g == name)
    }

    /// Index of the newcomer among the model's agents.
    pub fn newcomer_agent(&self) -> Option<usize> {
        self.config.new_agent.as_ref().map(|_| self.config.n() + self.config.m())
    }

    /// Builds an ecosystem state from readable parts, for tests and examples:
    /// each consumer is `(remaining goods, demand, target producer index)`.
    pub fn make_state(&self, round: u8, consumers: &[(&[&str], Option<&str>, Option<usize>)]) -> EcoState {
        let idx = |g: &str| self.good_index(g).unwrap_or_else(|| panic!("unknown good `{g}`"));
        EcoState {
            round,
            consumers: consumers
                .iter()
                .map(|(rr, d, t)| {
                    let mut remaining: Vec<usize> = rr.iter().map(|g| idx(g)).collect();
                    remaining.sort_unstable();
                    ConsumerState { remaining, demand: d.map(idx), target: *t }
                })
                .collect(),
        }
    }
}

fn consumer_name(label: &str) -> String {
    format!("c_{label}")
}

fn set_text<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    format!("{{{}}}", items.into_iter().collect::<Vec<_>>().join(","))
}

/// All `k`-element subsets of `items` in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut cur, &mut out);
    out
}

/// Cartesian product of per-position option lists.
fn product<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    options.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

/// What one consumer does in a step, with its resulting local state.
#[derive(Clone)]
struct ConsumerMove {
    action: String,
    next: ConsumerState,
}

struct Generator<'c> {
    cfg: &'c EcoConfig,
    labels: Vec<String>,
    good_names: Vec<String>,
    producer_good: Vec<usize>,
    requirement: Vec<Vec<usize>>,
}

impl Generator<'_> {
    fn state_name(&self, st: &EcoState) -> String {
        let mut out = st.round.to_string();
        for c in &st.consumers {
            let rr = set_text(c.remaining.iter().map(|&g| self.good_names[g].as_str()));
            let d = c.demand.map_or("bot", |g| self.good_names[g].as_str());
            let t = c.target.map_or("bot".to_string(), |j| format!("p_{}", j + 1));
            write!(out, "|{rr},{d},{t}").unwrap();
        }
        out
    }

    fn labels_of(&self, st: &EcoState) -> Vec<String> {
        let mut out = vec![format!("k={}", st.round)];
        for (c, l) in st.consumers.iter().zip(&self.labels) {
            let rr = set_text(c.remaining.iter().map(|&g| self.good_names[g].as_str()));
            out.push(format!("rr_{l}={rr}"));
            out.push(format!("d_{l}={}", c.demand.map_or("bot", |g| self.good_names[g].as_str())));
            out.push(match c.target {
                Some(j) => format!("t_{l}=p_{}", j + 1),
                None => format!("t_{l}=bot"),
            });
        }
        out
    }

    fn consumer_observation(&self, st: &EcoState, i: usize) -> String {
        let c = &st.consumers[i];
        let rr = set_text(c.remaining.iter().map(|&g| self.good_names[g].as_str()));
        let d = c.demand.map_or("bot", |g| self.good_names[g].as_str());
        let t = c.target.map_or("bot".to_string(), |j| format!("p_{}", j + 1));
        format!("{}|{rr},{d},{t}", st.round)
    }

    /// The newcomer sees the round and who shares its current producer.
    fn newcomer_observation(&self, st: &EcoState) -> String {
        let v = st.consumers.len() - 1;
        let peers: Vec<String> = match st.consumers[v].target {
            Some(j) => st.requesters(j).into_iter().map(|i| consumer_name(&self.labels[i])).collect(),
            None => Vec::new(),
        };
        format!("{}|{}", st.round, set_text(peers.iter().map(String::as_str)))
    }

    fn producer_observation(&self, st: &EcoState, j: usize) -> String {
        let req: Vec<String> = st.requesters(j).into_iter().map(|i| consumer_name(&self.labels[i])).collect();
        format!("{}|{}", st.round, set_text(req.iter().map(String::as_str)))
    }

    fn round1_moves(&self, i: usize, c: &ConsumerState) -> Vec<ConsumerMove> {
        if c.demand.is_some() {
            return vec![ConsumerMove { action: "bot".into(), next: c.clone() }];
        }
        let remaining = if c.remaining.is_empty() { self.requirement[i].clone() } else { c.remaining.clone() };
        (0..self.cfg.n())
            .filter(|&j| remaining.contains(&self.producer_good[j]))
            .map(|j| ConsumerMove {
                action: format!("p_{}", j + 1),
                next: ConsumerState {
                    remaining: remaining.clone(),
                    demand: Some(self.producer_good[j]),
                    target: Some(j),
                },
            })
            .collect()
    }

    /// Joint actions (as action names per agent), the roster indices each
    /// producer serves, and successors of `st`.
    fn successors(&self, st: &EcoState) -> Vec<(Vec<String>, Vec<Vec<usize>>, EcoState)> {
        let n = self.cfg.n();
        let mut out = Vec::new();
        if st.round == 1 {
            let options: Vec<Vec<ConsumerMove>> =
                st.consumers.iter().enumerate().map(|(i, c)| self.round1_moves(i, c)).collect();
            for choice in product(&options) {
                let mut names = vec!["bot".to_string(); n];
                names.extend(choice.iter().map(|mv| mv.action.clone()));
                let next = EcoState { round: 2, consumers: choice.into_iter().map(|mv| mv.next).collect() };
                out.push((names, vec![Vec::new(); n], next));
            }
            return out;
        }
        let serve: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|j| {
                let req = st.requesters(j);
                combinations(&req, self.cfg.capacity[j].min(req.len()))
            })
            .collect();
        let v = self.cfg.new_agent.as_ref().map(|_| st.consumers.len() - 1);
        let may_cancel = self.cfg.cancel_rule && v.is_some_and(|v| st.consumers[v].target.is_some());
        for chosen in product(&serve) {
            let mut next = EcoState { round: 1, consumers: st.consumers.clone() };
            let mut names: Vec<String> = Vec::with_capacity(n + st.consumers.len());
            for (j, set) in chosen.iter().enumerate() {
                for &i in set {
                    let c = &mut next.consumers[i];
                    let pos = c.remaining.iter().position(|&g| g == self.producer_good[j]).expect("demand pending");
                    c.remaining.remove(pos);
                    c.demand = None;
                    c.target = None;
                }
                let served: Vec<String> = set.iter().map(|&i| consumer_name(&self.labels[i])).collect();
                names.push(set_text(served.iter().map(String::as_str)));
            }
            names.extend(std::iter::repeat_n("bot".to_string(), st.consumers.len()));
            out.push((names.clone(), chosen.clone(), next.clone()));
            if may_cancel {
                let v = v.unwrap();
                names[n + v] = "cancel".into();
                next.consumers[v].demand = None;
                next.consumers[v].target = None;
                out.push((names, chosen, next));
            }
        }
        out
    }
}

/// Generates the reachable part of the ecosystem.
pub fn gen_ecosystem(cfg: &EcoConfig) -> Result<Ecosystem> {
    cfg.validate()?;
    let mut good_names: Vec<String> = Vec::new();
    for g in &cfg.goods {
        if !good_names.contains(g) {
            good_names.push(g.clone());
        }
    }
    good_names.sort();
    let gidx = |g: &String| good_names.iter().position(|x| x == g).unwrap();
    let producer_good: Vec<usize> = cfg.goods.iter().map(gidx).collect();
    let requirement: Vec<Vec<usize>> = cfg
        .requirements
        .iter()
        .chain(cfg.new_agent.as_ref())
        .map(|r| {
            let mut v: Vec<usize> = r.iter().map(gidx).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let gen = Generator {
        cfg,
        labels: cfg.roster_labels(),
        good_names: good_names.clone(),
        producer_good: producer_good.clone(),
        requirement,
    };

    let n = cfg.n();
    let roster = cfg.roster_len();
    let mut agents: Vec<String> = (1..=n).map(|j| format!("p_{j}")).collect();
    agents.extend(gen.labels.iter().map(|l| consumer_name(l)));
    let mut b = MasBuilder::new(agents);
    for j in 0..n {
        b.action(j, "bot");
    }
    for i in 0..roster {
        b.action(n + i, "bot");
        for j in 0..n {
            b.action(n + i, &format!("p_{}", j + 1));
        }
        if cfg.cancel_rule && i == roster - 1 {
            b.action(n + i, "cancel");
        }
    }

    let s0 = EcoState {
        round: 1,
        consumers: vec![ConsumerState { remaining: Vec::new(), demand: None, target: None }; roster],
    };
    let mut states: Vec<EcoState> = Vec::new();
    let mut index: HashMap<EcoState, StateId> = HashMap::new();
    let mut served: Vec<HashMap<ActionId, Vec<usize>>> = vec![HashMap::new(); n];
    let mut queue = VecDeque::new();

    let mut intern = |b: &mut MasBuilder, st: EcoState, states: &mut Vec<EcoState>, queue: &mut VecDeque<StateId>| {
        if let Some(&id) = index.get(&st) {
            return id;
        }
        let id = b.state(&gen.state_name(&st));
        debug_assert_eq!(id.index(), states.len());
        index.insert(st.clone(), id);
        states.push(st);
        queue.push_back(id);
        id
    };

    let init = intern(&mut b, s0, &mut states, &mut queue);
    b.add_initial(init);
    while let Some(s) = queue.pop_front() {
        let st = states[s.index()].clone();
        for l in gen.labels_of(&st) {
            b.add_label(s, l);
        }
        for j in 0..n {
            b.set_observation(j, s, gen.producer_observation(&st, j));
        }
        for i in 0..roster {
            let obs = if cfg.new_agent.is_some() && i == roster - 1 {
                gen.newcomer_observation(&st)
            } else {
                gen.consumer_observation(&st, i)
            };
            b.set_observation(n + i, s, obs);
        }
        let mut avail: Vec<BTreeSet<ActionId>> = vec![BTreeSet::new(); n + roster];
        for (names, sets, next) in gen.successors(&st) {
            let mut acts = Vec::with_capacity(names.len());
            for (ag, name) in names.iter().enumerate() {
                let a = b.action(ag, name);
                if ag < n && st.round == 2 {
                    served[ag].insert(a, sets[ag].clone());
                }
                avail[ag].insert(a);
                acts.push(a);
            }
            let t = intern(&mut b, next, &mut states, &mut queue);
            b.add_transition(s, JointAction(acts), t);
        }
        for (ag, set) in avail.into_iter().enumerate() {
            b.set_available(s, ag, set);
        }
    }

    Ok(Ecosystem { config: cfg.clone(), mas: b.build(), states, good_names, producer_good, served })
}

/// Roster index designated by each producer, for norms over `Π_j {1..R}`.
fn tuple_name(ys: &[usize], labels: &[String]) -> String {
    let parts: Vec<&str> = ys.iter().map(|&y| labels[y].as_str()).collect();
    format!("({})", parts.join(","))
}

/// Producer actions at round-2 state `s` that skip the designated consumer
/// `designated[j]` of some producer `j` while that consumer is waiting for
/// `j`. `None` designates nobody.
fn skipping_actions(eco: &Ecosystem, s: StateId, designated: &[Option<usize>]) -> BTreeSet<JointAction> {
    let st = eco.state(s);
    let mut out = BTreeSet::new();
    for (a, _) in eco.mas.transitions_from(s) {
        let skips = designated.iter().enumerate().any(|(j, d)| match d {
            Some(y) if st.consumers[*y].target == Some(j) => !eco.served_by(j, a.get(j)).contains(y),
            _ => false,
        });
        if skips {
            out.insert(a.clone());
        }
    }
    out
}

fn counter_norm(eco: &Ecosystem, step: usize) -> NormativeSystem {
    let cfg = &eco.config;
    let (n, r) = (cfg.n(), cfg.roster_len());
    let labels = cfg.roster_labels();
    let tuples: Vec<Vec<usize>> = product(&vec![(0..r).collect::<Vec<usize>>(); n]);
    let id_of = |ys: &[usize]| ys.iter().fold(0usize, |acc, &y| acc * r + y);
    let names: Vec<String> = tuples.iter().map(|t| tuple_name(t, &labels)).collect();
    let q0: Vec<usize> = (0..n).map(|j| j % r).collect();
    let mut norm = NormativeSystem::new(names, NormStateId(id_of(&q0) as u32), eco.mas.num_states());
    for (qi, ys) in tuples.iter().enumerate() {
        let q = NormStateId(qi as u32);
        let next: Vec<usize> = ys.iter().map(|&y| (y + step) % r).collect();
        let next = NormStateId(id_of(&next) as u32);
        let designated: Vec<Option<usize>> = ys.iter().map(|&y| Some(y)).collect();
        for s in eco.mas.states() {
            if eco.state(s).round == 1 {
                norm.set_update(q, s, next);
            } else {
                let forbidden = skipping_actions(eco, s, &designated);
                if !forbidden.is_empty() {
                    norm.set_forbidden(s, q, forbidden);
                }
            }
        }
    }
    norm
}

/// Round-robin norm: producer `j` starts with consumer `j` and moves to the
/// next roster member after every round; in round 2 it may not skip its
/// designated consumer when that consumer is waiting for it.
pub fn norm_round_robin(eco: &Ecosystem) -> NormativeSystem {
    counter_norm(eco, 1)
}

/// As [`norm_round_robin`] but the designation advances by two.
pub fn norm_skip2(eco: &Ecosystem) -> NormativeSystem {
    counter_norm(eco, 2)
}

type Queues = Vec<Vec<usize>>;

fn fifo_update(q: &Queues, st: &EcoState) -> Queues {
    q.iter()
        .enumerate()
        .map(|(j, queue)| {
            let mut out: Vec<usize> = queue.iter().copied().filter(|&i| st.consumers[i].target == Some(j)).collect();
            if st.round == 2 {
                for i in st.requesters(j) {
                    if !out.contains(&i) {
                        out.push(i);
                    }
                }
            }
            out
        })
        .collect()
}

/// First-come-first-served norm: each producer queues its requesters in
/// order of arrival (ties by roster order) and may not skip the head.
/// Queued consumers leave the queue once they no longer wait for the
/// producer.
pub fn norm_fifo(eco: &Ecosystem) -> NormativeSystem {
    let cfg = &eco.config;
    let n = cfg.n();
    let labels = cfg.roster_labels();
    let q0: Queues = vec![Vec::new(); n];
    let mut queues: Vec<Queues> = vec![q0.clone()];
    let mut index: HashMap<Queues, usize> = HashMap::from([(q0, 0)]);
    let mut table: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < queues.len() {
        let mut row = Vec::with_capacity(eco.states.len());
        for st in &eco.states {
            let next = fifo_update(&queues[i], st);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    queues.push(next.clone());
                    index.insert(next, queues.len() - 1);
                    queues.len() - 1
                }
            };
            row.push(id);
        }
        table.push(row);
        i += 1;
    }
    let names: Vec<String> = queues
        .iter()
        .map(|q| {
            let parts: Vec<String> = q
                .iter()
                .map(|queue| format!("<{}>", queue.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(",")))
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let mut norm = NormativeSystem::new(names, NormStateId(0), eco.mas.num_states());
    for (qi, q) in queues.iter().enumerate() {
        let qid = NormStateId(qi as u32);
        let designated: Vec<Option<usize>> = q.iter().map(|queue| queue.first().copied()).collect();
        for s in eco.mas.states() {
            norm.set_update(qid, s, NormStateId(table[qi][s.index()] as u32));
            if eco.state(s).round == 2 {
                let forbidden = skipping_actions(eco, s, &designated);
                if !forbidden.is_empty() {
                    norm.set_forbidden(s, qid, forbidden);
                }
            }
        }
    }
    norm
}

/// The three static norms of the one-producer, two-consumer case: the first
/// forbids serving `c_1`, the second forbids serving `c_2`, the third
/// forbids nothing.
pub fn static_norms_simple(eco: &Ecosystem) -> Result<[NormativeSystem; 3]> {
    let cfg = &eco.config;
    let simple = cfg.n() == 1
        && cfg.capacity == [1]
        && cfg.m() == 2
        && cfg.new_agent.is_none()
        && cfg.requirements.iter().all(|r| r.len() == 1 && r[0] == cfg.goods[0]);
    if !simple {
        return Err(Error::Config("static norms are defined for one producer of capacity 1 and two consumers".into()));
    }
    let s2 = eco.mas.states().find(|&s| eco.state(s).round == 2).expect("a round-2 state is reachable");
    let forbid_serving = |i: usize| {
        let mut norm = NormativeSystem::new(["q0"], NormStateId(0), eco.mas.num_states());
        for (a, _) in eco.mas.transitions_from(s2) {
            if eco.served_by(0, a.get(0)) == [i] {
                norm.forbid(s2, NormStateId(0), a.clone());
            }
        }
        norm
    };
    Ok([forbid_serving(0), forbid_serving(1), NormativeSystem::new(["q0"], NormStateId(0), eco.mas.num_states())])
}

/// `(phi_1, phi_2)`: every request to a producer can eventually be met,
/// respectively is inevitably met.
pub fn objectives(cfg: &EcoConfig) -> (Formula, Formula) {
    let mk = |inevitable: bool| {
        let mut parts = Vec::new();
        for l in cfg.roster_labels() {
            for j in 1..=cfg.n() {
                let done = Formula::atom(format!("d_{l}=bot"));
                let later = if inevitable { Formula::af(done) } else { Formula::ef(done) };
                parts.push(Formula::ag(Formula::implies(Formula::atom(format!("t_{l}=p_{j}")), later)));
            }
        }
        Formula::conjunction(parts)
    };
    (mk(false), mk(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_mas;
    use crate::norm::validate_norm;

    #[test]
    fn config_text_round_trip() {
        let mut cfg = EcoConfig::single_producer(3, true, true);
        cfg.capacity = vec![2];
        assert_eq!(EcoConfig::parse(&cfg.to_text()).unwrap(), cfg);
        assert_eq!(EcoConfig::parse(&EcoConfig::instantiation().to_text()).unwrap(), EcoConfig::instantiation());
    }

    #[test]
    fn config_errors() {
        assert!(EcoConfig::parse("n = 1\nm = 1\ngoods = g\nr_1 = h\n").is_err());
        assert!(EcoConfig::parse("n = 1\nm = 1\ngoods = g\nr_1 = g\nwhat = 1\n").is_err());
        assert!(EcoConfig::parse("n = 1\nm = 1\ngoods = g\ncapacity = 0\nr_1 = g\n").is_err());
        let mut cfg = EcoConfig::instantiation();
        cfg.new_agent = Some(good_list(&["g_1", "g_2"]));
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn smallest_system_is_deterministic() {
        let eco = gen_ecosystem(&EcoConfig::single_producer(1, false, false)).unwrap();
        assert!(validate_mas(&eco.mas).is_ok());
        // request, then served back into the empty start state
        assert_eq!(eco.mas.num_states(), 2);
        for s in eco.mas.states() {
            assert_eq!(eco.mas.transitions_from(s).len(), 1);
        }
    }

    #[test]
    fn generated_systems_validate() {
        for cfg in [
            EcoConfig::instantiation(),
            EcoConfig::simple(),
            EcoConfig::single_producer(3, true, false),
            EcoConfig::single_producer(3, true, true),
        ] {
            let eco = gen_ecosystem(&cfg).unwrap();
            let report = validate_mas(&eco.mas);
            assert!(report.is_ok(), "{report}");
            assert!(eco.states.iter().all(|s| s.invariants_hold(&eco)));
            for norm in [norm_round_robin(&eco), norm_fifo(&eco), norm_skip2(&eco)] {
                let report = validate_norm(&eco.mas, &norm);
                assert!(report.is_ok(), "{report}");
            }
        }
    }

    #[test]
    fn objective_sizes() {
        let count = |f: &Formula| {
            fn go(f: &Formula) -> usize {
                match f {
                    Formula::And(a, b) => go(a) + go(b),
                    _ => 1,
                }
            }
            go(f)
        };
        let (p1, p2) = objectives(&EcoConfig::single_producer(1, false, false));
        assert_eq!(count(&p1), 1);
        assert_eq!(count(&p2), 1);
        let (p1, _) = objectives(&EcoConfig::instantiation());
        assert_eq!(count(&p1), 6);
    }

    #[test]
    fn skip2_cycles() {
        let eco = gen_ecosystem(&EcoConfig::single_producer(3, false, false)).unwrap();
        let norm = norm_skip2(&eco);
        let s1 = eco.mas.states().find(|&s| eco.state(s).round == 1).unwrap();
        let q = |name: &str| norm.norm_state_id(name).unwrap();
        assert_eq!(norm.update(q("(1)"), s1), q("(3)"));
        assert_eq!(norm.update(q("(3)"), s1), q("(2)"));
        assert_eq!(norm.update(q("(2)"), s1), q("(1)"));
    }
}
