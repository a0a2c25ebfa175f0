//! Random instance generators and reference procedures shared by the
//! integration tests and the acceptance suite.
#![allow(dead_code)]

use normsys::ctl::Formula;
use normsys::kripke::KripkeStructure;
use normsys::model::{available_joint_actions, JointAction, Mas, MasBuilder, StateId};
use normsys::norm::{NormStateId, NormativeSystem};
use normsys::recognition::NormFamily;
use normsys::synthesis::verify;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ATOMS: [&str; 4] = ["p", "q", "r", "x=1"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A serial structure with at most `max_states` states labelled over
/// `ATOMS`.
pub fn random_kripke(rng: &mut impl Rng, max_states: usize) -> KripkeStructure {
    let n = rng.gen_range(1..=max_states);
    let successors: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=3.min(n));
            (0..d).map(|_| rng.gen_range(0..n)).collect()
        })
        .collect();
    let labels: Vec<Vec<String>> =
        (0..n).map(|_| ATOMS.iter().filter(|_| rng.gen_bool(0.4)).map(|a| a.to_string()).collect()).collect();
    let mut initial: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..n)).collect();
    initial.sort_unstable();
    initial.dedup();
    KripkeStructure::from_graph(initial, successors, labels)
}

/// A formula of depth at most `depth` over `ATOMS` and one atom that never
/// holds.
pub fn random_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..7) {
            0 => Formula::True,
            1 => Formula::False,
            2 => Formula::atom("unknown"),
            _ => Formula::atom(*ATOMS.choose(rng).unwrap()),
        };
    }
    let d = depth - 1;
    let sub = |rng: &mut _| Box::new(random_formula(rng, d));
    match rng.gen_range(0..13) {
        0 => Formula::Not(sub(rng)),
        1 => Formula::And(sub(rng), sub(rng)),
        2 => Formula::Or(sub(rng), sub(rng)),
        3 => Formula::Implies(sub(rng), sub(rng)),
        4 => Formula::EX(sub(rng)),
        5 => Formula::AX(sub(rng)),
        6 => Formula::EF(sub(rng)),
        7 => Formula::AF(sub(rng)),
        8 => Formula::EG(sub(rng)),
        9 => Formula::AG(sub(rng)),
        10 => Formula::EU(sub(rng), sub(rng)),
        11 => Formula::AU(sub(rng), sub(rng)),
        _ => Formula::Not(sub(rng)),
    }
}

pub struct MasShape {
    pub states: usize,
    pub agents: usize,
    pub max_actions: usize,
    /// Number of distinct observations agent 0 can make.
    pub obs_classes: usize,
    pub max_branching: usize,
    /// Every action is available everywhere.
    pub all_available: bool,
}

/// A valid system. Agent 0 only sees an observation class per state and its
/// available actions depend only on that class; other agents see the state.
/// When there are at least as many classes as states, agent 0 sees the
/// state too.
pub fn random_mas(rng: &mut impl Rng, shape: &MasShape) -> Mas {
    let agents: Vec<String> = (0..shape.agents).map(|i| format!("ag{i}")).collect();
    let mut b = MasBuilder::new(agents);
    let actions: Vec<Vec<_>> =
        (0..shape.agents).map(|i| (0..shape.max_actions).map(|k| b.action(i, &format!("a{k}"))).collect()).collect();
    let states: Vec<StateId> = (0..shape.states).map(|i| b.state(&format!("s{i}"))).collect();
    let all = shape.all_available;
    let pick = |rng: &mut dyn rand::RngCore, acts: &[normsys::model::ActionId]| {
        let k = if all { acts.len() } else { rng.gen_range(1..=acts.len()) };
        let mut v = acts.to_vec();
        v.shuffle(rng);
        v.truncate(k);
        v.sort();
        v
    };
    let classes: Vec<Vec<_>> = (0..shape.obs_classes).map(|_| pick(rng, &actions[0])).collect();
    let mut avail: Vec<Vec<Vec<_>>> = Vec::new();
    for (si, &s) in states.iter().enumerate() {
        // With enough classes every state is told apart.
        let c = if shape.obs_classes >= shape.states { si } else { rng.gen_range(0..shape.obs_classes) };
        b.set_observation(0, s, format!("o{c}"));
        let mut per_agent = vec![classes[c].clone()];
        for acts in &actions[1..] {
            per_agent.push(pick(rng, acts));
        }
        for (i, acts) in per_agent.iter().enumerate() {
            b.set_available(s, i, acts.iter().copied());
        }
        avail.push(per_agent);
        for a in ATOMS {
            if rng.gen_bool(0.35) {
                b.add_label(s, a);
            }
        }
    }
    for (si, &s) in states.iter().enumerate() {
        let mut joint: Vec<Vec<normsys::model::ActionId>> = vec![Vec::new()];
        for acts in &avail[si] {
            joint = joint.into_iter().flat_map(|p| acts.iter().map(move |&a| [p.clone(), vec![a]].concat())).collect();
        }
        for j in joint {
            for _ in 0..rng.gen_range(1..=shape.max_branching) {
                let t = states[rng.gen_range(0..states.len())];
                b.add_transition(s, JointAction::new(j.clone()), t);
            }
        }
    }
    b.add_initial(states[0]);
    if states.len() > 1 && rng.gen_bool(0.3) {
        b.add_initial(states[rng.gen_range(1..states.len())]);
    }
    b.build()
}

/// A random valid norm with `k` normative states. A `sharp` norm keeps a
/// single joint action wherever there is a choice.
pub fn random_norm_with(rng: &mut impl Rng, m: &Mas, k: usize, sharp: bool) -> NormativeSystem {
    let names: Vec<String> = (0..k).map(|i| format!("n{i}")).collect();
    let mut n = NormativeSystem::new(names, NormStateId(rng.gen_range(0..k) as u32), m.num_states());
    for q in 0..k {
        let q = NormStateId(q as u32);
        for s in m.states() {
            let acts = available_joint_actions(m, s).unwrap();
            if acts.len() >= 2 && (sharp || rng.gen_bool(0.6)) {
                let mut shuffled = acts.clone();
                shuffled.shuffle(rng);
                let forbid = if sharp { acts.len() - 1 } else { rng.gen_range(1..acts.len()) };
                for a in shuffled.into_iter().take(forbid) {
                    n.forbid(s, q, a);
                }
            }
            n.set_update(q, s, NormStateId(rng.gen_range(0..k) as u32));
        }
    }
    n
}

pub fn random_norm(rng: &mut impl Rng, m: &Mas, k: usize) -> NormativeSystem {
    random_norm_with(rng, m, k, false)
}

/// A family of two or three random norms on a tiny system, observed by
/// agent 0. Half of the families are deterministic systems under norms
/// that leave no choice, where rivals are easier to tell apart.
pub fn random_family(rng: &mut impl Rng) -> NormFamily {
    let sharp = rng.gen_bool(0.5);
    let states = rng.gen_range(2..=5);
    let shape = MasShape {
        states,
        agents: rng.gen_range(1..=2),
        max_actions: 2,
        obs_classes: if sharp { states } else { rng.gen_range(1..=states) },
        max_branching: if sharp { 1 } else { 2 },
        all_available: sharp,
    };
    let m = random_mas(rng, &shape);
    let members: Vec<NormativeSystem> = (0..rng.gen_range(2..=3))
        .map(|_| {
            let k = rng.gen_range(1..=2);
            random_norm_with(rng, &m, k, sharp)
        })
        .collect();
    NormFamily::observed_by(m, members, 0, 0).expect("generated family is valid")
}

/// Decides whether some norm with `k` normative states makes `f` hold by
/// trying every such norm: every initial state, every nonempty set of
/// surviving joint actions at every choice state and normative state, and
/// every update target for every state reachable in `m`. No symmetry is
/// exploited.
pub fn brute_synthesis(m: &Mas, f: &Formula, k: usize) -> bool {
    let reach = m.reachable_states();
    let choice: Vec<(StateId, Vec<JointAction>)> =
        reach.iter().map(|&s| (s, available_joint_actions(m, s).unwrap())).filter(|(_, a)| a.len() >= 2).collect();
    // Digits: q0, then a surviving-set mask per (q, choice state), then an
    // update per (q, reachable state).
    let mut radix = vec![k];
    for _ in 0..k {
        for (_, acts) in &choice {
            radix.push((1 << acts.len()) - 1);
        }
    }
    radix.extend(std::iter::repeat_n(k, k * reach.len()));
    let mut digits = vec![0usize; radix.len()];
    loop {
        let names: Vec<String> = (0..k).map(|i| format!("n{i}")).collect();
        let mut n = NormativeSystem::new(names, NormStateId(digits[0] as u32), m.num_states());
        let mut d = 1;
        for q in 0..k {
            for (s, acts) in &choice {
                let survive = digits[d] + 1;
                d += 1;
                for (i, a) in acts.iter().enumerate() {
                    if survive & (1 << i) == 0 {
                        n.forbid(*s, NormStateId(q as u32), a.clone());
                    }
                }
            }
        }
        for q in 0..k {
            for &s in &reach {
                n.set_update(NormStateId(q as u32), s, NormStateId(digits[d] as u32));
                d += 1;
            }
        }
        if verify(m, &n, f).unwrap() {
            return true;
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return false;
            }
            digits[i] += 1;
            if digits[i] < radix[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Number of candidates `brute_synthesis` enumerates.
pub fn brute_synthesis_size(m: &Mas, k: usize) -> f64 {
    let reach = m.reachable_states();
    let mut size = k as f64;
    for &s in &reach {
        let a = available_joint_actions(m, s).unwrap().len();
        if a >= 2 {
            size *= (((1u64 << a) - 1) as f64).powi(k as i32);
        }
    }
    size * (k as f64).powi((k * reach.len()) as i32)
}

/// A tiny random synthesis instance whose brute-force space for `k`
/// normative states stays under `max_candidates`, with at most eight choice
/// states.
pub fn synthesis_instance(seed: u64, k: usize, max_candidates: f64) -> (Mas, Formula) {
    let mut r = rng(seed);
    loop {
        let shape = MasShape {
            states: r.gen_range(2..=if k == 1 { 6 } else { 3 }),
            agents: r.gen_range(1..=2),
            max_actions: 2,
            obs_classes: 2,
            max_branching: 1,
            all_available: false,
        };
        let m = random_mas(&mut r, &shape);
        let choice =
            m.reachable_states().into_iter().filter(|&s| available_joint_actions(&m, s).unwrap().len() >= 2).count();
        if choice == 0 || choice > 8 || brute_synthesis_size(&m, k) > max_candidates {
            continue;
        }
        let f = random_formula(&mut r, 3);
        return (m, f);
    }
}

/// Compares the enumerators with `brute_synthesis` on one instance.
pub fn check_synthesis_agreement(m: &Mas, f: &Formula, k: usize) -> Result<(), String> {
    use normsys::synthesis::{synthesize_dynamic, synthesize_static, SynthesisBudget, SynthesisOutcome};
    let expected = brute_synthesis(m, f, k);
    let got = if k == 1 {
        synthesize_static(m, f, SynthesisBudget::default())
    } else {
        synthesize_dynamic(m, f, k, SynthesisBudget::default())
    }
    .map_err(|e| e.to_string())?;
    match (&got, expected) {
        (SynthesisOutcome::Found(n), true) => {
            if verify(m, n, f).unwrap() && n.num_norm_states() <= k {
                Ok(())
            } else {
                Err(format!("found norm does not verify for {f}"))
            }
        }
        (SynthesisOutcome::NoneExists(_), false) => Ok(()),
        (other, expected) => Err(format!("k={k} {f}: enumerator {other:?}, brute force {expected}")),
    }
}

/// Checks both deciders against the path-enumerating procedures and replays
/// their witnesses.
pub fn check_recognition_agreement(f: &NormFamily) -> Result<(), String> {
    use normsys::recognition::*;
    let nc1 = decide_nc1(f);
    if f.len() > 1 {
        let depth = build_sync_product(f).map_err(|e| e.to_string())?.len() + 1;
        let brute = nc1_bruteforce(f, depth);
        match (&nc1, &brute) {
            (RecognitionVerdict::Nc1Unsuccessful(w), Some(b)) => {
                check_nc1_witness(f, w).map_err(|e| format!("decided lasso: {e}"))?;
                check_nc1_witness(f, b).map_err(|e| format!("brute lasso: {e}"))?;
            }
            (RecognitionVerdict::Nc1Successful, None) => {}
            _ => return Err(format!("nc1 {nc1:?} but brute force {brute:?}")),
        }
    } else if !nc1.is_successful() {
        return Err("singleton family must be recognisable".into());
    }

    let (nc2, stats) = decide_nc2_detailed(f);
    match &nc2 {
        RecognitionVerdict::Nc2Successful(path) => {
            check_nc2_witness(f, path).map_err(|e| format!("decided path: {e}"))?;
            // Breadth-first search returns a shortest witness.
            match nc2_bruteforce(f, path.len()) {
                Some(b) if b.len() == path.len() => check_nc2_witness(f, &b).map_err(|e| format!("brute path: {e}")),
                other => Err(format!("nc2 found {path:?}, brute force {other:?}")),
            }
        }
        _ => match nc2_bruteforce(f, stats.explored.min(7)) {
            None => Ok(()),
            Some(b) => Err(format!("nc2 unsuccessful but brute force found {b:?}")),
        },
    }?;
    Ok(())
}

/// Every automaton over `{a, b}` with `n` states and initial state 0, up
/// to renaming the other states. Final states are irrelevant to the
/// reduction and left empty.
pub fn all_nfas(n: usize) -> Vec<normsys::recognition::Nfa> {
    use std::collections::{BTreeMap, BTreeSet, HashSet};
    let cells = 2 * n;
    let per_cell = 1usize << n;
    let total = per_cell.pow(cells as u32);
    let perms: Vec<Vec<usize>> = {
        let rest: Vec<usize> = (1..n).collect();
        let mut out = Vec::new();
        fn permute(v: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
            if i == v.len() {
                out.push(v.clone());
                return;
            }
            for j in i..v.len() {
                v.swap(i, j);
                permute(v, i + 1, out);
                v.swap(i, j);
            }
        }
        let mut v = rest;
        permute(&mut v, 0, &mut out);
        out.into_iter().map(|p| [vec![0], p].concat()).collect()
    };
    let rename = |code: usize, p: &[usize]| -> usize {
        let mut out = vec![0usize; cells];
        for q in 0..n {
            for a in 0..2 {
                let mask = (code / per_cell.pow((q * 2 + a) as u32)) % per_cell;
                let mut m2 = 0;
                for (t, &pt) in p.iter().enumerate() {
                    if mask & (1 << t) != 0 {
                        m2 |= 1 << pt;
                    }
                }
                out[p[q] * 2 + a] = m2;
            }
        }
        out.iter().rev().fold(0, |acc, &m| acc * per_cell + m)
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for code in 0..total {
        let canon = perms.iter().map(|p| rename(code, p)).min().unwrap();
        if !seen.insert(canon) {
            continue;
        }
        let mut delta: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
        for q in 0..n {
            for a in 0..2 {
                let mask = (code / per_cell.pow((q * 2 + a) as u32)) % per_cell;
                let t: BTreeSet<usize> = (0..n).filter(|t| mask & (1 << t) != 0).collect();
                if !t.is_empty() {
                    delta.insert((q, a), t);
                }
            }
        }
        out.push(normsys::recognition::Nfa {
            states: (0..n).map(|i| format!("q{i}")).collect(),
            alphabet: vec!["a".into(), "b".into()],
            initial: 0,
            finals: BTreeSet::new(),
            delta,
        });
    }
    out
}

/// Whether the reduction answers the universality question for `nfa`.
pub fn reduction_agrees(nfa: &normsys::recognition::Nfa) -> Result<(), String> {
    use normsys::recognition::{build_nfa_recognition_instance, decide_nc2, nfa_run_universal};
    let (_, family) = build_nfa_recognition_instance(nfa).map_err(|e| e.to_string())?;
    let universal = nfa_run_universal(nfa);
    let recognised = decide_nc2(&family).is_successful();
    if universal == !recognised {
        Ok(())
    } else {
        Err(format!("universal {universal} but nc2 successful {recognised}: {:?}", nfa.delta))
    }
}

/// Runs the command line and returns `(status, stdout, stderr)`.
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["normsys"];
    full.extend_from_slice(args);
    let code = normsys::cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Writes a random family to `dir`, decides both problems through the
/// command line twice, checks the reports are identical and replays every
/// witness.
pub fn cli_replay_roundtrip(seed: u64, dir: &std::path::Path) -> Result<(), String> {
    use normsys::dsl::{write_model, write_norm};
    let f = random_family(&mut rng(seed));
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    std::fs::write(p("m.mas"), write_model(f.mas())).unwrap();
    let mut fam = String::from("model m.mas\n");
    for (i, n) in f.members().iter().enumerate() {
        std::fs::write(p(&format!("n{i}.norm")), write_norm(n, f.mas())).unwrap();
        fam.push_str(&format!("norm n{i}.norm\n"));
    }
    fam.push_str(&format!("active {}\nobserver {}\n", f.active(), f.mas().agents()[0]));
    std::fs::write(p("f.fam"), fam).unwrap();
    for cmd in ["nc1", "nc2"] {
        let w = p(&format!("{cmd}.json"));
        let _ = std::fs::remove_file(&w);
        let args = ["--json", "--no-timing", cmd, "--family", &p("f.fam"), "--witness-out", &w];
        let (c1, o1, e1) = run_cli(&args);
        let (c2, o2, _) = run_cli(&args);
        if c1 != 0 || c2 != 0 {
            return Err(format!("{cmd} exited {c1}: {e1}"));
        }
        if o1 != o2 {
            return Err(format!("{cmd} reports differ"));
        }
        let report: serde_json::Value = serde_json::from_str(&o1).map_err(|e| e.to_string())?;
        let has_witness = report.get("witness").is_some();
        if has_witness != std::path::Path::new(&w).exists() {
            return Err(format!("{cmd}: witness file mismatch"));
        }
        if has_witness {
            let (c, o, e) = run_cli(&["--no-timing", cmd, "--family", &p("f.fam"), "--replay", &w]);
            if c != 0 || !o.contains("replay-valid") {
                return Err(format!("{cmd} replay failed ({c}): {e}"));
            }
        }
    }
    Ok(())
}
