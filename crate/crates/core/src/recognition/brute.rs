//! Path-enumerating reference procedures and witness replay.

use std::collections::HashSet;

use super::{LassoWitness, NormFamily};
use crate::error::{Error, Result};
use crate::kripke::ProductState;

type Pair = (usize, usize, usize);

struct LassoSearch<'f> {
    f: &'f NormFamily,
    depth: usize,
    stack: Vec<Pair>,
    dead: HashSet<Pair>,
}

impl LassoSearch<'_> {
    /// Returns `Some(true)` once a repeated pair closes a lasso, `Some(false)`
    /// when every path from `v` ends without a repeat, `None` if the search
    /// was cut off by the depth bound.
    fn dfs(&mut self, v: Pair) -> Option<bool> {
        if self.dead.contains(&v) {
            return Some(false);
        }
        self.stack.push(v);
        let (s, j, t) = v;
        let a = self.f.active();
        let k0 = self.f.structure(a);
        let kj = self.f.structure(j);
        let mut complete = true;
        for &s2 in k0.successors(s) {
            for &t2 in kj.successors(t) {
                if self.f.obs(a, s2) != self.f.obs(j, t2) {
                    continue;
                }
                let w = (s2, j, t2);
                if self.stack.contains(&w) {
                    self.stack.push(w);
                    return Some(true);
                }
                if self.stack.len() >= self.depth {
                    complete = false;
                    continue;
                }
                match self.dfs(w) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => complete = false,
                }
            }
        }
        self.stack.pop();
        if complete {
            self.dead.insert(v);
            Some(false)
        } else {
            None
        }
    }
}

/// Searches observation-synchronised pairs of runs, one of the active
/// member and one of a rival, holding at most `depth` distinct pair states,
/// for a repeated pair. A depth above the number of reachable pairs makes
/// the search complete.
pub fn nc1_bruteforce(f: &NormFamily, depth: usize) -> Option<LassoWitness> {
    let a = f.active();
    let k0 = f.structure(a);
    for j in (0..f.len()).filter(|&j| j != a) {
        let kj = f.structure(j);
        let mut search = LassoSearch { f, depth: depth.max(1), stack: Vec::new(), dead: HashSet::new() };
        for &s in k0.initial() {
            for &t in kj.initial() {
                if f.obs(a, s) != f.obs(j, t) {
                    continue;
                }
                if search.dfs((s, j, t)) == Some(true) {
                    let repeated = search.stack.pop().unwrap();
                    let at = search.stack.iter().position(|&p| p == repeated).unwrap();
                    let decode = |&(s, j, t): &Pair| (k0.state(s), f.structure(j).state(t));
                    return Some(LassoWitness {
                        rival: j,
                        stem: search.stack[..at].iter().map(decode).collect(),
                        cycle: search.stack[at..].iter().map(decode).collect(),
                    });
                }
                search.stack.clear();
            }
        }
    }
    None
}

/// Whether member `j` has a run whose observations spell `obs`.
fn has_matching_run(f: &NormFamily, j: usize, obs: &[u32]) -> bool {
    let k = f.structure(j);
    let mut dead: HashSet<(usize, usize)> = HashSet::new();
    fn go(f: &NormFamily, j: usize, obs: &[u32], pos: usize, s: usize, dead: &mut HashSet<(usize, usize)>) -> bool {
        if pos + 1 == obs.len() {
            return true;
        }
        if dead.contains(&(pos, s)) {
            return false;
        }
        for &t in f.structure(j).successors(s) {
            if f.obs(j, t) == obs[pos + 1] && go(f, j, obs, pos + 1, t, dead) {
                return true;
            }
        }
        dead.insert((pos, s));
        false
    }
    k.initial().iter().any(|&s| f.obs(j, s) == obs[0] && go(f, j, obs, 0, s, &mut dead))
}

/// Whether every run with the same observations as `path` (given as state
/// indices of the active member's structure) belongs to the active member.
fn is_pure(f: &NormFamily, path: &[usize]) -> bool {
    let a = f.active();
    let obs: Vec<u32> = path.iter().map(|&s| f.obs(a, s)).collect();
    (0..f.len()).filter(|&j| j != a).all(|j| !has_matching_run(f, j, &obs))
}

/// Enumerates runs of the active member by increasing length up to `depth`
/// and returns the first whose observation sequence no rival reproduces.
pub fn nc2_bruteforce(f: &NormFamily, depth: usize) -> Option<Vec<ProductState>> {
    let k0 = f.structure(f.active());
    fn extend(f: &NormFamily, path: &mut Vec<usize>, len: usize) -> bool {
        if path.len() == len {
            return is_pure(f, path);
        }
        let last = *path.last().unwrap();
        for &t in f.structure(f.active()).successors(last) {
            path.push(t);
            if extend(f, path, len) {
                return true;
            }
            path.pop();
        }
        false
    }
    for len in 1..=depth {
        for &s in k0.initial() {
            let mut path = vec![s];
            if extend(f, &mut path, len) {
                return Some(path.into_iter().map(|i| k0.state(i)).collect());
            }
        }
    }
    None
}

fn locate(f: &NormFamily, member: usize, st: ProductState) -> Result<usize> {
    f.structure(member)
        .index_of(st)
        .ok_or_else(|| Error::InvalidWitness(format!("state {st:?} is not reachable under member {member}")))
}

fn check_run(f: &NormFamily, member: usize, run: &[ProductState]) -> Result<Vec<usize>> {
    let k = f.structure(member);
    let idx = run.iter().map(|&p| locate(f, member, p)).collect::<Result<Vec<_>>>()?;
    if !k.initial().contains(&idx[0]) {
        return Err(Error::InvalidWitness(format!("run of member {member} does not start in an initial state")));
    }
    for w in idx.windows(2) {
        if !k.has_edge(w[0], w[1]) {
            return Err(Error::InvalidWitness(format!("missing edge in the run of member {member}")));
        }
    }
    Ok(idx)
}

/// Replays a lasso pair: both runs must exist, close their cycles and agree
/// on every observation, and the rival must differ from the active member.
pub fn check_nc1_witness(f: &NormFamily, w: &LassoWitness) -> Result<()> {
    let a = f.active();
    if w.rival == a || w.rival >= f.len() {
        return Err(Error::InvalidWitness(format!("member {} is not a rival", w.rival)));
    }
    if w.cycle.is_empty() {
        return Err(Error::InvalidWitness("empty cycle".into()));
    }
    let all: Vec<(ProductState, ProductState)> = w.stem.iter().chain(&w.cycle).copied().collect();
    let left: Vec<ProductState> = all.iter().map(|p| p.0).collect();
    let right: Vec<ProductState> = all.iter().map(|p| p.1).collect();
    let li = check_run(f, a, &left)?;
    let ri = check_run(f, w.rival, &right)?;
    let start = w.stem.len();
    if !f.structure(a).has_edge(*li.last().unwrap(), li[start])
        || !f.structure(w.rival).has_edge(*ri.last().unwrap(), ri[start])
    {
        return Err(Error::InvalidWitness("cycle does not close".into()));
    }
    if f.extend_observation(&left) != f.extend_observation(&right) {
        return Err(Error::InvalidWitness("observation sequences differ".into()));
    }
    Ok(())
}

/// Replays a finite run of the active member and re-checks, by enumerating
/// rival runs, that no rival reproduces its observations.
pub fn check_nc2_witness(f: &NormFamily, path: &[ProductState]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::InvalidWitness("empty path".into()));
    }
    let idx = check_run(f, f.active(), path)?;
    if is_pure(f, &idx) {
        Ok(())
    } else {
        Err(Error::InvalidWitness("a rival member reproduces the observation sequence".into()))
    }
}
