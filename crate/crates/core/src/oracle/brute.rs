//! Exhaustive search over all lasso plans within length bounds.
//!
//! Partial plans are merged only when every continuation is provably
//! interchangeable, so the search is exact for the given bounds:
//!
//! * a prefix is summarized by its last state, the set of non-secret
//!   witness states consistent with its outputs, and the automaton states
//!   reachable on its labels;
//! * a cycle is summarized by its transfer relations over one period: which
//!   witness states lead to which, and which automaton states lead to which
//!   (and whether an accepting state is passed on the way).
//!
//! A prefix and a closed cycle at the same entry state form a secure,
//! satisfying plan iff both relation graphs admit an infinite path from the
//! prefix sets (for the automaton, one through a flagged edge). Among
//! partial plans with equal summaries only the Pareto front over
//! (cost, length) is kept, with ties on both broken by the lexicographically
//! smaller name sequence, matching the planner's ranking.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::buchi::{translate, Nba};
use crate::graph::WeightedGraph;
use crate::ltl::Formula;
use crate::model::{Alpha, Cost, Plan, Wts};

use super::{is_secure, satisfies};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("state {0:?} is not an initial state")]
    NotInitial(String),
    #[error("brute force supports at most 64 states, got {0}")]
    TooLarge(usize),
    #[error("search exceeded {0} partial plans")]
    Ceiling(usize),
    #[error("best candidate failed re-verification")]
    Inconsistent,
}

/// Search bounds. `ceiling` caps the number of partial plans kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForce {
    pub max_prefix: usize,
    pub max_cycle: usize,
    pub ceiling: usize,
}

impl BruteForce {
    pub fn new(max_prefix: usize, max_cycle: usize) -> Self {
        BruteForce {
            max_prefix,
            max_cycle,
            ceiling: 2_000_000,
        }
    }

    /// Cheapest secure plan from `q0` satisfying `f` whose prefix and cycle
    /// fit the bounds, ranked like the planner ranks plans.
    pub fn plan(
        &self,
        t: &Wts,
        f: &Formula,
        q0: usize,
        alpha: Alpha,
    ) -> Result<Option<Plan>, OracleError> {
        if !t.is_initial(q0) {
            return Err(OracleError::NotInitial(t.name(q0).to_string()));
        }
        let nba = translate(f);
        if t.len() > 64 || nba.num_states > 64 {
            return Err(OracleError::TooLarge(t.len().max(nba.num_states)));
        }
        let search = Search::new(t, &nba, *self);
        let best = search.run(q0, alpha)?;
        if let Some(p) = &best {
            if !satisfies(t, p, f) || !is_secure(t, p).secure {
                return Err(OracleError::Inconsistent);
            }
        }
        Ok(best)
    }
}

pub fn brute_force_plan(
    t: &Wts,
    f: &Formula,
    q0: usize,
    max_prefix: usize,
    max_cycle: usize,
    alpha: Alpha,
) -> Result<Option<Plan>, OracleError> {
    BruteForce::new(max_prefix, max_cycle).plan(t, f, q0, alpha)
}

#[derive(Debug, Clone)]
struct Label {
    cost: u64,
    len: usize,
    path: Vec<usize>,
}

/// Pareto front of labels over (cost, length); returns whether `new` was kept.
fn insert(front: &mut Vec<Label>, new: Label, ranks: &[usize]) -> bool {
    for old in front.iter_mut() {
        if old.cost < new.cost && old.len <= new.len || old.cost <= new.cost && old.len < new.len {
            return false;
        }
        if old.cost == new.cost && old.len == new.len {
            if lex(&new.path, &old.path, ranks) == Ordering::Less {
                *old = new;
                return true;
            }
            return false;
        }
    }
    front.retain(|old| !(new.cost <= old.cost && new.len <= old.len));
    front.push(new);
    true
}

fn lex(a: &[usize], b: &[usize], ranks: &[usize]) -> Ordering {
    a.iter().map(|&q| ranks[q]).cmp(b.iter().map(|&q| ranks[q]))
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

type PrefixKey = (usize, u64, u64);
/// Current state, witness relation rows, automaton relation rows.
type CycleKey = (usize, Vec<u64>, Vec<(u64, u64)>);
type Summary = (Vec<u64>, Vec<(u64, u64)>);

struct Search<'a> {
    t: &'a Wts,
    nba: &'a Nba,
    bounds: BruteForce,
    ranks: Vec<usize>,
    out_id: Vec<usize>,
    /// `succ_out[q][o]`: successors of `q` with output `o`.
    succ_out: Vec<Vec<u64>>,
    /// `post[b][q]`: automaton successors of `b` reading the label of `q`.
    post: Vec<Vec<u64>>,
    accepting: u64,
    created: usize,
}

impl<'a> Search<'a> {
    fn new(t: &'a Wts, nba: &'a Nba, bounds: BruteForce) -> Self {
        let outputs: Vec<&str> = t.output_symbols().into_iter().collect();
        let out_id: Vec<usize> = (0..t.len())
            .map(|q| outputs.binary_search(&t.output(q)).unwrap())
            .collect();
        let succ_out = (0..t.len())
            .map(|q| {
                let mut row = vec![0u64; outputs.len()];
                for &(r, _) in t.out_edges(q) {
                    row[out_id[r]] |= 1 << r;
                }
                row
            })
            .collect();
        let post = (0..nba.num_states)
            .map(|b| {
                (0..t.len())
                    .map(|q| {
                        nba.post(b, t.label(q))
                            .into_iter()
                            .fold(0u64, |m, x| m | 1 << x)
                    })
                    .collect()
            })
            .collect();
        let accepting = (0..nba.num_states)
            .filter(|&b| nba.is_accepting(b))
            .fold(0u64, |m, b| m | 1 << b);
        Search {
            t,
            nba,
            bounds,
            ranks: t.name_ranks(),
            out_id,
            succ_out,
            post,
            accepting,
            created: 0,
        }
    }

    fn step_witness(&self, mask: u64, target: usize) -> u64 {
        let o = self.out_id[target];
        bits(mask).fold(0, |m, x| m | self.succ_out[x][o])
    }

    fn step_nba(&self, mask: u64, read: usize) -> u64 {
        bits(mask).fold(0, |m, b| m | self.post[b][read])
    }

    fn count(&mut self) -> Result<(), OracleError> {
        self.created += 1;
        if self.created > self.bounds.ceiling {
            return Err(OracleError::Ceiling(self.bounds.ceiling));
        }
        Ok(())
    }

    fn prefixes(&mut self, q0: usize) -> Result<BTreeMap<PrefixKey, Vec<Label>>, OracleError> {
        let t = self.t;
        let w0 = t
            .initial()
            .iter()
            .filter(|&&q| !t.is_secret(q) && t.output(q) == t.output(q0))
            .fold(0u64, |m, &q| m | 1 << q);
        let n0 = self.nba.initial.iter().fold(0u64, |m, &b| m | 1 << b);
        let mut map: BTreeMap<PrefixKey, Vec<Label>> = BTreeMap::new();
        if w0 == 0 || n0 == 0 {
            return Ok(map);
        }
        let start = (q0, w0, n0);
        map.insert(
            start,
            vec![Label {
                cost: 0,
                len: 0,
                path: Vec::new(),
            }],
        );
        let mut frontier = vec![start];
        for len in 0..self.bounds.max_prefix {
            let mut touched = Vec::new();
            for key in frontier {
                let labels: Vec<Label> =
                    map[&key].iter().filter(|l| l.len == len).cloned().collect();
                let (s, w, n) = key;
                for &(r, ticks) in t.out_edges(s) {
                    let w2 = self.step_witness(w, r);
                    let n2 = self.step_nba(n, s);
                    if w2 == 0 || n2 == 0 {
                        continue;
                    }
                    let k2 = (r, w2, n2);
                    for l in &labels {
                        let mut path = l.path.clone();
                        path.push(s);
                        let new = Label {
                            cost: l.cost + ticks,
                            len: len + 1,
                            path,
                        };
                        if insert(map.entry(k2).or_default(), new, &self.ranks) {
                            self.count()?;
                            touched.push(k2);
                        }
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            frontier = touched;
        }
        Ok(map)
    }

    fn cycles(&mut self, e: usize) -> Result<BTreeMap<Summary, Vec<Label>>, OracleError> {
        let t = self.t;
        let nq = t.len();
        let rw: Vec<u64> = (0..nq)
            .map(|a| {
                if t.output(a) == t.output(e) {
                    1 << a
                } else {
                    0
                }
            })
            .collect();
        let rn: Vec<(u64, u64)> = (0..self.nba.num_states).map(|b| (1 << b, 0)).collect();
        let start: CycleKey = (e, rw, rn);
        let mut open: HashMap<CycleKey, Vec<Label>> = HashMap::new();
        open.insert(
            start.clone(),
            vec![Label {
                cost: 0,
                len: 1,
                path: vec![e],
            }],
        );
        let mut closed: BTreeMap<Summary, Vec<Label>> = BTreeMap::new();
        let mut frontier = vec![start];
        for len in 1..=self.bounds.max_cycle {
            let mut touched = Vec::new();
            for key in frontier {
                let labels: Vec<Label> = open[&key]
                    .iter()
                    .filter(|l| l.len == len)
                    .cloned()
                    .collect();
                let (cur, rw, rn) = &key;
                for &(r, ticks) in t.out_edges(*cur) {
                    let rw2: Vec<u64> = rw.iter().map(|&m| self.step_witness(m, r)).collect();
                    let rn2: Vec<(u64, u64)> = rn
                        .iter()
                        .map(|&(reach, flagged)| {
                            let reach2 = self.step_nba(reach, *cur);
                            (
                                reach2,
                                self.step_nba(flagged, *cur) | reach2 & self.accepting,
                            )
                        })
                        .collect();
                    if r == e {
                        let entry = closed.entry((rw2.clone(), rn2.clone())).or_default();
                        for l in &labels {
                            let new = Label {
                                cost: l.cost + ticks,
                                len,
                                path: l.path.clone(),
                            };
                            if insert(entry, new, &self.ranks) {
                                self.count()?;
                            }
                        }
                    }
                    if len == self.bounds.max_cycle {
                        continue;
                    }
                    let k2 = (r, rw2, rn2);
                    for l in &labels {
                        let mut path = l.path.clone();
                        path.push(r);
                        let new = Label {
                            cost: l.cost + ticks,
                            len: len + 1,
                            path,
                        };
                        if insert(open.entry(k2.clone()).or_default(), new, &self.ranks) {
                            self.count()?;
                            touched.push(k2.clone());
                        }
                    }
                }
            }
            touched.sort();
            touched.dedup();
            frontier = touched;
        }
        Ok(closed)
    }

    fn run(mut self, q0: usize, alpha: Alpha) -> Result<Option<Plan>, OracleError> {
        let prefixes = self.prefixes(q0)?;
        let mut entries: Vec<usize> = prefixes.keys().map(|k| k.0).collect();
        entries.sort_unstable();
        entries.dedup();
        let mut best: Option<(Cost, usize, usize, Vec<usize>, Vec<usize>)> = None;
        for e in entries {
            let cycles = self.cycles(e)?;
            for (&(_, w, n), pre) in prefixes.range((e, 0, 0)..=(e, u64::MAX, u64::MAX)) {
                for ((rw, rn), cyc) in &cycles {
                    if !infinite_path(w, rw) || !accepting_cycle(n, rn) {
                        continue;
                    }
                    for p in pre {
                        for c in cyc {
                            let cost = alpha.combine(self.t.tick(p.cost), self.t.tick(c.cost));
                            let better = match &best {
                                None => true,
                                Some((bc, bpl, bcl, bp, bcy)) => {
                                    (cost, p.len, c.len)
                                        .cmp(&(*bc, *bpl, *bcl))
                                        .then_with(|| lex(&p.path, bp, &self.ranks))
                                        .then_with(|| lex(&c.path, bcy, &self.ranks))
                                        == Ordering::Less
                                }
                            };
                            if better {
                                best = Some((cost, p.len, c.len, p.path.clone(), c.path.clone()));
                            }
                        }
                    }
                }
            }
        }
        Ok(best.map(|(_, _, _, prefix, cycle)| Plan::new(prefix, cycle)))
    }
}

/// Whether the relation graph `rel` has an infinite path from some state in
/// `from`.
fn infinite_path(from: u64, rel: &[u64]) -> bool {
    let mut reach = from;
    loop {
        let next = bits(reach).fold(reach, |m, a| m | rel[a]);
        if next == reach {
            break;
        }
        reach = next;
    }
    // Strip states without successors inside the set until stable.
    let mut alive = reach;
    loop {
        let next = bits(alive)
            .filter(|&a| rel[a] & alive != 0)
            .fold(0, |m, a| m | 1 << a);
        if next == alive {
            return alive != 0;
        }
        alive = next;
    }
}

/// Whether the automaton relation has a reachable cycle through a flagged edge.
fn accepting_cycle(from: u64, rel: &[(u64, u64)]) -> bool {
    let n = rel.len();
    // closure[b]: states reachable from b in one or more periods.
    let mut closure: Vec<u64> = rel.iter().map(|r| r.0).collect();
    loop {
        let mut changed = false;
        for b in 0..n {
            let next = bits(closure[b]).fold(closure[b], |m, x| m | closure[x]);
            if next != closure[b] {
                closure[b] = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let reach = bits(from).fold(from, |m, b| m | closure[b]);
    bits(reach).any(|b| bits(rel[b].1).any(|x| x == b || closure[x] >> b & 1 == 1))
}

/// Plain enumeration of every lasso within the bounds, checked one by one.
/// Only practical for tiny bounds; used to cross-check [`BruteForce`].
pub fn naive_plan(
    t: &Wts,
    f: &Formula,
    q0: usize,
    max_prefix: usize,
    max_cycle: usize,
    alpha: Alpha,
) -> Option<Plan> {
    let ranks = t.name_ranks();
    let mut best: Option<(Cost, Plan)> = None;
    let mut prefixes: Vec<Vec<usize>> = vec![vec![q0]];
    let mut frontier = vec![vec![q0]];
    for _ in 0..max_prefix {
        let mut next = Vec::new();
        for p in &frontier {
            for &(r, _) in t.out_edges(*p.last().unwrap()) {
                let mut p2 = p.clone();
                p2.push(r);
                next.push(p2);
            }
        }
        prefixes.extend(next.iter().cloned());
        frontier = next;
    }
    for walk in prefixes {
        let (prefix, entry) = walk.split_at(walk.len() - 1);
        let e = entry[0];
        let mut cycles = vec![vec![e]];
        let mut frontier = vec![vec![e]];
        for _ in 1..max_cycle {
            let mut next = Vec::new();
            for c in &frontier {
                for &(r, _) in t.out_edges(*c.last().unwrap()) {
                    let mut c2 = c.clone();
                    c2.push(r);
                    next.push(c2);
                }
            }
            cycles.extend(next.iter().cloned());
            frontier = next;
        }
        for cycle in cycles {
            if t.edge_weight(*cycle.last().unwrap(), e).is_none() {
                continue;
            }
            let plan = Plan::new(prefix.to_vec(), cycle);
            if !satisfies(t, &plan, f) || !is_secure(t, &plan).secure {
                continue;
            }
            let cost = plan
                .weighted_cost(t, alpha)
                .expect("enumerated plans are valid");
            let better = match &best {
                None => true,
                Some((bc, bp)) => {
                    (cost, plan.prefix.len(), plan.cycle.len())
                        .cmp(&(*bc, bp.prefix.len(), bp.cycle.len()))
                        .then_with(|| lex(&plan.prefix, &bp.prefix, &ranks))
                        .then_with(|| lex(&plan.cycle, &bp.cycle, &ranks))
                        == Ordering::Less
                }
            };
            if better {
                best = Some((cost, plan));
            }
        }
    }
    best.map(|(_, p)| p)
}
