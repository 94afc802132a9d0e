use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{EdgeGuard, Gba, Nba};
use crate::graph::cyclic_mask;
use crate::ltl::{to_nnf, Formula};

const INIT: usize = usize::MAX;

type FSet = BTreeSet<Formula>;

#[derive(Clone)]
struct Node {
    incoming: BTreeSet<usize>,
    new: FSet,
    old: FSet,
    next: FSet,
}

impl Node {
    fn add_new(&mut self, f: &Formula) {
        if !self.old.contains(f) {
            self.new.insert(f.clone());
        }
    }
}

struct Expansion {
    done: Vec<Node>,
    index: HashMap<(FSet, FSet), usize>,
}

impl Expansion {
    fn run(f: &Formula) -> Vec<Node> {
        let mut exp = Expansion {
            done: Vec::new(),
            index: HashMap::new(),
        };
        let mut stack = vec![Node {
            incoming: BTreeSet::from([INIT]),
            new: BTreeSet::from([f.clone()]),
            old: FSet::new(),
            next: FSet::new(),
        }];
        while let Some(node) = stack.pop() {
            exp.expand(node, &mut stack);
        }
        exp.done
    }

    fn expand(&mut self, mut node: Node, stack: &mut Vec<Node>) {
        loop {
            let Some(eta) = node.new.pop_first() else {
                let key = (node.old.clone(), node.next.clone());
                if let Some(&i) = self.index.get(&key) {
                    self.done[i].incoming.extend(node.incoming);
                } else {
                    let id = self.done.len();
                    stack.push(Node {
                        incoming: BTreeSet::from([id]),
                        new: node.next.clone(),
                        old: FSet::new(),
                        next: FSet::new(),
                    });
                    self.index.insert(key, id);
                    self.done.push(node);
                }
                return;
            };
            if node.old.contains(&eta) {
                continue;
            }
            match &eta {
                Formula::False => return,
                Formula::True => {}
                Formula::Atom(_) => {
                    if node.old.contains(&Formula::not(eta.clone())) {
                        return;
                    }
                }
                Formula::Not(inner) => {
                    debug_assert!(
                        matches!(**inner, Formula::Atom(_)),
                        "tableau input must be in NNF"
                    );
                    if node.old.contains(inner) {
                        return;
                    }
                }
                Formula::And(a, b) => {
                    node.add_new(a);
                    node.add_new(b);
                }
                Formula::Next(a) => {
                    node.next.insert((**a).clone());
                }
                Formula::Or(a, b) => {
                    let mut other = node.clone();
                    other.add_new(b);
                    other.old.insert(eta.clone());
                    stack.push(other);
                    node.add_new(a);
                }
                Formula::Until(a, b) => {
                    let mut other = node.clone();
                    other.add_new(b);
                    other.old.insert(eta.clone());
                    stack.push(other);
                    node.add_new(a);
                    node.next.insert(eta.clone());
                }
                Formula::Release(a, b) => {
                    let mut other = node.clone();
                    other.add_new(a);
                    other.add_new(b);
                    other.old.insert(eta.clone());
                    stack.push(other);
                    node.add_new(b);
                    node.next.insert(eta.clone());
                }
                Formula::Eventually(_) | Formula::Always(_) => {
                    unreachable!("tableau input must be in NNF")
                }
            }
            node.old.insert(eta);
        }
    }
}

fn node_guard(node: &Node) -> EdgeGuard {
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for f in &node.old {
        match f {
            Formula::Atom(p) => {
                pos.insert(p.clone());
            }
            Formula::Not(inner) => {
                if let Formula::Atom(p) = &**inner {
                    neg.insert(p.clone());
                }
            }
            _ => {}
        }
    }
    EdgeGuard::new(pos, neg)
}

/// Tableau (cover-set expansion) of an LTL formula into a generalized Büchi
/// automaton.
///
/// State 0 is a fresh initial state; every other state is a tableau node whose
/// literal constraints guard all edges entering it. There is one acceptance
/// set per `Until` subformula `a U b`: the nodes that either do not promise it
/// or already satisfy `b`.
pub fn tableau(f: &Formula) -> Gba {
    let nnf = to_nnf(f);
    let nodes = Expansion::run(&nnf);
    let n = nodes.len() + 1;
    let mut edges: Vec<Vec<(EdgeGuard, usize)>> = vec![Vec::new(); n];
    for (i, node) in nodes.iter().enumerate() {
        let guard = node_guard(node);
        for &m in &node.incoming {
            let src = if m == INIT { 0 } else { m + 1 };
            edges[src].push((guard.clone(), i + 1));
        }
    }
    for e in &mut edges {
        e.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        e.dedup();
    }
    let acceptance = nnf
        .subformulas()
        .into_iter()
        .filter_map(|u| match &u {
            Formula::Until(_, b) => Some(
                nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, nd)| !nd.old.contains(&u) || nd.old.contains(&**b))
                    .map(|(i, _)| i + 1)
                    .collect(),
            ),
            _ => None,
        })
        .collect();
    Gba {
        num_states: n,
        initial: vec![0],
        edges,
        acceptance,
    }
}

/// Counter construction turning `k` acceptance sets into a single one.
///
/// States are pairs `(s, level)` with `level ∈ 0..=k`; leaving `s` advances the
/// level past every consecutive set containing `s`, and level `k` (all sets
/// seen since the last reset) is accepting and resets on the next step. Only
/// pairs reachable from the initial states are kept.
pub fn degeneralize(g: &Gba) -> Nba {
    let k = g.acceptance.len();
    let in_set: Vec<Vec<bool>> = g
        .acceptance
        .iter()
        .map(|set| (0..g.num_states).map(|s| set.contains(&s)).collect())
        .collect();
    let advance = |s: usize, level: usize| -> usize {
        let mut j = if level == k { 0 } else { level };
        while j < k && in_set[j][s] {
            j += 1;
        }
        j
    };

    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut initial = Vec::new();
    for &s in &g.initial {
        let key = (s, 0);
        if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(key) {
            e.insert(pairs.len());
            initial.push(pairs.len());
            pairs.push(key);
            queue.push_back(key);
        }
    }
    let mut edges: Vec<Vec<(EdgeGuard, usize)>> = Vec::new();
    while let Some((s, level)) = queue.pop_front() {
        let mut out = Vec::new();
        let j = advance(s, level);
        for (guard, t) in &g.edges[s] {
            let key = (*t, j);
            let id = *ids.entry(key).or_insert_with(|| {
                pairs.push(key);
                queue.push_back(key);
                pairs.len() - 1
            });
            out.push((guard.clone(), id));
        }
        edges.push(out);
    }
    let accepting = pairs.iter().map(|&(_, level)| level == k).collect();
    Nba {
        num_states: pairs.len(),
        initial,
        edges,
        accepting,
    }
}

/// Removes states that cannot lie on an accepting run and renumbers the rest
/// in breadth-first order from the initial states.
fn prune(a: &Nba) -> Nba {
    let n = a.num_states;
    let succ = |u: usize| a.edges[u].iter().map(|(_, t)| *t).collect::<Vec<_>>();
    let cyclic = cyclic_mask(n, succ);
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for u in 0..n {
        for (_, t) in &a.edges[u] {
            pred[*t].push(u);
        }
    }
    let mut live = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| a.accepting[v] && cyclic[v]).collect();
    for &v in &queue {
        live[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &u in &pred[v] {
            if !live[u] {
                live[u] = true;
                queue.push_back(u);
            }
        }
    }

    let mut new_id = vec![usize::MAX; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for &q in &a.initial {
        if live[q] && new_id[q] == usize::MAX {
            new_id[q] = order.len();
            order.push(q);
            queue.push_back(q);
        }
    }
    while let Some(u) = queue.pop_front() {
        for (_, t) in &a.edges[u] {
            if live[*t] && new_id[*t] == usize::MAX {
                new_id[*t] = order.len();
                order.push(*t);
                queue.push_back(*t);
            }
        }
    }
    if order.is_empty() {
        return Nba {
            num_states: 1,
            initial: vec![0],
            edges: vec![Vec::new()],
            accepting: vec![false],
        };
    }
    let edges = order
        .iter()
        .map(|&u| {
            let mut out: Vec<(EdgeGuard, usize)> = a.edges[u]
                .iter()
                .filter(|(_, t)| new_id[*t] != usize::MAX)
                .map(|(g, t)| (g.clone(), new_id[*t]))
                .collect();
            out.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
            out.dedup();
            out
        })
        .collect();
    let initial = a
        .initial
        .iter()
        .filter(|q| new_id[**q] != usize::MAX)
        .map(|q| new_id[*q])
        .collect();
    Nba {
        num_states: order.len(),
        initial,
        edges,
        accepting: order.iter().map(|&u| a.accepting[u]).collect(),
    }
}

/// Translates an LTL formula into an NBA accepting exactly its models.
pub fn translate(f: &Formula) -> Nba {
    prune(&degeneralize(&tableau(f)))
}
