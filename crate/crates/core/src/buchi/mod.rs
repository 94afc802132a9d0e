//! Büchi automata over proposition sets, LTL translation and lasso acceptance.

mod tableau;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::graph::has_accepting_lasso;
use crate::ltl::{LassoWord, Letter};

pub use tableau::{degeneralize, tableau, translate};

/// Conjunction of literals guarding an automaton edge.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeGuard {
    pub positive: BTreeSet<String>,
    pub negative: BTreeSet<String>,
}

impl EdgeGuard {
    pub fn top() -> Self {
        EdgeGuard::default()
    }

    /// Panics if a proposition is both required and forbidden.
    pub fn new(positive: BTreeSet<String>, negative: BTreeSet<String>) -> Self {
        assert!(
            positive.is_disjoint(&negative),
            "guard requires and forbids the same proposition"
        );
        EdgeGuard { positive, negative }
    }

    pub fn matches(&self, letter: &Letter) -> bool {
        self.positive.iter().all(|p| letter.contains(p))
            && self.negative.iter().all(|p| !letter.contains(p))
    }

    pub fn is_top(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }
}

impl std::fmt::Display for EdgeGuard {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_top() {
            return write!(f, "true");
        }
        let lits: Vec<String> = self
            .positive
            .iter()
            .cloned()
            .chain(self.negative.iter().map(|p| format!("!{p}")))
            .collect();
        write!(f, "{}", lits.join(" & "))
    }
}

/// Generalized Büchi automaton: a run is accepting when it visits every
/// acceptance set infinitely often. An empty list accepts every infinite run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gba {
    pub num_states: usize,
    pub initial: Vec<usize>,
    pub edges: Vec<Vec<(EdgeGuard, usize)>>,
    pub acceptance: Vec<BTreeSet<usize>>,
}

/// Nondeterministic Büchi automaton with edge guards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nba {
    pub num_states: usize,
    pub initial: Vec<usize>,
    pub edges: Vec<Vec<(EdgeGuard, usize)>>,
    pub accepting: Vec<bool>,
}

impl Nba {
    pub fn state_name(&self, q: usize) -> String {
        format!("q{q}")
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> BTreeSet<usize> {
        (0..self.num_states)
            .filter(|&q| self.accepting[q])
            .collect()
    }

    /// Successors of `q` on `letter`, deduplicated and sorted.
    pub fn post(&self, q: usize, letter: &Letter) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges[q]
            .iter()
            .filter(|(g, _)| g.matches(letter))
            .map(|(_, t)| *t)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn transition_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Graphviz rendering; accepting states are double circles.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph nba {\n  rankdir=LR;\n");
        for q in 0..self.num_states {
            let shape = if self.accepting[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(s, "  \"{}\" [shape={shape}];", self.state_name(q));
        }
        for (i, q) in self.initial.iter().enumerate() {
            let _ = writeln!(s, "  \"init{i}\" [shape=point];");
            let _ = writeln!(s, "  \"init{i}\" -> \"{}\";", self.state_name(*q));
        }
        for q in 0..self.num_states {
            for (g, t) in &self.edges[q] {
                let _ = writeln!(
                    s,
                    "  \"{}\" -> \"{}\" [label=\"{g}\"];",
                    self.state_name(q),
                    self.state_name(*t)
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Decides whether `a` accepts `prefix · loop^ω`.
///
/// Builds the synchronous product of the automaton with the word's position
/// graph and looks for a reachable cycle through an accepting state. Product
/// cycles can only live on loop positions.
pub fn accepts_lasso(a: &Nba, w: &LassoWord) -> bool {
    let npos = w.positions();
    let id = |q: usize, pos: usize| q * npos + pos;
    let init: Vec<usize> = a.initial.iter().map(|&q| id(q, 0)).collect();
    let succ = |v: usize| -> Vec<usize> {
        let (q, pos) = (v / npos, v % npos);
        let next = w.succ(pos);
        a.post(q, w.letter(pos))
            .into_iter()
            .map(|t| id(t, next))
            .collect()
    };
    has_accepting_lasso(a.num_states * npos, &init, succ, |v| a.accepting[v / npos])
}
