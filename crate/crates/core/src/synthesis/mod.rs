//! Twin transition system (pairs of observation-equivalent runs) and its
//! product with the task automaton.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::buchi::Nba;
use crate::graph::{cyclic_states, WeightedGraph};
use crate::model::Wts;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("state {0:?} is not an initial state")]
    NotInitial(String),
}

/// Self-composition of a transition system that tracks two paths with equal
/// outputs.
///
/// The first component is the real path and carries the weight and label;
/// the second is an output-equivalent copy. Only pairs reachable from the
/// initial pairs are materialized.
#[derive(Debug, Clone)]
pub struct TwinWts<'a> {
    source: &'a Wts,
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    initial: Vec<usize>,
    succ: Vec<Vec<(usize, u64)>>,
}

impl WeightedGraph for TwinWts<'_> {
    fn node_count(&self) -> usize {
        self.pairs.len()
    }

    fn out_edges(&self, v: usize) -> &[(usize, u64)] {
        &self.succ[v]
    }
}

/// Builds the twin system: initial pairs are output-matching pairs of initial
/// states, and `(q1, q2) → (q1', q2')` whenever both components can move and
/// `H(q1') = H(q2')`.
pub fn build_twin(t: &Wts) -> TwinWts<'_> {
    let init = t
        .initial()
        .iter()
        .flat_map(|&a| t.initial().iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| t.output(a) == t.output(b));
    TwinWts::explore(t, init, false)
}

/// The twin restricted to its diagonal `(q, q)`: both components always
/// coincide, so planning over it ignores the security requirement.
pub fn build_diagonal_twin(t: &Wts) -> TwinWts<'_> {
    TwinWts::explore(t, t.initial().iter().map(|&q| (q, q)), true)
}

impl<'a> TwinWts<'a> {
    fn explore(t: &'a Wts, init: impl Iterator<Item = (usize, usize)>, diagonal: bool) -> Self {
        let mut twin = TwinWts {
            source: t,
            pairs: Vec::new(),
            index: HashMap::new(),
            initial: Vec::new(),
            succ: Vec::new(),
        };
        let mut queue = VecDeque::new();
        for p in init {
            if !twin.index.contains_key(&p) {
                let id = twin.intern(p, &mut queue);
                twin.initial.push(id);
            }
        }
        // Successors of each state grouped by output, so that matching second
        // components are found without scanning every pair.
        let by_output: Vec<HashMap<&str, Vec<usize>>> = (0..t.len())
            .map(|q| {
                let mut m: HashMap<&str, Vec<usize>> = HashMap::new();
                for &(v, _) in t.out_edges(q) {
                    m.entry(t.output(v)).or_default().push(v);
                }
                m
            })
            .collect();
        while let Some(x) = queue.pop_front() {
            let (q1, q2) = twin.pairs[x];
            let mut out = Vec::new();
            for &(n1, w) in t.out_edges(q1) {
                if diagonal {
                    out.push((twin.intern((n1, n1), &mut queue), w));
                    continue;
                }
                if let Some(matches) = by_output[q2].get(t.output(n1)) {
                    for &n2 in matches {
                        out.push((twin.intern((n1, n2), &mut queue), w));
                    }
                }
            }
            twin.succ[x] = out;
        }
        twin
    }

    fn intern(&mut self, p: (usize, usize), queue: &mut VecDeque<usize>) -> usize {
        if let Some(&id) = self.index.get(&p) {
            return id;
        }
        let id = self.pairs.len();
        self.pairs.push(p);
        self.index.insert(p, id);
        self.succ.push(Vec::new());
        queue.push_back(id);
        id
    }

    pub fn source(&self) -> &'a Wts {
        self.source
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, x: usize) -> (usize, usize) {
        self.pairs[x]
    }

    pub fn id(&self, pair: (usize, usize)) -> Option<usize> {
        self.index.get(&pair).copied()
    }

    /// Looks a pair up by state names.
    pub fn id_by_names(&self, a: &str, b: &str) -> Option<usize> {
        self.id((self.source.id(a)?, self.source.id(b)?))
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    /// Label of a pair: the label of its first component.
    pub fn label(&self, x: usize) -> &crate::ltl::Letter {
        self.source.label(self.pairs[x].0)
    }

    pub fn name(&self, x: usize) -> String {
        let (a, b) = self.pairs[x];
        format!("({},{})", self.source.name(a), self.source.name(b))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph twin {\n");
        for x in 0..self.len() {
            let style = if self.initial.contains(&x) {
                ", style=bold"
            } else {
                ""
            };
            let _ = writeln!(s, "  \"{}\" [shape=box{style}];", self.name(x));
        }
        for x in 0..self.len() {
            for &(y, w) in &self.succ[x] {
                let _ = writeln!(
                    s,
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    self.name(x),
                    self.name(y),
                    self.source.tick(w)
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Product of the twin system with the task automaton.
///
/// `((x, q), (x', q'))` is a transition iff `x → x'` in the twin and the
/// automaton moves `q → q'` on the label of `x`. Weights come from the twin.
#[derive(Debug, Clone)]
pub struct Product<'a> {
    twin: &'a TwinWts<'a>,
    nba: &'a Nba,
    states: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    initial: Vec<usize>,
    succ: Vec<Vec<(usize, u64)>>,
    off_diagonal: Vec<bool>,
}

impl WeightedGraph for Product<'_> {
    fn node_count(&self) -> usize {
        self.states.len()
    }

    fn out_edges(&self, v: usize) -> &[(usize, u64)] {
        &self.succ[v]
    }

    /// 1 when the target's copy differs from its real state, so that among
    /// equally cheap paths the one whose copy deviates least is preferred.
    fn tie_weight(&self, u: usize, i: usize) -> u64 {
        self.off_diagonal[self.succ[u][i].0] as u64
    }
}

/// Reachable fragment of the product from `X0 × Q0B`.
pub fn build_product<'a>(v: &'a TwinWts<'a>, b: &'a Nba) -> Product<'a> {
    let t = v.source();
    let mut p = Product {
        twin: v,
        nba: b,
        states: Vec::new(),
        index: HashMap::new(),
        initial: Vec::new(),
        succ: Vec::new(),
        off_diagonal: Vec::new(),
    };
    let mut queue = VecDeque::new();
    for &x in v.initial() {
        for &q in &b.initial {
            let key = (x, q);
            if !p.index.contains_key(&key) {
                let id = p.intern(key, &mut queue);
                p.initial.push(id);
            }
        }
    }
    // Automaton successors per (automaton state, system state), resolved once.
    let mut post: Vec<Option<Vec<usize>>> = vec![None; b.num_states * t.len()];
    while let Some(s) = queue.pop_front() {
        let (x, q) = p.states[s];
        let sys = v.pair(x).0;
        let slot = q * t.len() + sys;
        if post[slot].is_none() {
            post[slot] = Some(b.post(q, t.label(sys)));
        }
        let nexts = post[slot].clone().unwrap_or_default();
        let mut out = Vec::new();
        for &(y, w) in v.out_edges(x) {
            for &q2 in &nexts {
                out.push((p.intern((y, q2), &mut queue), w));
            }
        }
        p.succ[s] = out;
    }
    p.off_diagonal = p
        .states
        .iter()
        .map(|&(x, _)| {
            let (a, b) = v.pair(x);
            a != b
        })
        .collect();
    debug_assert!(p.within_size_bounds());
    p
}

impl<'a> Product<'a> {
    fn intern(&mut self, key: (usize, usize), queue: &mut VecDeque<usize>) -> usize {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.states.len();
        self.states.push(key);
        self.index.insert(key, id);
        self.succ.push(Vec::new());
        queue.push_back(id);
        id
    }

    pub fn twin(&self) -> &'a TwinWts<'a> {
        self.twin
    }

    pub fn nba(&self) -> &'a Nba {
        self.nba
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    /// `(twin state, automaton state)` of a product state.
    pub fn state(&self, s: usize) -> (usize, usize) {
        self.states[s]
    }

    pub fn id(&self, twin_state: usize, nba_state: usize) -> Option<usize> {
        self.index.get(&(twin_state, nba_state)).copied()
    }

    /// Underlying system state pair `(q, q')`.
    pub fn system_pair(&self, s: usize) -> (usize, usize) {
        self.twin.pair(self.states[s].0)
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.nba.is_accepting(self.states[s].1)
    }

    pub fn name(&self, s: usize) -> String {
        let (x, q) = self.states[s];
        format!("({},{})", self.twin.name(x), self.nba.state_name(q))
    }

    /// `|Q⊗| ≤ |X|·|QB|` and `|X| ≤ |Q|²`.
    pub fn within_size_bounds(&self) -> bool {
        let q = self.twin.source().len();
        self.twin.len() <= q * q
            && self.len() <= self.twin.len() * self.nba.num_states
            && self.len() <= q * q * self.nba.num_states
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph product {\n");
        for v in 0..self.len() {
            let shape = if self.is_accepting(v) {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(s, "  \"{}\" [shape={shape}];", self.name(v));
        }
        let t = self.twin.source();
        for v in 0..self.len() {
            for &(u, w) in &self.succ[v] {
                let _ = writeln!(
                    s,
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    self.name(v),
                    self.name(u),
                    t.tick(w)
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Initial product states whose real component starts at `q0` and whose copy
/// starts at a non-secret state.
pub fn initial_set(p: &Product<'_>, q0: usize, t: &Wts) -> Result<BTreeSet<usize>, SynthesisError> {
    if !t.is_initial(q0) {
        return Err(SynthesisError::NotInitial(t.name(q0).to_string()));
    }
    Ok(p.initial()
        .iter()
        .copied()
        .filter(|&s| {
            let (a, b) = p.system_pair(s);
            a == q0 && !t.is_secret(b)
        })
        .collect())
}

/// Product states with an accepting automaton component that lie on a cycle.
pub fn goal_set(p: &Product<'_>) -> BTreeSet<usize> {
    let cyclic = cyclic_states(p);
    (0..p.len())
        .filter(|&s| cyclic[s] && p.is_accepting(s))
        .collect()
}

/// Projection of a product path onto the real system path.
pub fn project(p: &Product<'_>, path: &[usize]) -> Vec<usize> {
    path.iter().map(|&s| p.system_pair(s).0).collect()
}

/// Projection onto the output-equivalent copy.
pub fn project_witness(p: &Product<'_>, path: &[usize]) -> Vec<usize> {
    path.iter().map(|&s| p.system_pair(s).1).collect()
}
