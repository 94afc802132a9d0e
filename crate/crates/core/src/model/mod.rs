//! Weighted transition systems with labels, observer outputs and secret
//! initial states, plus path, trace and observation utilities.

mod load;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{cyclic_states, reach_mask, WeightedGraph};
use crate::ltl::{LassoWord, Letter};

pub use load::{cost_to_json, parse_decimal, ModelDoc, StateDoc, TransitionDoc};

/// Exact nonnegative cost.
pub type Cost = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid model document at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("duplicate state {0:?}")]
    DuplicateState(String),
    #[error("invalid state name {0:?}")]
    InvalidName(String),
    #[error("unknown state {name:?} referenced at {path}")]
    UnknownState { path: String, name: String },
    #[error("weight ≤ 0 on transition {from} -> {to}")]
    NonPositiveWeight { from: String, to: String },
    #[error("weight {text:?} at {path} is not an exact decimal")]
    BadWeight { path: String, text: String },
    #[error("duplicate transition {from} -> {to}")]
    DuplicateTransition { from: String, to: String },
    #[error("secret state {0:?} is not an initial state")]
    SecretNotInitial(String),
    #[error("no transition {from} -> {to}")]
    MissingTransition { from: String, to: String },
    #[error("empty path")]
    EmptyPath,
    #[error("cost overflow")]
    Overflow,
}

/// Weighted transition system `(Q, Q0, →, w, AP, L)` extended with an output
/// map `H: Q → Y` and secret initial states `QS ⊆ Q0`.
///
/// States have dense ids in declaration order. Weights are stored as integer
/// ticks of `1/scale` so that graph searches run on integers while all costs
/// stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wts {
    names: Vec<String>,
    index: HashMap<String, usize>,
    initial: Vec<usize>,
    secret: Vec<usize>,
    succ: Vec<Vec<(usize, u64)>>,
    labels: Vec<Letter>,
    outputs: Vec<String>,
    scale: i64,
}

impl WeightedGraph for Wts {
    fn node_count(&self) -> usize {
        self.names.len()
    }

    fn out_edges(&self, v: usize) -> &[(usize, u64)] {
        &self.succ[v]
    }
}

impl Wts {
    pub fn builder() -> WtsBuilder {
        WtsBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn secret(&self) -> &[usize] {
        &self.secret
    }

    pub fn is_initial(&self, q: usize) -> bool {
        self.initial.binary_search(&q).is_ok()
    }

    pub fn is_secret(&self, q: usize) -> bool {
        self.secret.binary_search(&q).is_ok()
    }

    pub fn label(&self, q: usize) -> &Letter {
        &self.labels[q]
    }

    pub fn output(&self, q: usize) -> &str {
        &self.outputs[q]
    }

    /// The proposition set `AP`: every proposition used by some label.
    pub fn props(&self) -> BTreeSet<String> {
        self.labels.iter().flatten().cloned().collect()
    }

    /// Distinct output symbols `Y`.
    pub fn output_symbols(&self) -> BTreeSet<&str> {
        self.outputs.iter().map(String::as_str).collect()
    }

    /// Denominator of the tick unit: a weight of `t` ticks costs `t / scale`.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn tick(&self, ticks: u64) -> Cost {
        Cost::new(ticks as i64, self.scale)
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<Cost> {
        self.edge_weight(from, to).map(|t| self.tick(t))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, Cost)> + '_ {
        (0..self.len())
            .flat_map(move |u| self.succ[u].iter().map(move |&(v, w)| (u, v, self.tick(w))))
    }

    /// Sum of edge ticks along `path`, failing on a missing transition.
    pub fn path_ticks(&self, path: &[usize]) -> Result<u64, ModelError> {
        if path.is_empty() {
            return Err(ModelError::EmptyPath);
        }
        let mut total: u64 = 0;
        for pair in path.windows(2) {
            let w = self.edge_weight(pair[0], pair[1]).ok_or_else(|| {
                ModelError::MissingTransition {
                    from: self.name(pair[0]).to_string(),
                    to: self.name(pair[1]).to_string(),
                }
            })?;
            total = total.checked_add(w).ok_or(ModelError::Overflow)?;
        }
        Ok(total)
    }

    /// Ranks states by name, for lexicographic tie-breaking on name sequences.
    pub fn name_ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|a, b| self.names[*a].cmp(&self.names[*b]));
        let mut rank = vec![0; self.len()];
        for (r, q) in order.into_iter().enumerate() {
            rank[q] = r;
        }
        rank
    }

    /// A copy of this system without the transition `from → to`.
    pub fn without_transition(&self, from: usize, to: usize) -> Wts {
        let mut out = self.clone();
        out.succ[from].retain(|(v, _)| *v != to);
        out
    }

    /// Graphviz rendering; nodes show label and output, secret states are
    /// filled, initial states bold.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph wts {\n");
        for q in 0..self.len() {
            let props: Vec<&str> = self.labels[q].iter().map(String::as_str).collect();
            let mut style = Vec::new();
            if self.is_initial(q) {
                style.push("bold");
            }
            if self.is_secret(q) {
                style.push("filled");
            }
            let _ = writeln!(
                s,
                "  \"{}\" [label=\"{}\\n{{{}}}\\n{}\", style=\"{}\"];",
                self.name(q),
                self.name(q),
                props.join(","),
                self.output(q),
                style.join(",")
            );
        }
        for (u, v, w) in self.transitions() {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{w}\"];",
                self.name(u),
                self.name(v)
            );
        }
        s.push_str("}\n");
        s
    }
}

/// Incremental constructor enforcing the transition-system invariants.
#[derive(Debug, Clone, Default)]
pub struct WtsBuilder {
    states: Vec<(String, Letter, String)>,
    initial: Vec<String>,
    secret: Vec<String>,
    transitions: Vec<(String, String, Cost)>,
}

impl WtsBuilder {
    pub fn state<I, S>(mut self, name: &str, label: I, output: &str) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.add_state(name, label, output);
        self
    }

    pub fn add_state<I, S>(&mut self, name: &str, label: I, output: &str)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states.push((
            name.to_string(),
            label.into_iter().map(Into::into).collect(),
            output.to_string(),
        ));
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.initial.push(name.to_string());
        self
    }

    pub fn secret(mut self, name: &str) -> Self {
        self.secret.push(name.to_string());
        self
    }

    pub fn add_initial(&mut self, name: &str) {
        self.initial.push(name.to_string());
    }

    pub fn add_secret(&mut self, name: &str) {
        self.secret.push(name.to_string());
    }

    pub fn edge(mut self, from: &str, to: &str, weight: impl Into<Cost>) -> Self {
        self.add_edge(from, to, weight);
        self
    }

    pub fn add_edge(&mut self, from: &str, to: &str, weight: impl Into<Cost>) {
        self.transitions
            .push((from.to_string(), to.to_string(), weight.into()));
    }

    /// Adds `from → to` and `to → from` with the same weight.
    pub fn biedge(mut self, a: &str, b: &str, weight: impl Into<Cost>) -> Self {
        let w = weight.into();
        self.add_edge(a, b, w);
        if a != b {
            self.add_edge(b, a, w);
        }
        self
    }

    pub fn build(self) -> Result<Wts, ModelError> {
        let mut index = HashMap::new();
        let mut names = Vec::new();
        let mut labels = Vec::new();
        let mut outputs = Vec::new();
        for (name, label, output) in self.states {
            if name.is_empty() {
                return Err(ModelError::InvalidName(name));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(ModelError::DuplicateState(name));
            }
            names.push(name);
            labels.push(label);
            outputs.push(output);
        }
        let lookup = |name: &str, path: String| -> Result<usize, ModelError> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownState {
                    path,
                    name: name.to_string(),
                })
        };
        let mut initial = Vec::new();
        for (i, n) in self.initial.iter().enumerate() {
            initial.push(lookup(n, format!("initial[{i}]"))?);
        }
        initial.sort_unstable();
        initial.dedup();
        let mut secret = Vec::new();
        for (i, n) in self.secret.iter().enumerate() {
            let q = lookup(n, format!("secret[{i}]"))?;
            if initial.binary_search(&q).is_err() {
                return Err(ModelError::SecretNotInitial(n.clone()));
            }
            secret.push(q);
        }
        secret.sort_unstable();
        secret.dedup();

        let mut scale: i64 = 1;
        for (from, to, w) in &self.transitions {
            if *w <= Cost::zero() {
                return Err(ModelError::NonPositiveWeight {
                    from: from.clone(),
                    to: to.clone(),
                });
            }
            scale = scale.lcm(w.denom());
        }
        let mut succ: Vec<Vec<(usize, u64)>> = vec![Vec::new(); names.len()];
        for (i, (from, to, w)) in self.transitions.iter().enumerate() {
            let u = lookup(from, format!("transitions[{i}].from"))?;
            let v = lookup(to, format!("transitions[{i}].to"))?;
            if succ[u].iter().any(|(t, _)| *t == v) {
                return Err(ModelError::DuplicateTransition {
                    from: from.clone(),
                    to: to.clone(),
                });
            }
            let ticks = (*w * Cost::from_integer(scale)).to_integer();
            let ticks = u64::try_from(ticks).map_err(|_| ModelError::Overflow)?;
            succ[u].push((v, ticks));
        }
        for s in &mut succ {
            s.sort_unstable();
        }
        Ok(Wts {
            names,
            index,
            initial,
            secret,
            succ,
            labels,
            outputs,
            scale,
        })
    }
}

/// Cost of a finite path: the sum of its transition weights (zero for a
/// single state).
pub fn path_cost(t: &Wts, path: &[usize]) -> Result<Cost, ModelError> {
    Ok(t.tick(t.path_ticks(path)?))
}

/// Pointwise labels along a finite path.
pub fn trace(t: &Wts, path: &[usize]) -> Vec<Letter> {
    path.iter().map(|&q| t.label(q).clone()).collect()
}

/// Pointwise outputs along a finite path.
pub fn observation<'a>(t: &'a Wts, path: &[usize]) -> Vec<&'a str> {
    path.iter().map(|&q| t.output(q)).collect()
}

/// States reachable from `from`, including `from`.
pub fn reach<G: WeightedGraph + ?Sized>(g: &G, from: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mask = reach_mask(g, from.iter().copied());
    mask.iter()
        .enumerate()
        .filter(|(_, m)| **m)
        .map(|(i, _)| i)
        .collect()
}

/// States lying on some cycle of at least one edge.
pub fn cycle_states<G: WeightedGraph + ?Sized>(g: &G) -> BTreeSet<usize> {
    cyclic_states(g)
        .iter()
        .enumerate()
        .filter(|(_, c)| **c)
        .map(|(i, _)| i)
        .collect()
}

/// Weighting parameter `α ∈ [0, 1]` between transient and cyclic cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alpha(Cost);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("alpha must lie in [0, 1], got {0}")]
pub struct AlphaError(pub String);

impl Alpha {
    pub fn new(value: Cost) -> Result<Self, AlphaError> {
        if value < Cost::zero() || value > Cost::one() {
            return Err(AlphaError(value.to_string()));
        }
        Ok(Alpha(value))
    }

    pub fn half() -> Self {
        Alpha(Cost::new(1, 2))
    }

    pub fn value(self) -> Cost {
        self.0
    }

    /// `α · prefix + (1 − α) · cycle`.
    pub fn combine(self, prefix: Cost, cycle: Cost) -> Cost {
        self.0 * prefix + (Cost::one() - self.0) * cycle
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl Default for Alpha {
    fn default() -> Self {
        Alpha::half()
    }
}

impl std::str::FromStr for Alpha {
    type Err = AlphaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = parse_decimal(s.trim()).ok_or_else(|| AlphaError(s.to_string()))?;
        Alpha::new(v)
    }
}

/// An ultimately periodic path `prefix · cycle^ω`.
///
/// `prefix` holds the states visited before the first cycle state and may be
/// empty; `cycle` is nonempty and closes with the implicit edge from its last
/// state back to its first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plan {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Plan {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Self {
        assert!(!cycle.is_empty(), "plan cycle must be nonempty");
        Plan { prefix, cycle }
    }

    /// Looks states up by name.
    pub fn from_names(t: &Wts, prefix: &[&str], cycle: &[&str]) -> Result<Self, ModelError> {
        let ids = |ns: &[&str], field: &str| -> Result<Vec<usize>, ModelError> {
            ns.iter()
                .enumerate()
                .map(|(i, n)| {
                    t.id(n).ok_or_else(|| ModelError::UnknownState {
                        path: format!("{field}[{i}]"),
                        name: n.to_string(),
                    })
                })
                .collect()
        };
        let cycle = ids(cycle, "cycle")?;
        if cycle.is_empty() {
            return Err(ModelError::EmptyPath);
        }
        Ok(Plan {
            prefix: ids(prefix, "prefix")?,
            cycle,
        })
    }

    pub fn start(&self) -> usize {
        self.prefix.first().copied().unwrap_or(self.cycle[0])
    }

    pub fn prefix_names<'a>(&self, t: &'a Wts) -> Vec<&'a str> {
        self.prefix.iter().map(|&q| t.name(q)).collect()
    }

    pub fn cycle_names<'a>(&self, t: &'a Wts) -> Vec<&'a str> {
        self.cycle.iter().map(|&q| t.name(q)).collect()
    }

    /// Prefix followed by the cycle entry state.
    fn entry_path(&self) -> Vec<usize> {
        let mut p = self.prefix.clone();
        p.push(self.cycle[0]);
        p
    }

    /// Cycle including the closing state.
    fn closed_cycle(&self) -> Vec<usize> {
        let mut c = self.cycle.clone();
        c.push(self.cycle[0]);
        c
    }

    /// Checks every transition of the path, including the closing edge.
    pub fn validate(&self, t: &Wts) -> Result<(), ModelError> {
        t.path_ticks(&self.entry_path())?;
        t.path_ticks(&self.closed_cycle())?;
        Ok(())
    }

    /// Transient cost: the prefix plus the edge entering the cycle.
    pub fn prefix_cost(&self, t: &Wts) -> Result<Cost, ModelError> {
        path_cost(t, &self.entry_path())
    }

    /// Cyclic cost: one traversal of the cycle including the closing edge.
    pub fn cycle_cost(&self, t: &Wts) -> Result<Cost, ModelError> {
        path_cost(t, &self.closed_cycle())
    }

    pub fn weighted_cost(&self, t: &Wts, alpha: Alpha) -> Result<Cost, ModelError> {
        Ok(alpha.combine(self.prefix_cost(t)?, self.cycle_cost(t)?))
    }

    /// Labels along the plan as a lasso word.
    pub fn trace(&self, t: &Wts) -> LassoWord {
        LassoWord::new(trace(t, &self.prefix), trace(t, &self.cycle))
    }

    /// Outputs along the plan: `(prefix outputs, cycle outputs)`.
    pub fn observation<'a>(&self, t: &'a Wts) -> (Vec<&'a str>, Vec<&'a str>) {
        (observation(t, &self.prefix), observation(t, &self.cycle))
    }

    /// The `i`-th state of the infinite path.
    pub fn state_at(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The minimum-cost decomposition of the same infinite path: the cycle is
    /// reduced to its primitive root and the prefix is shortened as far as
    /// it repeats the tail of the cycle.
    pub fn canonical(&self) -> Plan {
        let mut cycle = primitive_root(&self.cycle).to_vec();
        let mut prefix = self.prefix.clone();
        while let Some(&last) = prefix.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        Plan { prefix, cycle }
    }

    /// Whether both plans denote the same infinite state sequence.
    pub fn same_path(&self, other: &Plan) -> bool {
        self.canonical() == other.canonical()
    }
}

fn primitive_root(c: &[usize]) -> &[usize] {
    let n = c.len();
    for d in 1..n {
        if n % d == 0 && (d..n).all(|i| c[i] == c[i - d]) {
            return &c[..d];
        }
    }
    c
}

/// The ranking key used to break ties between equal-cost plans:
/// weighted cost, then prefix length, then cycle length, then the state-name
/// sequences of prefix and cycle.
pub fn plan_key(
    t: &Wts,
    plan: &Plan,
    cost: Cost,
) -> (Cost, usize, usize, Vec<String>, Vec<String>) {
    (
        cost,
        plan.prefix.len(),
        plan.cycle.len(),
        plan.prefix_names(t).into_iter().map(String::from).collect(),
        plan.cycle_names(t).into_iter().map(String::from).collect(),
    )
}

/// The example system of the factory/warehouse delivery scenario.
pub fn factory() -> Wts {
    Wts::builder()
        .state("A", Vec::<String>::new(), "Sand")
        .state("B", Vec::<String>::new(), "Sand")
        .state("C", Vec::<String>::new(), "Sand")
        .state("D", Vec::<String>::new(), "Grass")
        .state("E", ["P2"], "Grass")
        .state("F", ["P1"], "Sand")
        .initial("A")
        .initial("B")
        .secret("A")
        .biedge("A", "C", 1)
        .biedge("A", "D", 3)
        .biedge("B", "D", 2)
        .biedge("C", "F", 1)
        .biedge("D", "F", 1)
        .biedge("F", "E", 1)
        .build()
        .expect("factory model is valid")
}
