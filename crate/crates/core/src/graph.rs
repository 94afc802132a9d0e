//! Graph primitives shared by the transition-system, twin and product layers.

use std::collections::VecDeque;

use petgraph::algo::kosaraju_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// A finite weighted digraph with dense `usize` node ids.
///
/// Weights are integer ticks; see [`crate::model::Wts::tick`] for the unit.
pub trait WeightedGraph {
    fn node_count(&self) -> usize;
    fn out_edges(&self, v: usize) -> &[(usize, u64)];

    /// Secondary weight of the `i`-th out-edge of `u`, used only to break ties
    /// between paths of equal weight.
    fn tie_weight(&self, _u: usize, _i: usize) -> u64 {
        0
    }

    fn edge_weight(&self, u: usize, v: usize) -> Option<u64> {
        self.out_edges(u)
            .iter()
            .find(|(t, _)| *t == v)
            .map(|(_, w)| *w)
    }

    fn edge_count(&self) -> usize {
        (0..self.node_count())
            .map(|v| self.out_edges(v).len())
            .sum()
    }
}

/// Plain adjacency-list graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdjGraph {
    pub succ: Vec<Vec<(usize, u64)>>,
}

impl AdjGraph {
    pub fn new(n: usize) -> Self {
        AdjGraph {
            succ: vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: u64) {
        self.succ[u].push((v, w));
    }
}

impl WeightedGraph for AdjGraph {
    fn node_count(&self) -> usize {
        self.succ.len()
    }

    fn out_edges(&self, v: usize) -> &[(usize, u64)] {
        &self.succ[v]
    }
}

/// States reachable from `from` (including `from` itself), as a membership mask.
pub fn reach_mask<G: WeightedGraph + ?Sized>(
    g: &G,
    from: impl IntoIterator<Item = usize>,
) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    for s in from {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &(v, _) in g.out_edges(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Marks every node that lies on a cycle with at least one edge.
///
/// A node is cyclic iff its strongly connected component has two or more
/// members, or it carries a self-loop.
pub fn cyclic_mask(n: usize, succ: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut g: DiGraph<(), (), u32> = DiGraph::with_capacity(n, n);
    for _ in 0..n {
        g.add_node(());
    }
    let mut self_loop = vec![false; n];
    for u in 0..n {
        for v in succ(u) {
            if u == v {
                self_loop[u] = true;
            }
            g.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
        }
    }
    let mut cyclic = vec![false; n];
    for comp in kosaraju_scc(&g) {
        if comp.len() > 1 {
            for v in comp {
                cyclic[v.index()] = true;
            }
        } else {
            let v = comp[0].index();
            cyclic[v] = self_loop[v];
        }
    }
    cyclic
}

/// Cyclic nodes of a weighted graph.
pub fn cyclic_states<G: WeightedGraph + ?Sized>(g: &G) -> Vec<bool> {
    cyclic_mask(g.node_count(), |u| {
        g.out_edges(u).iter().map(|(v, _)| *v).collect()
    })
}

/// Whether some node reachable from `init` lies on a cycle that passes through
/// an accepting node.
pub fn has_accepting_lasso(
    n: usize,
    init: &[usize],
    succ: impl Fn(usize) -> Vec<usize>,
    accepting: impl Fn(usize) -> bool,
) -> bool {
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    for &s in init {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for v in succ(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    let restricted = |u: usize| -> Vec<usize> {
        if seen[u] {
            succ(u).into_iter().filter(|v| seen[*v]).collect()
        } else {
            Vec::new()
        }
    };
    let cyclic = cyclic_mask(n, restricted);
    (0..n).any(|v| seen[v] && cyclic[v] && accepting(v))
}
