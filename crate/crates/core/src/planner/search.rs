//! Shortest paths and cycles on weighted graphs with positive integer weights.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::WeightedGraph;

/// Single-source shortest paths. Among equal-cost paths the one with the
/// smaller tie weight wins, then the one with fewer edges, then the one
/// settled first; the result is deterministic.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub dist: Vec<Option<u64>>,
    tie: Vec<(u64, usize)>,
    pred: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl ShortestPaths {
    /// Runs Dijkstra from `sources`, each with an initial distance.
    pub fn from_sources<G: WeightedGraph + ?Sized>(g: &G, sources: &[(usize, u64)]) -> Self {
        Self::bounded(g, sources, u64::MAX)
    }

    /// Like [`ShortestPaths::from_sources`] but stops settling once distances
    /// exceed `limit`.
    pub fn bounded<G: WeightedGraph + ?Sized>(g: &G, sources: &[(usize, u64)], limit: u64) -> Self {
        Self::run(g, sources, limit, None)
    }

    /// Stops as soon as `target` is settled; distances of nodes settled by
    /// then are exact, all others are reported unreachable.
    pub fn until<G: WeightedGraph + ?Sized>(
        g: &G,
        sources: &[(usize, u64)],
        limit: u64,
        target: usize,
    ) -> Self {
        Self::run(g, sources, limit, Some(target))
    }

    fn run<G: WeightedGraph + ?Sized>(
        g: &G,
        sources: &[(usize, u64)],
        limit: u64,
        target: Option<usize>,
    ) -> Self {
        let n = g.node_count();
        let mut dist: Vec<Option<u64>> = vec![None; n];
        let mut tie = vec![(u64::MAX, usize::MAX); n];
        let mut pred = vec![NONE; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        for &(s, d) in sources {
            if dist[s].is_none_or(|old| (d, (0, 0)) < (old, tie[s])) {
                dist[s] = Some(d);
                tie[s] = (0, 0);
                pred[s] = NONE;
                heap.push(Reverse((d, (0u64, 0usize), s)));
            }
        }
        while let Some(Reverse((d, tb, u))) = heap.pop() {
            if done[u] || (Some(d), tb) != (dist[u], tie[u]) {
                continue;
            }
            if d > limit {
                break;
            }
            done[u] = true;
            if Some(u) == target {
                break;
            }
            for (i, &(v, w)) in g.out_edges(u).iter().enumerate() {
                let nd = d + w;
                let ntb = (tb.0 + g.tie_weight(u, i), tb.1 + 1);
                let better = match dist[v] {
                    None => true,
                    Some(old) => (nd, ntb) < (old, tie[v]),
                };
                if !done[v] && better {
                    dist[v] = Some(nd);
                    tie[v] = ntb;
                    pred[v] = u;
                    heap.push(Reverse((nd, ntb, v)));
                }
            }
        }
        for v in 0..n {
            if !done[v] {
                dist[v] = None;
            }
        }
        ShortestPaths { dist, tie, pred }
    }

    /// Path from a source to `v`, both ends included.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        self.dist[v]?;
        let mut path = vec![v];
        let mut u = v;
        while self.pred[u] != NONE {
            u = self.pred[u];
            path.push(u);
        }
        path.reverse();
        Some(path)
    }

    pub fn hops(&self, v: usize) -> Option<usize> {
        self.dist[v].map(|_| self.tie[v].1)
    }
}

/// Minimum-weight path from `src` to `dst`; `src == dst` gives the trivial
/// path of cost 0.
pub fn shortest_path<G: WeightedGraph + ?Sized>(
    g: &G,
    src: usize,
    dst: usize,
) -> Option<(Vec<usize>, u64)> {
    let sp = ShortestPaths::from_sources(g, &[(src, 0)]);
    Some((sp.path_to(dst)?, sp.dist[dst]?))
}

/// Minimum-weight cycle of at least one edge through `q`, returned as
/// `q, …, last` with the closing edge `last → q` implicit.
pub fn shortest_cycle<G: WeightedGraph + ?Sized>(g: &G, q: usize) -> Option<(Vec<usize>, u64)> {
    shortest_cycle_within(g, q, u64::MAX)
}

/// [`shortest_cycle`] restricted to cycles of weight at most `limit`.
pub fn shortest_cycle_within<G: WeightedGraph + ?Sized>(
    g: &G,
    q: usize,
    limit: u64,
) -> Option<(Vec<usize>, u64)> {
    if let Some(w) = g.edge_weight(q, q) {
        // Every other cycle through q has at least as many edges; a cheaper
        // one is still possible, so fall through unless nothing beats it.
        let other = cycle_via_successors(g, q, limit.min(w));
        return match other {
            Some((c, cost)) if cost < w => Some((c, cost)),
            _ if w <= limit => Some((vec![q], w)),
            _ => None,
        };
    }
    cycle_via_successors(g, q, limit)
}

fn cycle_via_successors<G: WeightedGraph + ?Sized>(
    g: &G,
    q: usize,
    limit: u64,
) -> Option<(Vec<usize>, u64)> {
    let sources: Vec<(usize, u64)> = g
        .out_edges(q)
        .iter()
        .filter(|(v, _)| *v != q)
        .map(|&(v, w)| (v, w))
        .collect();
    if sources.is_empty() {
        return None;
    }
    // Distances to q from the successors, measured on a graph where q has no
    // out-edges so every path stops on its first return.
    let blocked = Blocked { g, q };
    let sp = ShortestPaths::until(&blocked, &sources, limit, q);
    let cost = sp.dist[q]?;
    let mut path = sp.path_to(q)?;
    path.pop();
    path.insert(0, q);
    Some((path, cost))
}

struct Blocked<'a, G: ?Sized> {
    g: &'a G,
    q: usize,
}

impl<G: WeightedGraph + ?Sized> WeightedGraph for Blocked<'_, G> {
    fn node_count(&self) -> usize {
        self.g.node_count()
    }

    fn out_edges(&self, v: usize) -> &[(usize, u64)] {
        if v == self.q {
            &[]
        } else {
            self.g.out_edges(v)
        }
    }

    fn tie_weight(&self, u: usize, i: usize) -> u64 {
        self.g.tie_weight(u, i)
    }
}

/// Bellman-Ford distances, used to cross-check Dijkstra.
pub fn bellman_ford<G: WeightedGraph + ?Sized>(g: &G, src: usize) -> Vec<Option<u64>> {
    let n = g.node_count();
    let mut dist = vec![None; n];
    dist[src] = Some(0u64);
    for _ in 0..n {
        let mut changed = false;
        for u in 0..n {
            let Some(du) = dist[u] else { continue };
            for &(v, w) in g.out_edges(u) {
                if dist[v].is_none_or(|dv| du + w < dv) {
                    dist[v] = Some(du + w);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}
