//! Independent checks for plans: security against an observer, formula
//! satisfaction, and exhaustive bounded search for the best secure plan.

mod brute;

use std::collections::VecDeque;

use crate::graph::{cyclic_mask, WeightedGraph};
use crate::ltl::{eval_lasso, Formula};
use crate::model::{Alpha, Cost, Plan, Wts};

pub use brute::{brute_force_plan, naive_plan, BruteForce, OracleError};

/// Outcome of a security check; `witness` is present exactly when the plan is
/// secure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecurityVerdict {
    pub secure: bool,
    pub witness: Option<Plan>,
}

/// Decides whether some path from a non-secret initial state produces the
/// same infinite output sequence as `plan`.
///
/// Synchronizes the system (started in non-secret initial states) with the
/// positions of the plan's output lasso; an infinite synchronized run exists
/// iff a cycle is reachable, and cycles can only sit on loop positions.
pub fn is_secure(t: &Wts, plan: &Plan) -> SecurityVerdict {
    let word: Vec<usize> = plan.prefix.iter().chain(&plan.cycle).copied().collect();
    let npos = word.len();
    let loop_start = plan.prefix.len();
    let next_pos = |p: usize| if p + 1 == npos { loop_start } else { p + 1 };
    let id = |q: usize, p: usize| q * npos + p;
    let n = t.len() * npos;
    let succ = |v: usize| -> Vec<usize> {
        let (q, p) = (v / npos, v % npos);
        if t.output(q) != t.output(word[p]) {
            return Vec::new();
        }
        let np = next_pos(p);
        let mut out: Vec<usize> = t
            .out_edges(q)
            .iter()
            .filter(|(r, _)| t.output(*r) == t.output(word[np]))
            .map(|(r, _)| id(*r, np))
            .collect();
        // The plan's own state goes first so that a plan which is its own
        // witness is reported as such.
        out.sort_by_key(|&v| v / npos != word[np]);
        out
    };

    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    let mut starts = t.initial().to_vec();
    starts.sort_by_key(|&q| q != word[0]);
    for q in starts {
        if !t.is_secret(q) && t.output(q) == t.output(word[0]) {
            let v = id(q, 0);
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for v in succ(u) {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    let cyclic = cyclic_mask(n, |u| if seen[u] { succ(u) } else { Vec::new() });
    let Some(&anchor) = order.iter().find(|&&v| cyclic[v]) else {
        return SecurityVerdict {
            secure: false,
            witness: None,
        };
    };

    let mut lead = Vec::new();
    let mut v = anchor;
    while parent[v] != usize::MAX {
        v = parent[v];
        lead.push(v / npos);
    }
    lead.reverse();

    // Shortest return to the anchor.
    let mut back = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut closing = None;
    for v in succ(anchor) {
        if v == anchor {
            closing = Some(anchor);
            break;
        }
        if back[v] == usize::MAX {
            back[v] = anchor;
            queue.push_back(v);
        }
    }
    while closing.is_none() {
        let u = queue.pop_front().expect("anchor lies on a cycle");
        for v in succ(u) {
            if v == anchor {
                closing = Some(u);
                break;
            }
            if back[v] == usize::MAX {
                back[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut cycle = Vec::new();
    let mut v = closing.unwrap();
    while v != anchor {
        cycle.push(v / npos);
        v = back[v];
    }
    cycle.push(anchor / npos);
    cycle.reverse();
    SecurityVerdict {
        secure: true,
        witness: Some(Plan::new(lead, cycle)),
    }
}

/// Whether the plan's trace satisfies `f`.
pub fn satisfies(t: &Wts, plan: &Plan, f: &Formula) -> bool {
    eval_lasso(f, &plan.trace(t))
}

/// Checks the claims a planner makes about a plan and its witness: the
/// witness starts outside the secret set, is a valid path, and produces the
/// same infinite output sequence.
pub fn witness_certifies(t: &Wts, plan: &Plan, witness: &Plan) -> bool {
    if !t.is_initial(witness.start()) || t.is_secret(witness.start()) {
        return false;
    }
    if witness.validate(t).is_err() {
        return false;
    }
    let horizon =
        plan.prefix.len().max(witness.prefix.len()) + 2 * plan.cycle.len() * witness.cycle.len();
    (0..horizon).all(|i| t.output(plan.state_at(i)) == t.output(witness.state_at(i)))
}

/// Weighted cost of a plan, if it is a valid path.
pub fn plan_cost(t: &Wts, plan: &Plan, alpha: Alpha) -> Option<Cost> {
    plan.weighted_cost(t, alpha).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;
    use crate::model::factory;

    fn plan(t: &Wts, prefix: &[&str], cycle: &[&str]) -> Plan {
        Plan::from_names(t, prefix, cycle).unwrap()
    }

    #[test]
    fn secure_plan_has_witness() {
        let t = factory();
        let p = plan(&t, &["A", "D"], &["F", "E"]);
        let v = is_secure(&t, &p);
        assert!(v.secure);
        let w = v.witness.unwrap();
        assert_eq!(w.prefix_names(&t), ["B", "D"]);
        assert_eq!(w.cycle_names(&t), ["F", "E"]);
        assert!(witness_certifies(&t, &p, &w));
    }

    #[test]
    fn shortcut_plan_is_insecure() {
        let t = factory();
        let v = is_secure(&t, &plan(&t, &["A", "C"], &["F", "E"]));
        assert_eq!(
            v,
            SecurityVerdict {
                secure: false,
                witness: None
            }
        );
    }

    #[test]
    fn non_secret_start_is_its_own_witness() {
        let t = factory();
        let p = plan(&t, &["B", "D"], &["F", "E"]);
        let v = is_secure(&t, &p);
        assert!(v.secure);
        assert!(v.witness.unwrap().same_path(&p));
    }

    #[test]
    fn rotation_does_not_change_verdict() {
        let t = factory();
        let a = plan(&t, &["A", "D"], &["F", "E"]);
        let b = plan(&t, &["A", "D", "F"], &["E", "F"]);
        assert_eq!(is_secure(&t, &a).secure, is_secure(&t, &b).secure);
    }

    #[test]
    fn satisfaction() {
        let t = factory();
        let f = parse("GF P1 && GF P2").unwrap();
        assert!(satisfies(&t, &plan(&t, &["A", "D"], &["F", "E"]), &f));
        assert!(!satisfies(&t, &plan(&t, &["A"], &["D", "B"]), &f));
        assert!(satisfies(
            &t,
            &plan(&t, &["A"], &["D", "B"]),
            &parse("true").unwrap()
        ));
    }

    #[test]
    fn witness_check_rejects_mismatch() {
        let t = factory();
        let p = plan(&t, &["A", "D"], &["F", "E"]);
        assert!(witness_certifies(
            &t,
            &p,
            &plan(&t, &["B", "D"], &["F", "D"])
        ));
        assert!(!witness_certifies(
            &t,
            &p,
            &plan(&t, &["B", "D"], &["F", "C"])
        ));
        assert!(!witness_certifies(
            &t,
            &p,
            &plan(&t, &["A", "D"], &["F", "E"])
        ));
    }
}
