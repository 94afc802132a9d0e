//! Optimal secure plan synthesis over the twin/automaton product.

mod search;

use rayon::prelude::*;
use thiserror::Error;

use crate::buchi::translate;
use crate::graph::reach_mask;
use crate::ltl::Formula;
use crate::model::{plan_key, Alpha, Cost, Plan, Wts};
use crate::synthesis::{
    build_diagonal_twin, build_product, build_twin, goal_set, initial_set, Product,
};

pub use search::{
    bellman_ford, shortest_cycle, shortest_cycle_within, shortest_path, ShortestPaths,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("unknown initial state {0:?}")]
    UnknownState(String),
    #[error("state {0:?} is not an initial state")]
    NotInitial(String),
}

/// Why no plan exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasible {
    /// No non-secret initial state shares the first output with the start.
    NoInitialPair,
    /// No accepting product cycle is reachable from the start pairs.
    NoReachableGoal,
}

impl Infeasible {
    pub fn as_str(self) -> &'static str {
        match self {
            Infeasible::NoInitialPair => "no-initial-pair",
            Infeasible::NoReachableGoal => "no-reachable-goal",
        }
    }
}

/// `α · prefix + (1 − α) · cycle`, or `None` for `α ∉ [0, 1]`.
pub fn plan_cost(prefix: Cost, cycle: Cost, alpha: Cost) -> Option<Cost> {
    Some(Alpha::new(alpha).ok()?.combine(prefix, cycle))
}

/// Prefix, cycle and weighted cost of a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanCost {
    pub prefix: Cost,
    pub cycle: Cost,
    pub weighted: Cost,
}

/// A product state by components: real state, copy state, automaton state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProductState {
    pub real: usize,
    pub copy: usize,
    pub nba: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanResult {
    pub initial: usize,
    /// The plan in its minimum-cost prefix/cycle decomposition.
    pub plan: Plan,
    /// A path from a non-secret initial state with the same outputs.
    pub witness: Plan,
    /// The product lasso the plan was projected from.
    pub product_prefix: Vec<ProductState>,
    pub product_cycle: Vec<ProductState>,
    pub cost: PlanCost,
    pub alpha: Alpha,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(Box<PlanResult>),
    Infeasible(Infeasible),
}

impl Outcome {
    pub fn found(&self) -> Option<&PlanResult> {
        match self {
            Outcome::Found(r) => Some(r),
            Outcome::Infeasible(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanOptions {
    pub alpha: Alpha,
    /// When false, the copy component is pinned to the real one, which
    /// reduces the search to plain optimal planning.
    pub secure: bool,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            alpha: Alpha::half(),
            secure: true,
        }
    }
}

/// Optimal secure plan from `q0` for `f`.
pub fn plan(t: &Wts, f: &Formula, q0: usize, alpha: Alpha) -> Result<Outcome, PlanError> {
    plan_with(
        t,
        f,
        q0,
        &PlanOptions {
            alpha,
            secure: true,
        },
    )
}

pub fn plan_with(
    t: &Wts,
    f: &Formula,
    q0: usize,
    opts: &PlanOptions,
) -> Result<Outcome, PlanError> {
    if q0 >= t.len() {
        return Err(PlanError::UnknownState(q0.to_string()));
    }
    if !t.is_initial(q0) {
        return Err(PlanError::NotInitial(t.name(q0).to_string()));
    }
    let nba = translate(f);
    let twin = if opts.secure {
        build_twin(t)
    } else {
        build_diagonal_twin(t)
    };
    let product = build_product(&twin, &nba);
    assert!(
        product.within_size_bounds(),
        "product exceeds |Q|^2 * |QB| states"
    );

    let starts: Vec<usize> = if opts.secure {
        initial_set(&product, q0, t)
            .map_err(|_| PlanError::NotInitial(t.name(q0).to_string()))?
            .into_iter()
            .collect()
    } else {
        product
            .initial()
            .iter()
            .copied()
            .filter(|&s| product.system_pair(s).0 == q0)
            .collect()
    };
    if starts.is_empty() {
        return Ok(Outcome::Infeasible(Infeasible::NoInitialPair));
    }
    let reach = reach_mask(&product, starts.iter().copied());
    let goals: Vec<usize> = goal_set(&product)
        .into_iter()
        .filter(|&g| reach[g])
        .collect();
    if goals.is_empty() {
        return Ok(Outcome::Infeasible(Infeasible::NoReachableGoal));
    }

    let best = Sweep::new(t, &product, opts.alpha).run(&starts, &goals);
    let (prefix, cycle) = best.expect("a reachable goal yields a candidate");
    Ok(Outcome::Found(Box::new(assemble(
        t, &product, &prefix, &cycle, opts.alpha,
    ))))
}

/// Plan ranking key, then how often the copy leaves the real path, then the
/// witness's own cost.
type Key = ((Cost, usize, usize, Vec<String>, Vec<String>), usize, Cost);

/// The double loop over start states and reachable goals.
struct Sweep<'a> {
    t: &'a Wts,
    product: &'a Product<'a>,
    alpha: Alpha,
}

impl<'a> Sweep<'a> {
    fn new(t: &'a Wts, product: &'a Product<'a>, alpha: Alpha) -> Self {
        Sweep { t, product, alpha }
    }

    fn run(&self, starts: &[usize], goals: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
        // Cycles do not depend on the start, so each goal is searched once;
        // the searches are independent and run on the global pool.
        let cycles: Vec<Option<(Vec<usize>, u64)>> = goals
            .par_iter()
            .map(|&g| shortest_cycle(self.product, g))
            .collect();
        let mut best: Option<(Key, Vec<usize>, Vec<usize>)> = None;
        for &qi in starts {
            let sp = ShortestPaths::from_sources(self.product, &[(qi, 0)]);
            for (&g, cyc) in goals.iter().zip(&cycles) {
                let (Some(path), Some((cycle, _))) = (sp.path_to(g), cyc) else {
                    continue;
                };
                let prefix = path[..path.len() - 1].to_vec();
                let key = self.key(&prefix, cycle);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, prefix, cycle.clone()));
                }
            }
        }
        best.map(|(_, p, c)| (p, c))
    }

    /// Ranking key of the projected plan in its cheapest decomposition.
    fn key(&self, prefix: &[usize], cycle: &[usize]) -> Key {
        let cost = |p: &Plan| {
            p.weighted_cost(self.t, self.alpha)
                .expect("product paths project to system paths")
        };
        let plan = project_plan(self.product, prefix, cycle, true).canonical();
        let witness = project_plan(self.product, prefix, cycle, false).canonical();
        let off = prefix.iter().chain(cycle).filter(|&&s| {
            let (a, b) = self.product.system_pair(s);
            a != b
        });
        (
            plan_key(self.t, &plan, cost(&plan)),
            off.count(),
            cost(&witness),
        )
    }
}

fn project_plan(p: &Product<'_>, prefix: &[usize], cycle: &[usize], real: bool) -> Plan {
    let pick = |s: usize| {
        let (a, b) = p.system_pair(s);
        if real {
            a
        } else {
            b
        }
    };
    Plan::new(
        prefix.iter().map(|&s| pick(s)).collect(),
        cycle.iter().map(|&s| pick(s)).collect(),
    )
}

fn assemble(
    t: &Wts,
    p: &Product<'_>,
    prefix: &[usize],
    cycle: &[usize],
    alpha: Alpha,
) -> PlanResult {
    let plan = project_plan(p, prefix, cycle, true).canonical();
    let witness = project_plan(p, prefix, cycle, false).canonical();
    let state = |s: usize| {
        let (real, copy) = p.system_pair(s);
        ProductState {
            real,
            copy,
            nba: p.state(s).1,
        }
    };
    let pre = plan.prefix_cost(t).expect("valid plan");
    let cyc = plan.cycle_cost(t).expect("valid plan");
    PlanResult {
        initial: plan.start(),
        cost: PlanCost {
            prefix: pre,
            cycle: cyc,
            weighted: alpha.combine(pre, cyc),
        },
        plan,
        witness,
        product_prefix: prefix.iter().map(|&s| state(s)).collect(),
        product_cycle: cycle.iter().map(|&s| state(s)).collect(),
        alpha,
    }
}
