use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::model::{cost_to_json, Plan, Wts};
use crate::planner::PlanResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostDoc {
    pub prefix: Number,
    pub cycle: Number,
    pub weighted: Number,
}

/// Plan document written by `plan` and read by `verify`. On input only
/// `initial`, `prefix` and `cycle` are required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDoc {
    pub initial: String,
    #[serde(default = "yes")]
    pub secure: bool,
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_prefix: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_cycle: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostDoc>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfeasibleDoc {
    pub initial: String,
    pub feasible: bool,
    pub reason: String,
}

fn names(t: &Wts, qs: &[usize]) -> Vec<String> {
    qs.iter().map(|&q| t.name(q).to_string()).collect()
}

impl PlanDoc {
    pub fn from_result(t: &Wts, r: &PlanResult) -> Self {
        PlanDoc {
            initial: t.name(r.initial).to_string(),
            secure: true,
            prefix: names(t, &r.plan.prefix),
            cycle: names(t, &r.plan.cycle),
            witness_prefix: Some(names(t, &r.witness.prefix)),
            witness_cycle: Some(names(t, &r.witness.cycle)),
            alpha: Some(cost_to_json(r.alpha.value())),
            cost: Some(CostDoc {
                prefix: cost_to_json(r.cost.prefix),
                cycle: cost_to_json(r.cost.cycle),
                weighted: cost_to_json(r.cost.weighted),
            }),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            format!("invalid plan document at {path}: {}", e.into_inner())
        })
    }

    fn lasso(t: &Wts, prefix: &[String], cycle: &[String]) -> Result<Plan, String> {
        let p: Vec<&str> = prefix.iter().map(String::as_str).collect();
        let c: Vec<&str> = cycle.iter().map(String::as_str).collect();
        if c.is_empty() {
            return Err("plan cycle is empty".into());
        }
        let plan = Plan::from_names(t, &p, &c).map_err(|e| e.to_string())?;
        plan.validate(t)
            .map_err(|e| format!("not a path of the model: {e}"))?;
        Ok(plan)
    }

    /// The plan as a path of `t`; fails on unknown states, missing
    /// transitions or a start that differs from `initial`.
    pub fn plan(&self, t: &Wts) -> Result<Plan, String> {
        let plan = Self::lasso(t, &self.prefix, &self.cycle)?;
        if t.name(plan.start()) != self.initial {
            return Err(format!(
                "plan starts at {:?} but initial is {:?}",
                t.name(plan.start()),
                self.initial
            ));
        }
        Ok(plan)
    }

    pub fn witness(&self, t: &Wts) -> Result<Option<Plan>, String> {
        match (&self.witness_prefix, &self.witness_cycle) {
            (Some(p), Some(c)) => Self::lasso(t, p, c).map(Some),
            (None, None) => Ok(None),
            _ => Err("witness_prefix and witness_cycle must be given together".into()),
        }
    }
}

/// Result printed by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictDoc {
    pub secure: bool,
    pub witness_prefix: Option<Vec<String>>,
    pub witness_cycle: Option<Vec<String>>,
    pub satisfies: bool,
    /// Whether the document's own witness checks out; absent if it has none.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_witness_valid: Option<bool>,
}

impl VerdictDoc {
    pub fn new(
        t: &Wts,
        secure: bool,
        witness: Option<&Plan>,
        satisfies: bool,
        claimed: Option<bool>,
    ) -> Self {
        VerdictDoc {
            secure,
            witness_prefix: witness.map(|w| names(t, &w.prefix)),
            witness_cycle: witness.map(|w| names(t, &w.cycle)),
            satisfies,
            claimed_witness_valid: claimed,
        }
    }
}
