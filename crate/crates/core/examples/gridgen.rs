//! Builds a grid world from a grid spec and plans on it.
//!
//! cargo run --release --example gridgen -- crates/core/examples/grid20.json

use std::time::Instant;

use opaque_plan::cli::{cell_name, GridSpec};
use opaque_plan::ltl::parse;
use opaque_plan::model::Alpha;
use opaque_plan::planner::{plan, Outcome};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/grid20.json").into());
    let spec = GridSpec::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let t = spec.to_model().unwrap().build().unwrap();
    println!(
        "{}x{} grid: {} states, {} transitions",
        spec.rows,
        spec.cols,
        t.len(),
        t.transitions().count()
    );

    let f = parse("GF P1 && GF P2").unwrap();
    let q0 = t.id(&cell_name(spec.secret[0])).unwrap();
    let start = Instant::now();
    let outcome = plan(&t, &f, q0, Alpha::half()).unwrap();
    let took = start.elapsed();
    match outcome {
        Outcome::Found(r) => println!(
            "plan from {}: {} + {} steps, cost {} ({took:.2?})",
            t.name(q0),
            r.plan.prefix.len(),
            r.plan.cycle.len(),
            r.cost.weighted
        ),
        Outcome::Infeasible(why) => {
            println!("no plan from {}: {} ({took:.2?})", t.name(q0), why.as_str())
        }
    }
}
