//! Plans the patrol task on the factory fixture from both initial states.
//!
//! cargo run --example plan_factory

use opaque_plan::ltl::parse;
use opaque_plan::model::{Alpha, Wts};
use opaque_plan::planner::{plan, Outcome};

fn main() {
    let t = Wts::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/factory.json"
    ))
    .unwrap();
    let f = parse("GF P1 && GF P2").unwrap();

    for init in ["A", "B"] {
        let q0 = t.id(init).unwrap();
        match plan(&t, &f, q0, Alpha::half()).unwrap() {
            Outcome::Found(r) => {
                println!(
                    "{init}: prefix {:?} cycle {:?} cost {}",
                    r.plan.prefix_names(&t),
                    r.plan.cycle_names(&t),
                    r.cost.weighted
                );
                println!(
                    "   indistinguishable from {:?} then {:?}",
                    r.witness.prefix_names(&t),
                    r.witness.cycle_names(&t)
                );
            }
            Outcome::Infeasible(why) => println!("{init}: infeasible ({})", why.as_str()),
        }
    }
}
