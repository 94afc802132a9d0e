//! Checks hand-written plans against the factory fixture.
//!
//! cargo run --example verify_plan

use opaque_plan::ltl::parse;
use opaque_plan::model::{Plan, Wts};
use opaque_plan::oracle::{is_secure, satisfies};

fn main() {
    let t = Wts::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/factory.json"
    ))
    .unwrap();
    let f = parse("GF P1 && GF P2").unwrap();

    let plans: [(&[&str], &[&str]); 3] = [
        (&["A", "D"], &["F", "E"]),
        (&["A", "C"], &["F", "E"]),
        (&["B", "D"], &["F", "E"]),
    ];
    for (prefix, cycle) in plans {
        let p = Plan::from_names(&t, prefix, cycle).unwrap();
        let v = is_secure(&t, &p);
        print!(
            "{prefix:?}{cycle:?}: satisfies={} secure={}",
            satisfies(&t, &p, &f),
            v.secure
        );
        if let Some(w) = v.witness {
            print!(" witness {:?}{:?}", w.prefix_names(&t), w.cycle_names(&t));
        }
        println!();
    }
}
