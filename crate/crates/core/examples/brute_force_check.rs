//! Compares the planner with the exhaustive oracle on random models.
//!
//! cargo run --release --example brute_force_check -- 200

use opaque_plan::buchi::translate;
use opaque_plan::ltl::parse;
use opaque_plan::model::{Alpha, Wts};
use opaque_plan::oracle::BruteForce;
use opaque_plan::planner::plan;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_model(rng: &mut impl Rng) -> Wts {
    let n = rng.gen_range(2..=5);
    let mut b = Wts::builder();
    for i in 0..n {
        let label: Vec<&str> = ["a", "b"]
            .into_iter()
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        b.add_state(&format!("s{i}"), label, ["o1", "o2"][rng.gen_range(0..2)]);
    }
    b.add_initial("s0");
    b.add_initial("s1");
    b.add_secret("s0");
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(0.4) {
                b.add_edge(
                    &format!("s{i}"),
                    &format!("s{j}"),
                    rng.gen_range(1..4) as i64,
                );
            }
        }
    }
    b.build().unwrap()
}

fn main() {
    let runs: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut same, mut dearer, mut infeasible) = (0, 0, 0);
    for _ in 0..runs {
        let t = random_model(&mut rng);
        for src in ["GF a", "F b", "a U b", "GF a && GF b"] {
            let f = parse(src).unwrap();
            let bound = t.len() * t.len() * translate(&f).num_states;
            let q0 = t.id("s0").unwrap();
            let ours = plan(&t, &f, q0, Alpha::half()).unwrap();
            let best = BruteForce::new(bound, bound)
                .plan(&t, &f, q0, Alpha::half())
                .unwrap();
            match (ours.found(), best) {
                (None, None) => infeasible += 1,
                (Some(r), Some(b))
                    if r.cost.weighted == b.weighted_cost(&t, Alpha::half()).unwrap() =>
                {
                    same += 1
                }
                (Some(_), Some(_)) => dearer += 1,
                (r, b) => panic!("feasibility disagrees on {src}: {r:?} vs {b:?}"),
            }
        }
    }
    println!("optimal {same}, costlier than optimum {dearer}, both infeasible {infeasible}");
}
