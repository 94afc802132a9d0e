mod common;

use num_integer::Integer;
use opaque_plan::buchi::translate;
use opaque_plan::graph::WeightedGraph;
use opaque_plan::ltl::parse;
use opaque_plan::model::{Alpha, Cost, Plan, Wts};
use opaque_plan::oracle::{is_secure, naive_plan, satisfies, witness_certifies, BruteForce};
use opaque_plan::planner::plan;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Whether some lasso from a non-secret initial state, of total length at
/// most `|Q| · (|prefix| + |cycle|)`, has the plan's output sequence. Walks
/// are pruned only by output mismatch.
fn secure_by_enumeration(t: &Wts, p: &Plan) -> bool {
    let limit = t.len() * (p.prefix.len() + p.cycle.len());
    let same = |w: &Plan| {
        let horizon = p.prefix.len().max(w.prefix.len()) + p.cycle.len().lcm(&w.cycle.len());
        (0..horizon).all(|i| t.output(p.state_at(i)) == t.output(w.state_at(i)))
    };
    let mut stack: Vec<Vec<usize>> = t
        .initial()
        .iter()
        .filter(|&&q| !t.is_secret(q) && t.output(q) == t.output(p.state_at(0)))
        .map(|&q| vec![q])
        .collect();
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        for j in 0..path.len() {
            if t.weight(last, path[j]).is_some()
                && same(&Plan::new(path[..j].to_vec(), path[j..].to_vec()))
            {
                return true;
            }
        }
        if path.len() < limit {
            for &(r, _) in t.out_edges(last) {
                if t.output(r) == t.output(p.state_at(path.len())) {
                    let mut next = path.clone();
                    next.push(r);
                    stack.push(next);
                }
            }
        }
    }
    false
}

fn random_plan(t: &Wts, rng: &mut impl Rng) -> Option<Plan> {
    let mut path = vec![t.initial()[rng.gen_range(0..t.initial().len())]];
    for _ in 0..3 {
        let out = t.out_edges(*path.last().unwrap());
        if out.is_empty() {
            return None;
        }
        path.push(out[rng.gen_range(0..out.len())].0);
    }
    let last = *path.last().unwrap();
    let starts: Vec<usize> = (0..path.len())
        .filter(|&j| t.weight(last, path[j]).is_some())
        .collect();
    let j = *starts.get(rng.gen_range(0..starts.len().max(1)))?;
    Some(Plan::new(path[..j].to_vec(), path[j..].to_vec()))
}

#[test]
fn security_check_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut checked, mut secure) = (0, 0);
    while checked < 400 {
        let t = common::random_model(&mut rng, 4, 2);
        let Some(p) = random_plan(&t, &mut rng) else {
            continue;
        };
        let v = is_secure(&t, &p);
        assert_eq!(
            v.secure,
            secure_by_enumeration(&t, &p),
            "{:?} on {:?}",
            p,
            t.to_doc()
        );
        if let Some(w) = &v.witness {
            assert!(witness_certifies(&t, &p, w));
        }
        checked += 1;
        secure += v.secure as usize;
    }
    assert!(
        secure > 50 && secure < 350,
        "both verdicts exercised: {secure}"
    );
}

#[test]
fn pruned_search_matches_plain_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let alpha = Alpha::half();
    for _ in 0..60 {
        let t = common::random_model(&mut rng, 4, 2);
        for src in ["GF a", "F a", "a U b", "G !b"] {
            let f = parse(src).unwrap();
            for &q0 in t.initial() {
                let fast = BruteForce::new(3, 3).plan(&t, &f, q0, alpha).unwrap();
                let slow = naive_plan(&t, &f, q0, 3, 3, alpha);
                assert_eq!(fast, slow, "{src} from {}", t.name(q0));
            }
        }
    }
}

/// Planner optimality can fail (see the test below), but the planner must
/// never beat the exhaustive optimum and must agree on feasibility.
#[test]
fn planner_is_bounded_by_exhaustive_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let alpha = Alpha::half();
    for _ in 0..120 {
        let t = common::random_model(&mut rng, 5, 3);
        for src in common::PLAN_FORMULAS {
            let f = parse(src).unwrap();
            let bound = t.len() * t.len() * translate(&f).num_states;
            for &q0 in t.initial() {
                let ours = plan(&t, &f, q0, alpha).unwrap();
                let best = BruteForce::new(bound, bound)
                    .plan(&t, &f, q0, alpha)
                    .unwrap();
                match (ours.found(), best) {
                    (None, None) => {}
                    (Some(r), Some(b)) => {
                        assert!(r.cost.weighted >= b.weighted_cost(&t, alpha).unwrap())
                    }
                    (r, b) => panic!("{src} from {}: planner {r:?}, oracle {b:?}", t.name(q0)),
                }
            }
        }
    }
}

/// A secret start whose only observation-equivalent partner runs a 2-cycle.
/// Staying at A is secure and cheapest, but any product cycle over A^ω has
/// to go round twice to close the partner's period, so shortest product
/// cycles prefer the A-X loop.
#[test]
fn planner_overpays_when_the_witness_period_is_longer() {
    let t = Wts::builder()
        .state("A", Vec::<String>::new(), "o")
        .state("X", Vec::<String>::new(), "o")
        .state("B", Vec::<String>::new(), "o")
        .state("B2", Vec::<String>::new(), "o")
        .initial("A")
        .initial("B")
        .secret("A")
        .edge("A", "A", 2)
        .edge("A", "X", Cost::new(3, 2))
        .edge("X", "A", Cost::new(3, 2))
        .biedge("B", "B2", 1)
        .build()
        .unwrap();
    let f = parse("true").unwrap();
    let a = t.id("A").unwrap();
    let alpha = Alpha::half();

    let stay = Plan::from_names(&t, &[], &["A"]).unwrap();
    assert!(satisfies(&t, &stay, &f));
    let verdict = is_secure(&t, &stay);
    assert!(verdict.secure);
    assert_eq!(verdict.witness.unwrap().cycle_names(&t), ["B", "B2"]);

    let best = BruteForce::new(4, 4)
        .plan(&t, &f, a, alpha)
        .unwrap()
        .unwrap();
    assert!(best.same_path(&stay));
    assert_eq!(best.weighted_cost(&t, alpha).unwrap(), Cost::from(1));

    let ours = plan(&t, &f, a, alpha).unwrap();
    let r = ours.found().unwrap();
    assert_eq!(r.plan.cycle_names(&t), ["A", "X"]);
    assert_eq!(r.cost.weighted, Cost::new(3, 2));
}
