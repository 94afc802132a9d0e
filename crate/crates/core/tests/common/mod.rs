#![allow(dead_code)]

use std::collections::BTreeSet;

use opaque_plan::ltl::{LassoWord, Letter};

/// Formula corpus over propositions `a` and `b`.
pub const FORMULAS: &[&str] = &[
    "true",
    "false",
    "a",
    "!a",
    "X a",
    "X X a",
    "X X X a",
    "X !X X b",
    "F a",
    "G a",
    "GF a",
    "FG a",
    "GF a && GF b",
    "FG a || GF b",
    "a U b",
    "a R b",
    "!(a U b)",
    "a U (b U a)",
    "(a U b) U a",
    "a U X b",
    "X (a U b)",
    "G (a -> F b)",
    "G (a -> X b)",
    "F (a && X b)",
    "G (a || b) && F !a",
    "(G a) U b",
    "a R (b || X a)",
    "F G (a && !b)",
    "G F (a && b) || F G !a",
    "!(GF a) || GF b",
    "(a U b) && (b U a)",
    "X G F a && F G !b",
    "G (a U b)",
    "F (a R b)",
    "!G (a -> X X b)",
    "(X a) R (F b)",
];

pub fn letters(props: &[&str]) -> Vec<Letter> {
    let n = props.len();
    (0..1usize << n)
        .map(|m| {
            (0..n)
                .filter(|i| m >> i & 1 == 1)
                .map(|i| props[i].to_string())
                .collect::<BTreeSet<_>>()
        })
        .collect()
}

fn words(alphabet: &[Letter], len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(l.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// Every lasso word with `|prefix| ≤ max_prefix` and `1 ≤ |loop| ≤ max_loop`.
pub fn all_lassos(props: &[&str], max_prefix: usize, max_loop: usize) -> Vec<LassoWord> {
    let alphabet = letters(props);
    let mut out = Vec::new();
    for p in 0..=max_prefix {
        for l in 1..=max_loop {
            for pre in words(&alphabet, p) {
                for lp in words(&alphabet, l) {
                    out.push(LassoWord::new(pre.clone(), lp));
                }
            }
        }
    }
    out
}

/// Formulas used for planning suites.
pub const PLAN_FORMULAS: &[&str] = &[
    "GF a",
    "GF a && GF b",
    "F a",
    "a U b",
    "G (a -> F b)",
    "FG a",
    "G !b && F a",
    "X a && F G !a",
];

/// A random system with at most `max_states` states, `max_outputs` output
/// symbols and propositions `a`, `b`. Weights are positive multiples of 1/2.
pub fn random_model(
    rng: &mut impl rand::Rng,
    max_states: usize,
    max_outputs: usize,
) -> opaque_plan::model::Wts {
    use opaque_plan::model::{Cost, Wts};
    let n = rng.gen_range(2..=max_states);
    let k = rng.gen_range(1..=max_outputs);
    let mut b = Wts::builder();
    for q in 0..n {
        let mut label = Vec::new();
        for p in ["a", "b"] {
            if rng.gen_bool(0.4) {
                label.push(p);
            }
        }
        b.add_state(
            &format!("s{q}"),
            label,
            &format!("o{}", rng.gen_range(0..k)),
        );
    }
    let density = rng.gen_range(0.2..0.6);
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(density) {
                let w = Cost::new(rng.gen_range(1..=8), 2);
                b.add_edge(&format!("s{u}"), &format!("s{v}"), w);
            }
        }
    }
    let mut initial: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if initial.is_empty() {
        initial.push(0);
    }
    for &q in &initial {
        b.add_initial(&format!("s{q}"));
        if rng.gen_bool(0.5) {
            b.add_secret(&format!("s{q}"));
        }
    }
    b.build().expect("generated model is valid")
}
