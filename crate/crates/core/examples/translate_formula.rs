//! Translates a formula and prints the automaton as DOT.
//!
//! cargo run --example translate_formula -- "a U b"

use std::collections::BTreeSet;

use opaque_plan::buchi::{accepts_lasso, translate};
use opaque_plan::ltl::{eval_lasso, parse, to_nnf, LassoWord};

fn letter(props: &[&str]) -> BTreeSet<String> {
    props.iter().map(|p| p.to_string()).collect()
}

fn main() {
    let src = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "GF P1 && GF P2".into());
    let f = match parse(&src) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let nba = translate(&f);
    eprintln!("formula {f}");
    eprintln!("nnf     {}", to_nnf(&f));
    eprintln!(
        "{} states, {} transitions, {} accepting",
        nba.num_states,
        nba.transition_count(),
        nba.accepting_states().len()
    );

    let words = [
        LassoWord::new(vec![], vec![letter(&["P1"]), letter(&["P2"])]),
        LassoWord::new(vec![letter(&["a"])], vec![letter(&["b"])]),
        LassoWord::new(vec![], vec![letter(&[])]),
    ];
    for w in &words {
        eprintln!(
            "{w:?}: automaton {} semantics {}",
            accepts_lasso(&nba, w),
            eval_lasso(&f, w)
        );
    }
    print!("{}", nba.to_dot());
}
