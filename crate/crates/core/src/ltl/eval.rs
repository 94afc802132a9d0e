use std::collections::HashMap;

use super::{Formula, LassoWord};

/// Decides `prefix · loop^ω ⊨ f` directly from the semantics.
///
/// Every suffix of a lasso word equals the suffix starting at one of its
/// `|prefix| + |loop|` positions, so each subformula is a boolean vector over
/// those positions. `U` is the least and `R` the greatest fixed point of its
/// one-step unfolding along the successor map.
pub fn eval_lasso(f: &Formula, w: &LassoWord) -> bool {
    let mut memo = HashMap::new();
    eval(f, w, &mut memo)[0]
}

fn eval<'f>(
    f: &'f Formula,
    w: &LassoWord,
    memo: &mut HashMap<&'f Formula, Vec<bool>>,
) -> Vec<bool> {
    if let Some(v) = memo.get(f) {
        return v.clone();
    }
    let n = w.positions();
    let v: Vec<bool> = match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(p) => (0..n).map(|i| w.letter(i).contains(p)).collect(),
        Formula::Not(a) => eval(a, w, memo).into_iter().map(|x| !x).collect(),
        Formula::And(a, b) => {
            let (a, b) = (eval(a, w, memo), eval(b, w, memo));
            a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
        }
        Formula::Or(a, b) => {
            let (a, b) = (eval(a, w, memo), eval(b, w, memo));
            a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
        }
        Formula::Next(a) => {
            let a = eval(a, w, memo);
            (0..n).map(|i| a[w.succ(i)]).collect()
        }
        Formula::Until(a, b) => {
            let (a, b) = (eval(a, w, memo), eval(b, w, memo));
            fixpoint(w, false, |i, next| b[i] || (a[i] && next))
        }
        Formula::Release(a, b) => {
            let (a, b) = (eval(a, w, memo), eval(b, w, memo));
            fixpoint(w, true, |i, next| b[i] && (a[i] || next))
        }
        Formula::Eventually(a) => {
            let a = eval(a, w, memo);
            fixpoint(w, false, |i, next| a[i] || next)
        }
        Formula::Always(a) => {
            let a = eval(a, w, memo);
            fixpoint(w, true, |i, next| a[i] && next)
        }
    };
    memo.insert(f, v.clone());
    v
}

fn fixpoint(w: &LassoWord, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let n = w.positions();
    let mut v = vec![init; n];
    loop {
        let mut changed = false;
        // Backward sweeps converge in at most two passes over the loop.
        for i in (0..n).rev() {
            let nv = step(i, v[w.succ(i)]);
            if nv != v[i] {
                v[i] = nv;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    fn check(f: &str, w: &LassoWord) -> bool {
        eval_lasso(&parse(f).unwrap(), w)
    }

    #[test]
    fn case_study_trace_satisfies_task() {
        let w = LassoWord::from_strs(&[&[], &[]], &[&["P1"], &["P2"]]);
        assert!(check("GF P1 && GF P2", &w));
    }

    #[test]
    fn never_holding_prop_fails_gf() {
        let w = LassoWord::from_strs(&[], &[&[]]);
        assert!(!check("GF P1", &w));
    }

    #[test]
    fn until_over_prefix() {
        let w = LassoWord::from_strs(&[&["a"], &["a"], &["b"]], &[&[]]);
        assert!(check("a U b", &w));
        let w = LassoWord::from_strs(&[&["a"], &[], &["b"]], &[&[]]);
        assert!(!check("a U b", &w));
    }

    #[test]
    fn until_never_fulfilled_in_loop() {
        // a holds forever but b never does: least fixed point gives false.
        let w = LassoWord::from_strs(&[], &[&["a"]]);
        assert!(!check("a U b", &w));
        assert!(check("a R b", &LassoWord::from_strs(&[], &[&["b"]])));
    }

    #[test]
    fn next_wraps_into_loop() {
        let w = LassoWord::from_strs(&[&[]], &[&["a"], &[]]);
        assert!(check("X a", &w));
        assert!(check("X X X a", &w));
        assert!(!check("X X a", &w));
    }

    #[test]
    fn persistence_and_recurrence() {
        let w = LassoWord::from_strs(&[&[]], &[&["p"]]);
        assert!(check("FG p", &w));
        let w = LassoWord::from_strs(&[&["p"]], &[&["p"], &[]]);
        assert!(!check("FG p", &w));
        assert!(check("GF p", &w));
    }
}
