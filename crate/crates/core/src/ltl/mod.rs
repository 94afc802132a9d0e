//! Linear temporal logic: formulas, concrete syntax, negation normal form and
//! direct evaluation on ultimately periodic words.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::eval_lasso;
pub use parse::{parse, ParseError};

/// A set of atomic propositions that hold at one position of a word.
pub type Letter = BTreeSet<String>;

/// LTL formula over named atomic propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    /// Atomic propositions occurring in the formula.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
                a.collect_props(out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
                1 + a.size()
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Distinct subformulas, children before parents.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut Vec<Formula>) {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => {}
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
                a.collect_subformulas(out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
        if !out.contains(self) {
            out.push(self.clone());
        }
    }

    /// Number of distinct `Until` subformulas after normalization.
    pub fn until_count(&self) -> usize {
        to_nnf(self)
            .subformulas()
            .iter()
            .filter(|f| matches!(f, Formula::Until(..)))
            .count()
    }
}

/// Rewrites `f` so that negation only ever sits directly on atoms.
///
/// `F a` becomes `true U a`, `G a` becomes `false R a`, and negated temporal
/// operators are pushed inward through their duals (`U`/`R`, `X`/`X`).
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, negate: bool) -> Formula {
    use Formula::*;
    match (f, negate) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom(p), false) => Atom(p.clone()),
        (Atom(p), true) => Formula::not(Atom(p.clone())),
        (Not(a), n) => nnf(a, !n),
        (And(a, b), false) => Formula::and(nnf(a, false), nnf(b, false)),
        (And(a, b), true) => Formula::or(nnf(a, true), nnf(b, true)),
        (Or(a, b), false) => Formula::or(nnf(a, false), nnf(b, false)),
        (Or(a, b), true) => Formula::and(nnf(a, true), nnf(b, true)),
        (Next(a), n) => Formula::next(nnf(a, n)),
        (Until(a, b), false) => Formula::until(nnf(a, false), nnf(b, false)),
        (Until(a, b), true) => Formula::release(nnf(a, true), nnf(b, true)),
        (Release(a, b), false) => Formula::release(nnf(a, false), nnf(b, false)),
        (Release(a, b), true) => Formula::until(nnf(a, true), nnf(b, true)),
        (Eventually(a), false) => Formula::until(True, nnf(a, false)),
        (Eventually(a), true) => Formula::release(False, nnf(a, true)),
        (Always(a), false) => Formula::release(False, nnf(a, false)),
        (Always(a), true) => Formula::until(True, nnf(a, true)),
    }
}

/// Returns true when `f` is in negation normal form.
pub fn is_nnf(f: &Formula) -> bool {
    use Formula::*;
    match f {
        True | False | Atom(_) => true,
        Not(a) => matches!(**a, Atom(_)),
        Eventually(_) | Always(_) => false,
        Next(a) => is_nnf(a),
        And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => is_nnf(a) && is_nnf(b),
    }
}

// Binary operators are always parenthesized so that printing and parsing
// round-trip exactly, including associativity.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(a) => write!(f, "!{a}"),
            Formula::Next(a) => write!(f, "X {a}"),
            Formula::Eventually(a) => write!(f, "F {a}"),
            Formula::Always(a) => write!(f, "G {a}"),
            Formula::And(a, b) => write!(f, "({a} && {b})"),
            Formula::Or(a, b) => write!(f, "({a} || {b})"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// An ultimately periodic word `prefix · loop^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub lasso: Vec<Letter>,
}

impl LassoWord {
    /// Panics if `lasso` is empty.
    pub fn new(prefix: Vec<Letter>, lasso: Vec<Letter>) -> Self {
        assert!(!lasso.is_empty(), "lasso word needs a nonempty loop");
        LassoWord { prefix, lasso }
    }

    /// Convenience constructor from string slices, e.g. `&[&["p1"], &[]]`.
    pub fn from_strs(prefix: &[&[&str]], lasso: &[&[&str]]) -> Self {
        let conv = |ls: &[&[&str]]| -> Vec<Letter> {
            ls.iter()
                .map(|l| l.iter().map(|s| s.to_string()).collect())
                .collect()
        };
        LassoWord::new(conv(prefix), conv(lasso))
    }

    /// Number of distinct positions, `|prefix| + |loop|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.lasso.len()
    }

    pub fn letter(&self, pos: usize) -> &Letter {
        if pos < self.prefix.len() {
            &self.prefix[pos]
        } else {
            &self.lasso[pos - self.prefix.len()]
        }
    }

    /// Successor position, wrapping the last loop position back to the loop start.
    pub fn succ(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// The same infinite word with the loop unrolled once into the prefix.
    pub fn unrolled(&self) -> LassoWord {
        let mut prefix = self.prefix.clone();
        prefix.extend(self.lasso.iter().cloned());
        LassoWord::new(prefix, self.lasso.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::atom("a")
    }
    fn b() -> Formula {
        Formula::atom("b")
    }

    #[test]
    fn nnf_dualizes_until() {
        let f = Formula::not(Formula::until(a(), b()));
        assert_eq!(
            to_nnf(&f),
            Formula::release(Formula::not(a()), Formula::not(b()))
        );
    }

    #[test]
    fn nnf_removes_double_negation() {
        assert_eq!(to_nnf(&Formula::not(Formula::not(a()))), a());
    }

    #[test]
    fn nnf_of_negated_always() {
        let f = Formula::not(Formula::always(a()));
        assert_eq!(to_nnf(&f), Formula::until(Formula::True, Formula::not(a())));
        assert!(is_nnf(&to_nnf(&f)));
    }

    #[test]
    fn nnf_negated_constants() {
        assert_eq!(to_nnf(&Formula::not(Formula::True)), Formula::False);
        assert_eq!(to_nnf(&Formula::not(Formula::False)), Formula::True);
    }

    #[test]
    fn subformulas_are_deduplicated() {
        let f = Formula::and(Formula::eventually(a()), Formula::eventually(a()));
        assert_eq!(f.subformulas().len(), 3);
        assert_eq!(f.until_count(), 1);
    }

    #[test]
    fn lasso_positions_wrap() {
        let w = LassoWord::from_strs(&[&[], &["a"]], &[&["b"], &[]]);
        assert_eq!(w.positions(), 4);
        assert_eq!(w.succ(3), 2);
        assert_eq!(w.succ(1), 2);
        assert!(w.letter(2).contains("b"));
    }
}
