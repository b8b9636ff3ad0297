//! LTL formulas: syntax tree, negation normal form and the lasso-word oracle.

mod eval;
mod family;
mod parse;
mod random;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use eval::eval_lasso;
pub use family::{lower_bound_alphabet, lower_bound_aps, lower_bound_family};
pub use parse::{collect_identifiers, parse_ltl};
pub use random::random_nnf_formula;

/// An LTL formula. Atoms are indices into the proposition list of an
/// [`Alphabet`](crate::alphabet::Alphabet).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Atom(usize),
    NegAtom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Globally(Box<Formula>),
    Finally(Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(i: usize) -> Self {
        Atom(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Release(Box::new(a), Box::new(b))
    }

    pub fn globally(f: Formula) -> Self {
        Globally(Box::new(f))
    }

    pub fn finally(f: Formula) -> Self {
        Finally(Box::new(f))
    }

    /// Right-nested conjunction; `True` for an empty list.
    pub fn all(parts: Vec<Formula>) -> Self {
        parts.into_iter().rev().reduce(|acc, f| Formula::and(f, acc)).unwrap_or(True)
    }

    /// Right-nested disjunction; `False` for an empty list.
    pub fn any(parts: Vec<Formula>) -> Self {
        parts.into_iter().rev().reduce(|acc, f| Formula::or(f, acc)).unwrap_or(False)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            True | False | Atom(_) | NegAtom(_) => vec![],
            Not(a) | Next(a) | Globally(a) | Finally(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => vec![a, b],
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Largest atom index used, if any.
    pub fn max_atom(&self) -> Option<usize> {
        match self {
            Atom(i) | NegAtom(i) => Some(*i),
            _ => self.children().into_iter().filter_map(Formula::max_atom).max(),
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(self, Next(_) | Until(..) | Release(..) | Globally(_) | Finally(_))
    }

    /// Whether the formula satisfies the NNF invariants: negation only on
    /// atoms, no implication, and no constants below the root.
    pub fn is_nnf(&self) -> bool {
        self.nnf_violation().is_none()
    }

    pub(crate) fn nnf_violation(&self) -> Option<&'static str> {
        fn walk(f: &Formula, root: bool) -> Option<&'static str> {
            match f {
                Not(_) => Some("negation above a non-atomic subformula"),
                Implies(..) => Some("implication"),
                True | False if !root => Some("constant below the root"),
                _ => f.children().into_iter().find_map(|c| walk(c, false)),
            }
        }
        walk(self, true)
    }

    /// Negation normal form with constants simplified away.
    pub fn to_nnf(&self) -> Formula {
        nnf(self, false)
    }

    pub fn display<'a>(&'a self, aps: &'a [String]) -> FormulaDisplay<'a> {
        FormulaDisplay { f: self, aps }
    }
}

fn nnf(f: &Formula, neg: bool) -> Formula {
    match (f, neg) {
        (True, false) | (False, true) => True,
        (False, false) | (True, true) => False,
        (Atom(i), false) | (NegAtom(i), true) => Atom(*i),
        (Atom(i), true) | (NegAtom(i), false) => NegAtom(*i),
        (Not(a), _) => nnf(a, !neg),
        (And(a, b), false) | (Or(a, b), true) => mk_and(nnf(a, neg), nnf(b, neg)),
        (Or(a, b), false) | (And(a, b), true) => mk_or(nnf(a, neg), nnf(b, neg)),
        (Implies(a, b), false) => mk_or(nnf(a, true), nnf(b, false)),
        (Implies(a, b), true) => mk_and(nnf(a, false), nnf(b, true)),
        (Next(a), _) => mk_next(nnf(a, neg)),
        (Until(a, b), false) | (Release(a, b), true) => mk_until(nnf(a, neg), nnf(b, neg)),
        (Release(a, b), false) | (Until(a, b), true) => mk_release(nnf(a, neg), nnf(b, neg)),
        (Globally(a), false) | (Finally(a), true) => mk_globally(nnf(a, neg)),
        (Finally(a), false) | (Globally(a), true) => mk_finally(nnf(a, neg)),
    }
}

fn mk_and(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (False, _) | (_, False) => False,
        (True, x) | (x, True) => x,
        (a, b) => Formula::and(a, b),
    }
}

fn mk_or(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (True, _) | (_, True) => True,
        (False, x) | (x, False) => x,
        (a, b) => Formula::or(a, b),
    }
}

fn mk_next(a: Formula) -> Formula {
    match a {
        True => True,
        False => False,
        a => Formula::next(a),
    }
}

fn mk_until(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (_, True) => True,
        (_, False) => False,
        (False, b) => b,
        (True, b) => mk_finally(b),
        (a, b) => Formula::until(a, b),
    }
}

fn mk_release(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (_, True) => True,
        (_, False) => False,
        (True, b) => b,
        (False, b) => mk_globally(b),
        (a, b) => Formula::release(a, b),
    }
}

fn mk_globally(a: Formula) -> Formula {
    match a {
        True => True,
        False => False,
        a => Formula::globally(a),
    }
}

fn mk_finally(a: Formula) -> Formula {
    match a {
        True => True,
        False => False,
        a => Formula::finally(a),
    }
}

pub struct FormulaDisplay<'a> {
    f: &'a Formula,
    aps: &'a [String],
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |i: usize| self.aps.get(i).cloned().unwrap_or_else(|| format!("p{i}"));
        let sub = |g: &Formula, out: &mut fmt::Formatter<'_>| -> fmt::Result {
            if matches!(g, And(..) | Or(..) | Implies(..) | Until(..) | Release(..)) {
                write!(out, "(")?;
                self.write(g, out)?;
                write!(out, ")")
            } else {
                self.write(g, out)
            }
        };
        match f {
            True => write!(out, "true"),
            False => write!(out, "false"),
            Atom(i) => write!(out, "{}", name(*i)),
            NegAtom(i) => write!(out, "!{}", name(*i)),
            Not(a) => {
                write!(out, "!")?;
                sub(a, out)
            }
            Next(a) => {
                write!(out, "X ")?;
                sub(a, out)
            }
            Globally(a) => {
                write!(out, "G ")?;
                sub(a, out)
            }
            Finally(a) => {
                write!(out, "F ")?;
                sub(a, out)
            }
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => {
                let op = match f {
                    And(..) => "&",
                    Or(..) => "|",
                    Implies(..) => "->",
                    Until(..) => "U",
                    _ => "R",
                };
                sub(a, out)?;
                write!(out, " {op} ")?;
                sub(b, out)
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.f, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aps() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    fn p(s: &str) -> Formula {
        parse_ltl(s, &aps()).unwrap()
    }

    #[test]
    fn nnf_dualities() {
        assert_eq!(p("!(G a)").to_nnf(), p("F !a"));
        assert_eq!(p("!(a U b)").to_nnf(), Formula::release(NegAtom(0), NegAtom(1)));
        assert_eq!(p("F !a").to_nnf(), p("F !a"));
        assert_eq!(p("a -> b").to_nnf(), Formula::or(NegAtom(0), Atom(1)));
        assert_eq!(p("!X(a R b)").to_nnf(), p("X(!a U !b)").to_nnf());
    }

    #[test]
    fn nnf_removes_constants_below_root() {
        assert_eq!(p("a & true").to_nnf(), Atom(0));
        assert_eq!(p("G(a | true)").to_nnf(), True);
        assert_eq!(p("true U b").to_nnf(), p("F b"));
        assert_eq!(p("false R b").to_nnf(), p("G b"));
        assert_eq!(p("X false | a").to_nnf(), Atom(0));
        assert!(p("(a U true) & G(false R b)").to_nnf().is_nnf());
    }

    #[test]
    fn nnf_check() {
        assert!(p("F !a").is_nnf());
        assert!(!p("!G a").is_nnf());
        assert!(!p("a -> b").is_nnf());
        assert!(!p("a & true").is_nnf());
        assert!(p("true").is_nnf());
    }

    #[test]
    fn display_round_trips_through_parser() {
        for s in ["GF a -> GF b", "a U (b R !a)", "X X a & F(b | a)", "!(a U b)", "true"] {
            let f = p(s);
            let shown = f.display(&aps()).to_string();
            assert_eq!(parse_ltl(&shown, &aps()).unwrap(), f, "{s} displayed as {shown}");
        }
    }

    #[test]
    fn size_counts_nodes() {
        assert_eq!(p("G a").size(), 2);
        assert_eq!(p("GF a -> GF b").size(), 7);
    }
}
