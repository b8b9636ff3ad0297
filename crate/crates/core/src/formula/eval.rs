//! Brute-force LTL semantics on lasso words.
//!
//! Every subformula is evaluated on the `|u| + |v|` folded positions of the
//! lasso, bottom-up. Untils are least fixpoints and releases greatest
//! fixpoints of their one-step expansion; iteration stabilises within
//! `|u| + |v| + 1` rounds.

use super::Formula;
use crate::alphabet::LassoWord;

/// Whether `w ⊨ f`. Accepts any formula, not only NNF.
pub fn eval_lasso(f: &Formula, w: &LassoWord) -> bool {
    values(f, w)[0]
}

fn values(f: &Formula, w: &LassoWord) -> Vec<bool> {
    let n = w.positions();
    let holds = |i: usize| -> Vec<bool> { (0..n).map(|p| w.at(p) & (1 << i) != 0).collect() };
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(i) => holds(*i),
        Formula::NegAtom(i) => holds(*i).into_iter().map(|b| !b).collect(),
        Formula::Not(a) => values(a, w).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => zip(values(a, w), values(b, w), |x, y| x && y),
        Formula::Or(a, b) => zip(values(a, w), values(b, w), |x, y| x || y),
        Formula::Implies(a, b) => zip(values(a, w), values(b, w), |x, y| !x || y),
        Formula::Next(a) => {
            let va = values(a, w);
            (0..n).map(|p| va[w.succ(p)]).collect()
        }
        Formula::Until(a, b) => fixpoint(w, &values(a, w), &values(b, w), false),
        Formula::Release(a, b) => fixpoint(w, &values(a, w), &values(b, w), true),
        Formula::Globally(a) => fixpoint(w, &vec![false; n], &values(a, w), true),
        Formula::Finally(a) => fixpoint(w, &vec![true; n], &values(a, w), false),
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// `greatest == false`: `lhs U rhs`, i.e. `μZ. rhs ∨ (lhs ∧ X Z)`.
/// `greatest == true`:  `lhs R rhs`, i.e. `νZ. rhs ∧ (lhs ∨ X Z)`.
fn fixpoint(w: &LassoWord, lhs: &[bool], rhs: &[bool], greatest: bool) -> Vec<bool> {
    let n = w.positions();
    let mut z = vec![greatest; n];
    loop {
        let next: Vec<bool> = (0..n)
            .map(|p| {
                let later = z[w.succ(p)];
                if greatest {
                    rhs[p] && (lhs[p] || later)
                } else {
                    rhs[p] || (lhs[p] && later)
                }
            })
            .collect();
        if next == z {
            return z;
        }
        z = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::formula::parse_ltl;

    fn check(f: &str, w: &str, expected: bool) {
        let aps = ["a", "b"];
        let alpha = Alphabet::full(&aps).unwrap();
        let f = parse_ltl(f, &aps).unwrap();
        let w = LassoWord::parse(w, &alpha).unwrap();
        assert_eq!(eval_lasso(&f, &w), expected);
    }

    #[test]
    fn eventually_always() {
        check("FG a", "{};{a}", true);
        check("FG a", ";{a}{}", false);
    }

    #[test]
    fn infinitely_often() {
        check("GF b", ";{}", false);
        check("GF b", "{b}{b};{}", false);
        check("GF b", ";{}{}{b}", true);
        check("GF a -> GF b", ";{a}", false);
        check("GF a -> GF b", ";{a}{b}", true);
    }

    #[test]
    fn until_and_release() {
        check("a U b", "{a}{a}{b};{}", true);
        check("a U b", "{a}{};{b}", false);
        check("a U b", ";{a}", false);
        check("a R b", ";{b}", true);
        check("a R b", "{b}{a b};{}", true);
        check("a R b", "{b}{};{a b}", false);
    }

    #[test]
    fn next_wraps_into_period() {
        check("X a", "{};{a}", true);
        check("X X a", "{a};{}{a}", true);
        check("X X X a", "{a};{}{a}", false);
    }
}
