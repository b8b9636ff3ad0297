//! Closure construction of a weak alternating automaton from an NNF formula.
//!
//! States are the root, every temporal subformula that has to be re-checked
//! one step later, and every operand of `X`. A state's transition on a letter
//! is the one-step expansion of its formula with literals evaluated and
//! Boolean connectives inlined:
//!
//! ```text
//! e(χ U ψ) = e(ψ) ∨ (e(χ) ∧ self)      e(F χ) = e(χ) ∨ self
//! e(χ R ψ) = e(ψ) ∧ (e(χ) ∨ self)      e(G χ) = e(χ) ∧ self
//! e(X ψ)   = state(ψ)
//! ```

use std::collections::{HashMap, VecDeque};

use super::{cnf, Awa, Pcnf, StateId};
use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::formula::Formula;

const TOP: StateId = 0;
const BOTTOM: StateId = 1;

struct Builder<'a> {
    ids: HashMap<&'a Formula, StateId>,
    formulas: Vec<&'a Formula>,
    queue: VecDeque<StateId>,
}

impl<'a> Builder<'a> {
    fn state(&mut self, f: &'a Formula) -> StateId {
        if let Some(&id) = self.ids.get(f) {
            return id;
        }
        let id = (self.formulas.len() + 2) as StateId;
        self.ids.insert(f, id);
        self.formulas.push(f);
        self.queue.push_back(id);
        id
    }

    fn expand(&mut self, f: &'a Formula, x: Letter) -> cnf::Cnf {
        use Formula::*;
        match f {
            True => cnf::t(),
            False => cnf::f(),
            Atom(i) => constant(x & (1 << i) != 0),
            NegAtom(i) => constant(x & (1 << i) == 0),
            And(a, b) => {
                let a = self.expand(a, x);
                cnf::and(a, self.expand(b, x))
            }
            Or(a, b) => {
                let a = self.expand(a, x);
                cnf::or(a, self.expand(b, x))
            }
            Next(a) => cnf::var(self.state(a)),
            Until(a, b) => {
                let me = cnf::var(self.state(f));
                let now = self.expand(b, x);
                let hold = self.expand(a, x);
                cnf::or(now, cnf::and(hold, me))
            }
            Release(a, b) => {
                let me = cnf::var(self.state(f));
                let now = self.expand(b, x);
                let free = self.expand(a, x);
                cnf::and(now, cnf::or(free, me))
            }
            Globally(a) => {
                let me = cnf::var(self.state(f));
                cnf::and(self.expand(a, x), me)
            }
            Finally(a) => {
                let me = cnf::var(self.state(f));
                cnf::or(self.expand(a, x), me)
            }
            Not(_) | Implies(..) => unreachable!("checked to be in NNF"),
        }
    }
}

fn constant(b: bool) -> cnf::Cnf {
    if b {
        cnf::t()
    } else {
        cnf::f()
    }
}

/// Builds an automaton with `L(A) = L(f)`. State 0 is `top`, state 1 is
/// `bottom` and state 2 is the root unless the root is a constant.
pub fn from_ltl(f: &Formula, alphabet: &Alphabet) -> Result<Awa> {
    if let Some(why) = f.nnf_violation() {
        return Err(Error::NotNnf(why.into()));
    }
    if let Some(m) = f.max_atom() {
        if m >= alphabet.aps().len() {
            return Err(Error::InvalidParameter(format!(
                "atom {m} is outside the {} declared propositions",
                alphabet.aps().len()
            )));
        }
    }
    let mut b = Builder {
        ids: HashMap::new(),
        formulas: Vec::new(),
        queue: VecDeque::new(),
    };
    let initial = match f {
        Formula::True => TOP,
        Formula::False => BOTTOM,
        _ => b.state(f),
    };
    let mut rows: Vec<Vec<cnf::Cnf>> = Vec::new();
    while let Some(q) = b.queue.pop_front() {
        let g = b.formulas[(q - 2) as usize];
        let row: Vec<cnf::Cnf> = alphabet.letters().iter().map(|&x| b.expand(g, x)).collect();
        debug_assert_eq!(rows.len() as StateId + 2, q);
        rows.push(row);
    }
    let aps = alphabet.aps();
    let mut names = vec!["true".to_string(), "false".to_string()];
    names.extend(b.formulas.iter().map(|g| g.display(aps).to_string()));
    let mut accepting = vec![true, false];
    accepting.extend(b.formulas.iter().map(|g| !matches!(g, Formula::Until(..) | Formula::Finally(_))));
    let sink = |q: StateId| vec![Pcnf::state(q); alphabet.len()];
    let mut delta = vec![sink(TOP), sink(BOTTOM)];
    delta.extend(
        rows.into_iter()
            .map(|row| row.into_iter().map(|c| Pcnf::normalized(c, TOP, BOTTOM)).collect()),
    );
    Awa::from_parts(alphabet.clone(), names, initial, delta, accepting, TOP, BOTTOM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_ltl;

    #[test]
    fn rejects_non_nnf() {
        let alpha = Alphabet::full(&["a"]).unwrap();
        let f = parse_ltl("!G a", &["a"]).unwrap();
        assert!(matches!(from_ltl(&f, &alpha), Err(Error::NotNnf(_))));
    }

    #[test]
    fn state_count_for_sample_formula() {
        // root, FG a, G a, GF b, F b, plus the two sinks
        let alpha = Alphabet::full(&["a", "b"]).unwrap();
        let f = parse_ltl("FG a | GF b", &["a", "b"]).unwrap();
        let a = from_ltl(&f, &alpha).unwrap();
        assert_eq!(a.num_states(), 7);
    }

    #[test]
    fn constant_roots_use_sinks() {
        let alpha = Alphabet::full(&["a"]).unwrap();
        let a = from_ltl(&Formula::True, &alpha).unwrap();
        assert_eq!(a.initial(), a.top());
        let a = from_ltl(&Formula::False, &alpha).unwrap();
        assert_eq!(a.initial(), a.bottom());
    }

    #[test]
    fn globally_transitions() {
        let alpha = Alphabet::full(&["a"]).unwrap();
        let a = from_ltl(&parse_ltl("G a", &["a"]).unwrap(), &alpha).unwrap();
        assert_eq!(a.delta(2, 0), &Pcnf::state(BOTTOM));
        assert_eq!(a.delta(2, 1), &Pcnf::state(2));
        assert!(a.is_accepting(2));
    }
}
