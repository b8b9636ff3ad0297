//! Suffix-language labels and their equivalence.
//!
//! A label `⋂_i ⋃_{q ∈ C_i} L(A_q)` is a positive CNF over the states of `A`.
//! Two labels are compared by checking the emptiness of `l1 ∧ ¬l2` and
//! `¬l1 ∧ l2`, where `¬L(A_q)` is `L(Ā_q)` of the dual automaton.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::awa::{cnf, Awa, Pcnf, StateId};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::obligation::{Explorer, Vertex};
use crate::stateset::StateSet;

/// An intersection of unions of state languages. No unions means `Σ^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    unions: Vec<Vec<StateId>>,
}

impl Label {
    /// Canonical form: unions sorted, supersets of other unions dropped.
    pub fn new(unions: Vec<Vec<StateId>>) -> Result<Self> {
        if unions.iter().any(Vec::is_empty) {
            return Err(Error::Malformed("a label union must name at least one state".into()));
        }
        let sets = cnf::minimize(unions.into_iter().map(|u| u.into_iter().collect()).collect());
        Ok(Label {
            unions: sets.iter().map(StateSet::to_vec).collect(),
        })
    }

    pub fn universal() -> Self {
        Label { unions: Vec::new() }
    }

    pub fn unions(&self) -> &[Vec<StateId>] {
        &self.unions
    }

    pub fn is_universal(&self) -> bool {
        self.unions.is_empty()
    }

    fn sets(&self) -> Vec<StateSet> {
        self.unions.iter().map(|u| u.iter().copied().collect()).collect()
    }

    fn max_state(&self) -> Option<StateId> {
        self.unions.iter().flatten().copied().max()
    }

    pub fn render(&self) -> String {
        if self.unions.is_empty() {
            return "Σω".into();
        }
        self.unions
            .iter()
            .map(|u| format!("{{{}}}", u.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join("&")
    }
}

/// One union per vertex, holding all of the vertex's states.
pub fn label_of<'a>(vertices: impl IntoIterator<Item = &'a Vertex>) -> Result<Label> {
    let unions: Vec<Vec<StateId>> = vertices.into_iter().map(|v| v.s.to_vec()).collect();
    if unions.is_empty() {
        return Err(Error::InvalidParameter("label of an empty vertex set".into()));
    }
    Label::new(unions)
}

fn check_compatible(a: &Awa, dual: &Awa, labels: [&Label; 2]) -> Result<()> {
    if a.num_states() != dual.num_states() || !a.alphabet().compatible(dual.alphabet()) {
        return Err(Error::IncompatibleAutomata("the dual automaton does not match".into()));
    }
    for l in labels {
        if let Some(m) = l.max_state() {
            if m as usize >= a.num_states() {
                return Err(Error::IncompatibleAutomata(format!("label refers to unknown state {m}")));
            }
        }
    }
    Ok(())
}

/// `l1 ∧ ¬l2` as a CNF over `A ⊎ Ā`, dual states shifted by `n`.
fn difference_cnf(l1: &Label, l2: &Label, n: u32) -> cnf::Cnf {
    let shifted: Vec<StateSet> = l2.sets().iter().map(|u| u.iter().map(|q| q + n).collect()).collect();
    let negated = cnf::minimal_transversals(&shifted);
    cnf::and(l1.sets(), negated)
}

/// `A ⊎ Ā`: the dual copy's states are shifted by `|Q|`.
pub(crate) fn disjoint_union(a: &Awa, dual: &Awa) -> Awa {
    let n = a.num_states() as u32;
    let mut names = a.names().to_vec();
    names.extend(dual.names().iter().map(|s| format!("~{s}")));
    let mut delta: Vec<Vec<Pcnf>> = Vec::with_capacity(2 * n as usize);
    let mut accepting = Vec::with_capacity(2 * n as usize);
    for (src, shift) in [(a, 0), (dual, n)] {
        for q in 0..n {
            let row = (0..a.alphabet().len())
                .map(|x| shift_pcnf(src.delta(q, x), shift))
                .collect();
            delta.push(row);
            accepting.push(src.is_accepting(q));
        }
    }
    Awa::from_parts(a.alphabet().clone(), names, a.initial(), delta, accepting, a.top(), a.bottom())
        .expect("disjoint union of weak automata is weak")
}

fn shift_pcnf(p: &Pcnf, shift: u32) -> Pcnf {
    Pcnf::new(p.clauses().iter().map(|c| c.iter().map(|q| q + shift).collect()).collect()).expect("non-empty")
}

/// Decides `l1 ≡ l2` with the automaton `A'` over `A ⊎ Ā ⊎ {ι}` whose fresh
/// initial state reads a fresh letter `ε` into `(l1 ∧ ¬l2) ∨ (¬l1 ∧ l2)`.
pub fn labels_equivalent(l1: &Label, l2: &Label, a: &Awa, dual: &Awa) -> Result<bool> {
    check_compatible(a, dual, [l1, l2])?;
    let n = a.num_states() as u32;
    let union = disjoint_union(a, dual);
    let alphabet = a.alphabet().with_fresh_letter();
    let eps = a.alphabet().len();
    let iota = 2 * n;
    let (top, bottom) = (a.top(), a.bottom());
    let differ = cnf::or(difference_cnf(l1, l2, n), difference_cnf(l2, l1, n));

    let mut delta: Vec<Vec<Pcnf>> = Vec::with_capacity(2 * n as usize + 1);
    for q in 0..2 * n {
        let mut row: Vec<Pcnf> = (0..eps).map(|x| union.delta(q, x).clone()).collect();
        let sink = q == top || q == bottom || q == dual.top() + n || q == dual.bottom() + n;
        row.push(if sink { Pcnf::state(q) } else { Pcnf::state(bottom) });
        delta.push(row);
    }
    let mut iota_row = vec![Pcnf::state(bottom); eps];
    iota_row.push(Pcnf::normalized(differ, top, bottom));
    delta.push(iota_row);
    let mut names = union.names().to_vec();
    names.push("ι".into());
    let mut accepting: Vec<bool> = (0..2 * n).map(|q| union.is_accepting(q)).collect();
    accepting.push(false);
    let a2 = Awa::from_parts(alphabet, names, iota, delta, accepting, top, bottom)?;
    Ok(a2.is_empty())
}

/// Cached label comparison over one lazily explored obligation graph of
/// `A ⊎ Ā`. Agrees with [`labels_equivalent`].
pub struct LabelOracle<'a> {
    n: u32,
    explorer: Explorer<'a>,
    cache: HashMap<(Label, Label), bool>,
    pub checks: usize,
}

impl<'a> LabelOracle<'a> {
    /// `union` must be the disjoint union of `A` and its dual.
    pub(crate) fn new(union: &'a Awa, n: usize) -> Self {
        LabelOracle {
            n: n as u32,
            explorer: Explorer::new(union),
            cache: HashMap::new(),
            checks: 0,
        }
    }

    fn satisfiable(&mut self, c: cnf::Cnf, budget: &Budget) -> Result<bool> {
        for model in cnf::minimal_transversals(&c) {
            let v = self.explorer.start_vertex(model);
            if self.explorer.nonempty_from(v, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn equivalent(&mut self, l1: &Label, l2: &Label, budget: &Budget) -> Result<bool> {
        if l1 == l2 {
            return Ok(true);
        }
        let key = if l1 < l2 { (l1.clone(), l2.clone()) } else { (l2.clone(), l1.clone()) };
        if let Some(&b) = self.cache.get(&key) {
            return Ok(b);
        }
        self.checks += 1;
        let eq = !self.satisfiable(difference_cnf(l1, l2, self.n), budget)?
            && !self.satisfiable(difference_cnf(l2, l1, self.n), budget)?;
        self.cache.insert(key, eq);
        Ok(eq)
    }

    pub fn explored_vertices(&self) -> usize {
        self.explorer.len()
    }
}
