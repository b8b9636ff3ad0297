//! Weak alternating Büchi automata with positive CNF transitions.

mod build;
pub(crate) mod cnf;
mod game;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, LassoWord};
use crate::error::{Error, Result};
use crate::scc::tarjan;
use crate::stateset::StateSet;

pub use build::from_ltl;

pub type StateId = u32;

/// A transition formula: a non-empty conjunction of non-empty disjunctive
/// clauses over states. `true` and `false` are spelled with the sink states.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pcnf {
    clauses: Vec<Vec<StateId>>,
}

impl Pcnf {
    /// Canonicalizes the clauses; fails on an empty clause or clause list.
    pub fn new(clauses: Vec<Vec<StateId>>) -> Result<Self> {
        if clauses.is_empty() || clauses.iter().any(Vec::is_empty) {
            return Err(Error::Malformed("transition formulas need non-empty clauses".into()));
        }
        let sets = cnf::minimize(clauses.into_iter().map(|c| c.into_iter().collect()).collect());
        Ok(Self::from_minimal(&sets))
    }

    pub fn state(q: StateId) -> Self {
        Pcnf { clauses: vec![vec![q]] }
    }

    /// `sets` is read as a CNF and simplified against the sinks.
    pub(crate) fn normalized(sets: Vec<StateSet>, top: StateId, bottom: StateId) -> Self {
        let mut kept = Vec::new();
        for mut c in sets {
            if c.contains(top) {
                continue;
            }
            c.remove(bottom);
            kept.push(c);
        }
        if kept.is_empty() {
            return Pcnf::state(top);
        }
        if cnf::is_false(&kept) {
            return Pcnf::state(bottom);
        }
        Self::from_minimal(&cnf::minimize(kept))
    }

    fn from_minimal(sets: &[StateSet]) -> Self {
        Pcnf {
            clauses: sets.iter().map(StateSet::to_vec).collect(),
        }
    }

    pub fn clauses(&self) -> &[Vec<StateId>] {
        &self.clauses
    }

    pub fn clause_sets(&self) -> Vec<StateSet> {
        self.clauses.iter().map(|c| c.iter().copied().collect()).collect()
    }

    pub fn states(&self) -> StateSet {
        self.clauses.iter().flatten().copied().collect()
    }

    /// Whether the set `model` satisfies the formula.
    pub fn satisfied_by(&self, model: &StateSet) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&q| model.contains(q)))
    }

    fn render(&self, names: &[String]) -> String {
        let clause = |c: &Vec<StateId>| {
            let parts: Vec<&str> = c.iter().map(|&q| names[q as usize].as_str()).collect();
            if parts.len() > 1 && self.clauses.len() > 1 {
                format!("({})", parts.join(" | "))
            } else {
                parts.join(" | ")
            }
        };
        self.clauses.iter().map(clause).collect::<Vec<_>>().join(" & ")
    }
}

/// A weak alternating Büchi automaton. `delta[q][i]` is the transition
/// formula of state `q` on the `i`-th letter of the alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Awa {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: StateId,
    delta: Vec<Vec<Pcnf>>,
    accepting: Vec<bool>,
    rank: Vec<usize>,
    top: StateId,
    bottom: StateId,
}

impl Awa {
    /// Validates the structure and computes the weakness ranks.
    pub fn from_parts(
        alphabet: Alphabet,
        names: Vec<String>,
        initial: StateId,
        delta: Vec<Vec<Pcnf>>,
        accepting: Vec<bool>,
        top: StateId,
        bottom: StateId,
    ) -> Result<Self> {
        let n = names.len();
        if delta.len() != n || accepting.len() != n {
            return Err(Error::Malformed("state tables disagree in length".into()));
        }
        for (id, what) in [(initial, "initial"), (top, "top"), (bottom, "bottom")] {
            if id as usize >= n {
                return Err(Error::Malformed(format!("{what} state {id} does not exist")));
            }
        }
        if top == bottom {
            return Err(Error::Malformed("top and bottom must differ".into()));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::Malformed(format!("state {q} is missing transitions")));
            }
            if let Some(bad) = row.iter().flat_map(|p| p.states().iter().collect::<Vec<_>>()).find(|&s| s as usize >= n) {
                return Err(Error::Malformed(format!("state {q} refers to unknown state {bad}")));
            }
        }
        let sink_ok = |s: StateId| delta[s as usize].iter().all(|p| *p == Pcnf::state(s));
        if !accepting[top as usize] || !sink_ok(top) {
            return Err(Error::Malformed("top must be an accepting sink".into()));
        }
        if accepting[bottom as usize] || !sink_ok(bottom) {
            return Err(Error::Malformed("bottom must be a rejecting sink".into()));
        }
        let mut a = Awa {
            alphabet,
            names,
            initial,
            delta,
            accepting,
            rank: Vec::new(),
            top,
            bottom,
        };
        a.rank = a.check_weak()?;
        Ok(a)
    }

    /// SCC ranks if every SCC is homogeneously accepting or rejecting. Ranks
    /// never increase along transitions.
    pub fn check_weak(&self) -> Result<Vec<usize>> {
        let sccs = tarjan(self.num_states(), |q| {
            let mut succ = StateSet::new();
            for p in &self.delta[q] {
                succ.union_with(&p.states());
            }
            succ.iter().map(|s| s as usize).collect::<Vec<_>>()
        });
        for members in &sccs.members {
            let acc = self.accepting[members[0]];
            if members.iter().any(|&q| self.accepting[q] != acc) {
                return Err(Error::NotWeak { scc: members.clone() });
            }
        }
        Ok(sccs.component)
    }

    /// The complement automaton: clauses dualized through minimal
    /// transversals, accepting set complemented, sinks swapped.
    pub fn dualize(&self) -> Awa {
        let (top, bottom) = (self.bottom, self.top);
        let delta = self
            .delta
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| Pcnf::normalized(cnf::minimal_transversals(&p.clause_sets()), top, bottom))
                    .collect()
            })
            .collect();
        Awa {
            alphabet: self.alphabet.clone(),
            names: self.names.clone(),
            initial: self.initial,
            delta,
            accepting: self.accepting.iter().map(|a| !a).collect(),
            rank: self.rank.clone(),
            top,
            bottom,
        }
    }

    /// Whether the acceptor wins the word-checking game on `w`.
    pub fn accepts_lasso(&self, w: &LassoWord) -> bool {
        self.accepts_lasso_from(self.initial, w)
    }

    /// Same as [`Awa::accepts_lasso`] with `q` as the initial state.
    pub fn accepts_lasso_from(&self, q: StateId, w: &LassoWord) -> bool {
        game::accepts(self, q, w)
    }

    /// Language emptiness through the obligation graph.
    pub fn is_empty(&self) -> bool {
        crate::obligation::miyano_hayashi(self).is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn top(&self) -> StateId {
        self.top
    }

    pub fn bottom(&self) -> StateId {
        self.bottom
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Transition formula on the letter with index `letter` in the alphabet.
    pub fn delta(&self, q: StateId, letter: usize) -> &Pcnf {
        &self.delta[q as usize][letter]
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting_set(&self) -> StateSet {
        (0..self.num_states() as u32).filter(|&q| self.accepting[q as usize]).collect()
    }

    pub fn rank(&self, q: StateId) -> usize {
        self.rank[q as usize]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// A copy with a different initial state.
    pub fn with_initial(&self, q: StateId) -> Awa {
        let mut a = self.clone();
        a.initial = q;
        a
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph awa {\n  rankdir=LR;\n  node [shape=circle];\n");
        let _ = writeln!(s, "  init [shape=point];\n  init -> q{};", self.initial);
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  q{q} [label=\"{}\", shape={shape}];", escape(&self.names[q]));
        }
        let mut diamond = 0;
        for q in 0..self.num_states() {
            let mut groups: BTreeMap<&Pcnf, Vec<String>> = BTreeMap::new();
            for (i, p) in self.delta[q].iter().enumerate() {
                groups.entry(p).or_default().push(self.alphabet.letter_name(self.alphabet.letter(i)));
            }
            let full = groups.len() == 1;
            for (p, letters) in groups {
                let label = if full { "*".to_string() } else { letters.join(",") };
                for clause in p.clauses() {
                    if clause.len() == 1 {
                        let _ = writeln!(s, "  q{q} -> q{} [label=\"{}\"];", clause[0], escape(&label));
                    } else {
                        let _ = writeln!(s, "  c{diamond} [shape=diamond, label=\"\", width=0.15, height=0.15];");
                        let _ = writeln!(s, "  q{q} -> c{diamond} [label=\"{}\"];", escape(&label));
                        for r in clause {
                            let _ = writeln!(s, "  c{diamond} -> q{r};");
                        }
                        diamond += 1;
                    }
                }
            }
        }
        s.push_str("}\n");
        s
    }

    /// Human-readable transition table.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for q in 0..self.num_states() {
            let _ = writeln!(
                s,
                "{}{} [{}] rank {}",
                if q as u32 == self.initial { "-> " } else { "   " },
                self.names[q],
                if self.accepting[q] { "acc" } else { "rej" },
                self.rank[q]
            );
            for (i, p) in self.delta[q].iter().enumerate() {
                let _ = writeln!(s, "      {} : {}", self.alphabet.letter_name(self.alphabet.letter(i)), p.render(&self.names));
            }
        }
        s
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
