//! The canonical suffix-language tracking machine (SLTM).
//!
//! Built in two steps. The naive machine runs a lockstep subset construction
//! over the obligation graphs `G̃` (of the dual) and `G` (of the automaton);
//! each naive state is labelled by the suffix language its `G̃` vertices
//! denote. Minimization then merges naive states whose labels are equivalent
//! and gives every canonical state the union of the merged vertex sets.

mod label;

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::alphabet::{Alphabet, Letter};
use crate::awa::Awa;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::obligation::{miyano_hayashi_with_budget, ObligationGraph, VertexId};
use crate::stateset::StateSet;

pub use label::{label_of, labels_equivalent, Label, LabelOracle};

pub type SltmState = u32;

/// Deterministic, total Moore machine over the suffix languages of `L(A)`.
/// State 0 is initial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sltm {
    alphabet: Alphabet,
    delta: Vec<Vec<SltmState>>,
    neg: Vec<Vec<VertexId>>,
    pos: Vec<Vec<VertexId>>,
    labels: Vec<Label>,
}

impl Sltm {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn initial(&self) -> SltmState {
        0
    }

    /// Successor on the letter with index `letter`.
    pub fn next(&self, q: SltmState, letter: usize) -> SltmState {
        self.delta[q as usize][letter]
    }

    /// Vertices of the dual obligation graph `G̃` tracked by `q`.
    pub fn vertex_set_neg(&self, q: SltmState) -> &[VertexId] {
        &self.neg[q as usize]
    }

    /// Vertices of the obligation graph `G` tracked by `q`.
    pub fn vertex_set_pos(&self, q: SltmState) -> &[VertexId] {
        &self.pos[q as usize]
    }

    /// Vertex set of `G̃` for odd levels and of `G` for even ones.
    pub fn vertex_set(&self, q: SltmState, level: usize) -> &[VertexId] {
        if level % 2 == 1 {
            self.vertex_set_neg(q)
        } else {
            self.vertex_set_pos(q)
        }
    }

    pub fn label(&self, q: SltmState) -> &Label {
        &self.labels[q as usize]
    }

    /// State reached after the finite word `p`.
    pub fn state_after(&self, p: &[Letter]) -> Result<SltmState> {
        let mut q = self.initial();
        for &x in p {
            let i = self
                .alphabet
                .index_of(x)
                .ok_or_else(|| Error::InvalidParameter(format!("letter {x:#b} is not in the alphabet")))?;
            q = self.next(q, i);
        }
        Ok(q)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let states: Vec<_> = (0..self.len())
            .map(|q| {
                json!({
                    "id": q,
                    "label": self.labels[q].unions(),
                    "vertex_set_neg": self.neg[q],
                    "vertex_set_pos": self.pos[q],
                    "next": self.delta[q],
                })
            })
            .collect();
        json!({
            "aps": self.alphabet.aps(),
            "letters": self.alphabet.letters(),
            "initial": 0,
            "states": states,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph sltm {\n  rankdir=LR;\n  node [shape=box];\n  init [shape=point];\n  init -> s0;\n");
        for q in 0..self.len() {
            let _ = writeln!(s, "  s{q} [label=\"s{q}\\nλ = {}\"];", self.labels[q].render());
        }
        for q in 0..self.len() {
            let mut by_target: std::collections::BTreeMap<SltmState, Vec<String>> = Default::default();
            for (i, &t) in self.delta[q].iter().enumerate() {
                by_target.entry(t).or_default().push(self.alphabet.letter_name(self.alphabet.letter(i)));
            }
            for (t, names) in by_target {
                let _ = writeln!(s, "  s{q} -> s{t} [label=\"{}\"];", names.join(","));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// A state of the naive machine: the vertices of `G̃` and `G` reached by
/// the prefixes leading to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NaiveState {
    pub neg: StateSet,
    pub pos: StateSet,
}

/// Everything produced while building the canonical SLTM.
#[derive(Debug, Clone)]
pub struct SltmBuild {
    pub sltm: Sltm,
    pub dual: Awa,
    pub g_neg: ObligationGraph,
    pub g_pos: ObligationGraph,
    pub naive: Vec<NaiveState>,
    pub naive_delta: Vec<Vec<u32>>,
    /// Canonical state of every naive state.
    pub class: Vec<SltmState>,
    /// Breadth-first parent `(naive state, letter index)` of every naive state.
    pub parent: Vec<Option<(u32, usize)>>,
    pub label_checks: usize,
}

impl SltmBuild {
    /// A shortest word leading to the naive state `n`.
    pub fn witness_prefix(&self, mut n: u32) -> Vec<Letter> {
        let mut letters = Vec::new();
        while let Some((p, l)) = self.parent[n as usize] {
            letters.push(self.sltm.alphabet.letter(l));
            n = p;
        }
        letters.reverse();
        letters
    }
}

pub fn build_canonical_sltm(a: &Awa) -> Result<SltmBuild> {
    build_canonical_sltm_with_budget(a, &Budget::unlimited())
}

pub fn build_canonical_sltm_with_budget(a: &Awa, budget: &Budget) -> Result<SltmBuild> {
    let dual = a.dualize();
    let g_neg = miyano_hayashi_with_budget(&dual, budget)?;
    let g_pos = miyano_hayashi_with_budget(a, budget)?;
    let letters = a.alphabet().len();

    let mut index: HashMap<NaiveState, u32> = HashMap::new();
    let mut naive = Vec::new();
    let mut parent = Vec::new();
    let mut naive_delta: Vec<Vec<u32>> = Vec::new();
    let start = NaiveState {
        neg: StateSet::singleton(g_neg.initial()),
        pos: StateSet::singleton(g_pos.initial()),
    };
    index.insert(start.clone(), 0);
    naive.push(start);
    parent.push(None);
    let mut queue = VecDeque::from([0u32]);
    while let Some(n) = queue.pop_front() {
        let mut row = Vec::with_capacity(letters);
        for x in 0..letters {
            let image = |g: &ObligationGraph, set: &StateSet| -> StateSet {
                set.iter().flat_map(|v| g.successors(v, x).iter().copied()).collect()
            };
            let succ = NaiveState {
                neg: image(&g_neg, &naive[n as usize].neg),
                pos: image(&g_pos, &naive[n as usize].pos),
            };
            let id = match index.get(&succ) {
                Some(&id) => id,
                None => {
                    let id = naive.len() as u32;
                    index.insert(succ.clone(), id);
                    naive.push(succ);
                    parent.push(Some((n, x)));
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        naive_delta.push(row);
        budget.check(naive.len(), "building the naive SLTM")?;
    }

    let union = label::disjoint_union(a, &dual);
    let mut oracle = LabelOracle::new(&union, a.num_states());
    let mut class_labels: Vec<Label> = Vec::new();
    let mut by_label: HashMap<Label, SltmState> = HashMap::new();
    let mut class = Vec::with_capacity(naive.len());
    for state in &naive {
        let lab = label_of(state.neg.iter().map(|v| g_neg.vertex(v)))?;
        let c = match by_label.get(&lab) {
            Some(&c) => c,
            None => {
                let mut found = None;
                for (c, rep) in class_labels.iter().enumerate() {
                    if oracle.equivalent(rep, &lab, budget)? {
                        found = Some(c as SltmState);
                        break;
                    }
                }
                let c = found.unwrap_or_else(|| {
                    class_labels.push(lab.clone());
                    (class_labels.len() - 1) as SltmState
                });
                by_label.insert(lab, c);
                c
            }
        };
        class.push(c);
        budget.check_time("merging SLTM states")?;
    }

    let k = class_labels.len();
    let mut delta = vec![Vec::new(); k];
    let mut neg = vec![StateSet::new(); k];
    let mut pos = vec![StateSet::new(); k];
    for (n, state) in naive.iter().enumerate() {
        let c = class[n] as usize;
        let row: Vec<SltmState> = naive_delta[n].iter().map(|&t| class[t as usize]).collect();
        if delta[c].is_empty() {
            delta[c] = row;
        } else if delta[c] != row {
            return Err(Error::Malformed(format!(
                "merged naive states of class {c} have successors in different classes"
            )));
        }
        neg[c].union_with(&state.neg);
        pos[c].union_with(&state.pos);
    }
    let sltm = Sltm {
        alphabet: a.alphabet().clone(),
        delta,
        neg: neg.iter().map(StateSet::to_vec).collect(),
        pos: pos.iter().map(StateSet::to_vec).collect(),
        labels: class_labels,
    };
    Ok(SltmBuild {
        sltm,
        dual,
        g_neg,
        g_pos,
        naive,
        naive_delta,
        class,
        parent,
        label_checks: oracle.checks,
    })
}
