//! Floating automata over an SLTM.
//!
//! A floating automaton is a partial automaton whose states carry an SLTM
//! state `f(q)` and whose transitions respect it: `f(δ(q, x)) = δS(f(q), x)`.
//! A word is accepted if, at some moment `m`, a run can jump in at a state
//! labelled with the SLTM state reached on the first `m` letters and then
//! continue forever.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::json;

use crate::alphabet::{LassoWord, Letter};
use crate::budget::Budget;
use crate::error::Result;
use crate::obligation::{ObligationGraph, VertexId};
use crate::scc::tarjan;
use crate::sltm::{Sltm, SltmState};
use crate::stateset::StateSet;

pub type FloatState = u32;

/// Where a level state comes from: a state of the previous level's DFW and
/// obligation-graph vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origin {
    pub prev: Option<FloatState>,
    pub vertices: Vec<VertexId>,
}

/// Deterministic floating automaton with a partial transition function
/// indexed by letter index.
#[derive(Debug, Clone, PartialEq)]
pub struct Dfw {
    letters: usize,
    labels: Vec<SltmState>,
    origin: Vec<Origin>,
    delta: Vec<Vec<Option<FloatState>>>,
}

/// Nondeterministic floating automaton from the level product.
#[derive(Debug, Clone, PartialEq)]
pub struct Nfw {
    letters: usize,
    labels: Vec<SltmState>,
    origin: Vec<(FloatState, VertexId)>,
    delta: Vec<Vec<Vec<FloatState>>>,
}

impl Dfw {
    pub fn empty(letters: usize) -> Self {
        Dfw {
            letters,
            labels: Vec::new(),
            origin: Vec::new(),
            delta: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Emptiness: every state left after transient removal lies on a cycle and
    /// every SLTM state is reachable, so any state yields an accepted word.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn label(&self, q: FloatState) -> SltmState {
        self.labels[q as usize]
    }

    pub fn origin(&self, q: FloatState) -> &Origin {
        &self.origin[q as usize]
    }

    pub fn next(&self, q: FloatState, letter: usize) -> Option<FloatState> {
        self.delta[q as usize][letter]
    }

    /// All transitions `(source, letter index, target)` in order.
    pub fn transitions(&self) -> Vec<(FloatState, usize, FloatState)> {
        let mut out = Vec::new();
        for (q, row) in self.delta.iter().enumerate() {
            for (x, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    out.push((q as FloatState, x, *t));
                }
            }
        }
        out
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().flatten().filter(|t| t.is_some()).count()
    }

    /// A copy without the transition `(q, letter)`.
    pub fn without_transition(&self, q: FloatState, letter: usize) -> Dfw {
        let mut d = self.clone();
        d.delta[q as usize][letter] = None;
        d
    }

    /// Checks `f(δ(q, x)) = δS(f(q), x)` on every transition.
    pub fn is_label_consistent(&self, m: &Sltm) -> bool {
        self.transitions()
            .into_iter()
            .all(|(q, x, t)| self.label(t) == m.next(self.label(q), x))
    }

    /// Whether every state and transition lies inside one non-trivial SCC.
    pub fn is_transient_free(&self) -> bool {
        let sccs = tarjan(self.len(), |q| self.delta[q].iter().flatten().map(|&t| t as usize).collect::<Vec<_>>());
        (0..self.len()).all(|q| sccs.on_cycle(q))
            && self
                .transitions()
                .into_iter()
                .all(|(q, _, t)| sccs.component[q as usize] == sccs.component[t as usize])
    }

    pub fn to_json(&self) -> serde_json::Value {
        let states: Vec<_> = (0..self.len())
            .map(|q| {
                json!({
                    "id": q,
                    "sltm": self.labels[q],
                    "prev": self.origin[q].prev,
                    "vertices": self.origin[q].vertices,
                    "next": self.delta[q],
                })
            })
            .collect();
        json!({ "states": states })
    }

    pub fn to_dot(&self, m: &Sltm, name: &str) -> String {
        let mut s = format!("digraph {name} {{\n  rankdir=LR;\n  node [shape=circle];\n");
        for q in 0..self.len() {
            let prev = self.origin[q].prev.map_or("-".to_string(), |p| p.to_string());
            let verts = self.origin[q].vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            let _ = writeln!(
                s,
                "  q{q} [label=\"q{q}\\nprev {prev}\\nV {{{verts}}}\\ns{}\"];",
                self.labels[q]
            );
        }
        for q in 0..self.len() {
            let mut by_target: std::collections::BTreeMap<FloatState, Vec<String>> = Default::default();
            for (x, t) in self.delta[q].iter().enumerate() {
                if let Some(t) = t {
                    by_target.entry(*t).or_default().push(m.alphabet().letter_name(m.alphabet().letter(x)));
                }
            }
            for (t, names) in by_target {
                let _ = writeln!(s, "  q{q} -> q{t} [label=\"{}\"];", names.join(","));
            }
        }
        s.push_str("}\n");
        s
    }
}

impl Nfw {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, q: FloatState) -> SltmState {
        self.labels[q as usize]
    }

    pub fn origin(&self, q: FloatState) -> (FloatState, VertexId) {
        self.origin[q as usize]
    }

    pub fn successors(&self, q: FloatState, letter: usize) -> &[FloatState] {
        &self.delta[q as usize][letter]
    }

    pub fn is_label_consistent(&self, m: &Sltm) -> bool {
        (0..self.len()).all(|q| {
            (0..self.letters).all(|x| {
                self.delta[q][x]
                    .iter()
                    .all(|&t| self.labels[t as usize] == m.next(self.labels[q], x))
            })
        })
    }

    pub fn is_transient_free(&self) -> bool {
        let sccs = tarjan(self.len(), |q| self.delta[q].iter().flatten().map(|&t| t as usize).collect::<Vec<_>>());
        (0..self.len()).all(|q| {
            sccs.on_cycle(q)
                && self.delta[q]
                    .iter()
                    .flatten()
                    .all(|&t| sccs.component[t as usize] == sccs.component[q])
        })
    }
}

/// Minimal DFW with the universal language: the SLTM itself, minimized.
pub fn universal_dfw(m: &Sltm) -> Dfw {
    let d = Dfw {
        letters: m.alphabet().len(),
        labels: (0..m.len() as SltmState).collect(),
        origin: vec![
            Origin {
                prev: None,
                vertices: Vec::new()
            };
            m.len()
        ],
        delta: (0..m.len() as SltmState)
            .map(|q| (0..m.alphabet().len()).map(|x| Some(m.next(q, x))).collect())
            .collect(),
    };
    minimize_dfw(&d)
}

/// The unabridged product of `prev` with the level's obligation graph (the
/// dual one on odd levels), restricted to SCCs that contain an accepting
/// vertex, with transient states and transitions removed.
pub fn level_product(prev: &Dfw, m: &Sltm, level: usize, g_neg: &ObligationGraph, g_pos: &ObligationGraph) -> Nfw {
    let g = if level % 2 == 1 { g_neg } else { g_pos };
    let mut ids: HashMap<(FloatState, VertexId), FloatState> = HashMap::new();
    let mut states: Vec<(FloatState, VertexId)> = Vec::new();
    for q in 0..prev.len() as FloatState {
        for &v in m.vertex_set(prev.label(q), level) {
            ids.insert((q, v), states.len() as FloatState);
            states.push((q, v));
        }
    }
    let delta: Vec<Vec<Vec<FloatState>>> = states
        .iter()
        .map(|&(q, v)| {
            (0..prev.letters)
                .map(|x| match prev.next(q, x) {
                    None => Vec::new(),
                    Some(q2) => {
                        let mut out: Vec<FloatState> = g
                            .successors(v, x)
                            .iter()
                            .map(|&v2| {
                                *ids.get(&(q2, v2))
                                    .expect("successor vertices are tracked by the successor SLTM state")
                            })
                            .collect();
                        out.sort_unstable();
                        out
                    }
                })
                .collect()
        })
        .collect();
    let sccs = tarjan(states.len(), |s| delta[s].iter().flatten().map(|&t| t as usize).collect::<Vec<_>>());
    let keep_component: Vec<bool> = (0..sccs.len())
        .map(|c| sccs.nontrivial[c] && sccs.members[c].iter().any(|&s| g.is_accepting(states[s].1)))
        .collect();
    let kept: Vec<usize> = (0..states.len()).filter(|&s| keep_component[sccs.component[s]]).collect();
    let renum: HashMap<usize, FloatState> = kept.iter().enumerate().map(|(i, &s)| (s, i as FloatState)).collect();
    Nfw {
        letters: prev.letters,
        labels: kept.iter().map(|&s| prev.label(states[s].0)).collect(),
        origin: kept.iter().map(|&s| states[s]).collect(),
        delta: kept
            .iter()
            .map(|&s| {
                delta[s]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .filter(|&&t| sccs.component[t as usize] == sccs.component[s])
                            .map(|&t| renum[&(t as usize)])
                            .collect()
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Subset construction from every singleton, with subsets collapsed to
/// `(previous-level state, vertex set)` and shared between starting points.
/// `vertex_count` is the size of the obligation graph the level used.
pub fn determinize(n: &Nfw, prev_len: usize, vertex_count: usize, budget: &Budget) -> Result<Dfw> {
    let mut ids: HashMap<(FloatState, Vec<VertexId>), FloatState> = HashMap::new();
    let mut members: Vec<StateSet> = Vec::new();
    let mut origin: Vec<Origin> = Vec::new();
    let mut labels: Vec<SltmState> = Vec::new();
    let mut delta: Vec<Vec<Option<FloatState>>> = Vec::new();
    let key = |set: &StateSet| -> (FloatState, Vec<VertexId>) {
        let prevs: BTreeSet<FloatState> = set.iter().map(|s| n.origin[s as usize].0).collect();
        assert_eq!(prevs.len(), 1, "subsets share their previous-level state");
        let verts: BTreeSet<VertexId> = set.iter().map(|s| n.origin[s as usize].1).collect();
        (*prevs.iter().next().expect("non-empty"), verts.into_iter().collect())
    };
    let mut intern = |set: StateSet,
                      members: &mut Vec<StateSet>,
                      origin: &mut Vec<Origin>,
                      labels: &mut Vec<SltmState>,
                      queue: &mut VecDeque<FloatState>|
     -> FloatState {
        let k = key(&set);
        if let Some(&id) = ids.get(&k) {
            return id;
        }
        let id = members.len() as FloatState;
        labels.push(n.labels[set.iter().next().expect("non-empty") as usize]);
        origin.push(Origin {
            prev: Some(k.0),
            vertices: k.1.clone(),
        });
        ids.insert(k, id);
        members.push(set);
        queue.push_back(id);
        id
    };
    for start in 0..n.len() as FloatState {
        let mut queue = VecDeque::new();
        intern(StateSet::singleton(start), &mut members, &mut origin, &mut labels, &mut queue);
        while let Some(d) = queue.pop_front() {
            let row: Vec<Option<FloatState>> = (0..n.letters)
                .map(|x| {
                    let image: StateSet = members[d as usize]
                        .iter()
                        .flat_map(|s| n.delta[s as usize][x].iter().copied())
                        .collect();
                    if image.is_empty() {
                        None
                    } else {
                        Some(intern(image, &mut members, &mut origin, &mut labels, &mut queue))
                    }
                })
                .collect();
            if delta.len() <= d as usize {
                delta.resize(d as usize + 1, Vec::new());
            }
            delta[d as usize] = row;
            budget.check(members.len(), "determinizing a level")?;
        }
    }
    let bound = (prev_len as f64).powi(2) * 2f64.powf(vertex_count as f64) * vertex_count as f64;
    assert!(
        members.len() as f64 <= bound,
        "{} determinized states exceed the bound {bound}",
        members.len()
    );
    Ok(Dfw {
        letters: n.letters,
        labels,
        origin,
        delta,
    })
}

fn strip_transients(d: &Dfw) -> Dfw {
    let sccs = tarjan(d.len(), |q| d.delta[q].iter().flatten().map(|&t| t as usize).collect::<Vec<_>>());
    let kept: Vec<usize> = (0..d.len()).filter(|&q| sccs.on_cycle(q)).collect();
    let renum: HashMap<usize, FloatState> = kept.iter().enumerate().map(|(i, &q)| (q, i as FloatState)).collect();
    Dfw {
        letters: d.letters,
        labels: kept.iter().map(|&q| d.labels[q]).collect(),
        origin: kept.iter().map(|&q| d.origin[q].clone()).collect(),
        delta: kept
            .iter()
            .map(|&q| {
                d.delta[q]
                    .iter()
                    .map(|t| {
                        t.filter(|&t| sccs.component[t as usize] == sccs.component[q])
                            .map(|t| renum[&(t as usize)])
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Moore refinement starting from the partition by label; an undefined
/// successor counts as its own class. Returns the class of every state,
/// numbered by first occurrence.
fn refine(d: &Dfw) -> Vec<u32> {
    let renumber = |keys: Vec<Vec<i64>>| -> Vec<u32> {
        let mut map: HashMap<Vec<i64>, u32> = HashMap::new();
        keys.into_iter()
            .map(|k| {
                let next = map.len() as u32;
                *map.entry(k).or_insert(next)
            })
            .collect()
    };
    let mut class = renumber((0..d.len()).map(|q| vec![d.labels[q] as i64]).collect());
    loop {
        let keys: Vec<Vec<i64>> = (0..d.len())
            .map(|q| {
                let mut k = vec![class[q] as i64];
                k.extend(d.delta[q].iter().map(|t| t.map_or(-1, |t| class[t as usize] as i64)));
                k
            })
            .collect();
        let next = renumber(keys);
        let before = class.iter().collect::<BTreeSet<_>>().len();
        let after = next.iter().collect::<BTreeSet<_>>().len();
        class = next;
        if before == after {
            return class;
        }
    }
}

/// Language-preserving reduction: transient parts removed, then states with
/// equal labels and equal partial run trees merged, repeated to a fixpoint.
pub fn minimize_dfw(d: &Dfw) -> Dfw {
    let mut cur = strip_transients(d);
    loop {
        let class = refine(&cur);
        let k = class.iter().copied().max().map_or(0, |c| c as usize + 1);
        let mut rep: Vec<Option<usize>> = vec![None; k];
        for (q, &c) in class.iter().enumerate() {
            if rep[c as usize].is_none() {
                rep[c as usize] = Some(q);
            }
        }
        let quotient = Dfw {
            letters: cur.letters,
            labels: rep.iter().map(|r| cur.labels[r.expect("class has a member")]).collect(),
            origin: rep.iter().map(|r| cur.origin[r.expect("class has a member")].clone()).collect(),
            delta: rep
                .iter()
                .map(|r| {
                    cur.delta[r.expect("class has a member")]
                        .iter()
                        .map(|t| t.map(|t| class[t as usize]))
                        .collect()
                })
                .collect(),
        };
        let next = strip_transients(&quotient);
        if next.len() == cur.len() && next.num_transitions() == cur.num_transitions() {
            return next;
        }
        cur = next;
    }
}

/// SLTM states along `w`, as `(folded position, SLTM state)` pairs for every
/// moment until the pair sequence repeats.
pub(crate) fn sltm_track(m: &Sltm, w: &LassoWord) -> Vec<(usize, SltmState)> {
    let letters = w.indices(m.alphabet()).expect("lasso word over the SLTM's alphabet");
    let mut seen: HashMap<(usize, SltmState), ()> = HashMap::new();
    let mut out = Vec::new();
    let (mut pos, mut s) = (0usize, m.initial());
    while seen.insert((pos, s), ()).is_none() {
        out.push((pos, s));
        s = m.next(s, letters[pos]);
        pos = w.succ(pos);
    }
    out
}

/// Whether some jump-in yields an infinite run.
pub fn dfw_accepts_lasso(d: &Dfw, m: &Sltm, w: &LassoWord) -> bool {
    if d.is_empty() {
        return false;
    }
    let letters = w.indices(m.alphabet()).expect("lasso word over the SLTM's alphabet");
    let mut by_label: HashMap<SltmState, Vec<FloatState>> = HashMap::new();
    for q in 0..d.len() as FloatState {
        by_label.entry(d.label(q)).or_default().push(q);
    }
    let mut alive: HashMap<(FloatState, usize), bool> = HashMap::new();
    for (pos, s) in sltm_track(m, w) {
        for &q in by_label.get(&s).map(Vec::as_slice).unwrap_or(&[]) {
            if run_is_infinite(d, &letters, w, q, pos, &mut alive) {
                return true;
            }
        }
    }
    false
}

fn run_is_infinite(
    d: &Dfw,
    letters: &[usize],
    w: &LassoWord,
    q: FloatState,
    pos: usize,
    alive: &mut HashMap<(FloatState, usize), bool>,
) -> bool {
    let mut path: Vec<(FloatState, usize)> = Vec::new();
    let mut on_path: HashMap<(FloatState, usize), ()> = HashMap::new();
    let (mut q, mut pos) = (q, pos);
    let verdict = loop {
        if let Some(&b) = alive.get(&(q, pos)) {
            break b;
        }
        if on_path.insert((q, pos), ()).is_some() {
            break true;
        }
        path.push((q, pos));
        match d.next(q, letters[pos]) {
            None => break false,
            Some(t) => {
                q = t;
                pos = w.succ(pos);
            }
        }
    };
    for node in path {
        alive.insert(node, verdict);
    }
    verdict
}

/// Test oracle: floating acceptance of an NFW through the product with the
/// lasso positions.
pub fn nfw_accepts_lasso(n: &Nfw, m: &Sltm, w: &LassoWord) -> bool {
    let letters = w.indices(m.alphabet()).expect("lasso word over the SLTM's alphabet");
    let mut ids: HashMap<(FloatState, usize), usize> = HashMap::new();
    let mut nodes: Vec<(FloatState, usize)> = Vec::new();
    let mut starts = Vec::new();
    for (pos, s) in sltm_track(m, w) {
        for q in 0..n.len() as FloatState {
            if n.label(q) == s {
                let id = *ids.entry((q, pos)).or_insert_with(|| {
                    nodes.push((q, pos));
                    nodes.len() - 1
                });
                starts.push(id);
            }
        }
    }
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (q, pos) = nodes[i];
        let next = w.succ(pos);
        let mut out = Vec::new();
        for &t in n.successors(q, letters[pos]) {
            let id = *ids.entry((t, next)).or_insert_with(|| {
                nodes.push((t, next));
                nodes.len() - 1
            });
            out.push(id);
        }
        edges.push(out);
        i += 1;
    }
    let sccs = tarjan(nodes.len(), |x| edges[x].clone());
    let mut alive = vec![false; sccs.len()];
    for c in 0..sccs.len() {
        alive[c] = sccs.nontrivial[c]
            || sccs.members[c]
                .iter()
                .any(|&x| edges[x].iter().any(|&y| sccs.component[y] != c && alive[sccs.component[y]]));
    }
    starts.into_iter().any(|x| alive[sccs.component[x]])
}

/// Transitions usable after reading `p`: states reachable by a run that
/// jumped in at some moment of `p`, then every transition reachable from them.
pub fn reachable_transitions(d: &Dfw, m: &Sltm, p: &[Letter]) -> BTreeSet<(FloatState, usize, FloatState)> {
    let idx: Vec<usize> = p
        .iter()
        .map(|&x| m.alphabet().index_of(x).expect("letter in the alphabet"))
        .collect();
    let mut current: BTreeSet<FloatState> = BTreeSet::new();
    let mut s = m.initial();
    for &x in &idx {
        current.extend((0..d.len() as FloatState).filter(|&q| d.label(q) == s));
        current = current.iter().filter_map(|&q| d.next(q, x)).collect();
        s = m.next(s, x);
    }
    current.extend((0..d.len() as FloatState).filter(|&q| d.label(q) == s));
    let mut seen = current.clone();
    let mut queue: VecDeque<FloatState> = current.into_iter().collect();
    let mut out = BTreeSet::new();
    while let Some(q) = queue.pop_front() {
        for x in 0..d.letters {
            if let Some(t) = d.next(q, x) {
                out.insert((q, x, t));
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
    }
    out
}
