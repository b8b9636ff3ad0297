//! Obligation graphs: the breakpoint construction turning a weak alternating
//! automaton into a nondeterministic Büchi automaton.
//!
//! A vertex `(S, O)` holds the states the run currently has to satisfy and the
//! subset still owing a visit to an accepting state. On a letter every `q ∈ S`
//! independently picks a minimal model `M_q` of its transition formula;
//! `S' = ⋃ M_q`, and `O' = (⋃_{q∈O} M_q) \ F`, or `S' \ F` right after a
//! breakpoint (`O = ∅`). Vertices with `O = ∅` are accepting.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::alphabet::{Alphabet, LassoWord};
use crate::awa::{cnf, Awa, StateId};
use crate::budget::Budget;
use crate::error::Result;
use crate::scc::tarjan;
use crate::stateset::StateSet;

pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub s: StateSet,
    pub o: StateSet,
}

impl Vertex {
    pub fn is_accepting(&self) -> bool {
        self.o.is_empty()
    }

    pub fn label(&self) -> String {
        let ids = |s: &StateSet| s.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
        format!("{{{}}} | {{{}}}", ids(&self.s), ids(&self.o))
    }
}

/// Lazily expanded obligation graph with memoized per-vertex emptiness.
pub struct Explorer<'a> {
    awa: &'a Awa,
    accepting: StateSet,
    models: Vec<Vec<Option<Vec<StateSet>>>>,
    index: HashMap<Vertex, VertexId>,
    vertices: Vec<Vertex>,
    succ: Vec<Option<Vec<Vec<VertexId>>>>,
    nonempty: Vec<Option<bool>>,
}

impl<'a> Explorer<'a> {
    pub fn new(awa: &'a Awa) -> Self {
        Explorer {
            awa,
            accepting: awa.accepting_set(),
            models: vec![vec![None; awa.alphabet().len()]; awa.num_states()],
            index: HashMap::new(),
            vertices: Vec::new(),
            succ: Vec::new(),
            nonempty: Vec::new(),
        }
    }

    pub fn awa(&self) -> &Awa {
        self.awa
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v as usize]
    }

    /// Vertex id of `(S, S \ F)`, the start of the runs from all of `S`.
    pub fn start_vertex(&mut self, s: StateSet) -> VertexId {
        let o = s.difference(&self.accepting);
        self.intern(Vertex { s, o })
    }

    fn intern(&mut self, v: Vertex) -> VertexId {
        if let Some(&id) = self.index.get(&v) {
            return id;
        }
        let id = self.vertices.len() as VertexId;
        self.index.insert(v.clone(), id);
        self.vertices.push(v);
        self.succ.push(None);
        self.nonempty.push(None);
        id
    }

    fn models(&mut self, q: StateId, letter: usize) -> &[StateSet] {
        let slot = &mut self.models[q as usize][letter];
        if slot.is_none() {
            *slot = Some(cnf::minimal_transversals(&self.awa.delta(q, letter).clause_sets()));
        }
        slot.as_deref().expect("just filled")
    }

    fn step(&mut self, v: &Vertex, letter: usize) -> BTreeSet<Vertex> {
        let breakpoint = v.o.is_empty();
        let mut partial: BTreeSet<(StateSet, StateSet)> = BTreeSet::new();
        partial.insert((StateSet::new(), StateSet::new()));
        for q in v.s.iter() {
            let owes = v.o.contains(q);
            let models = self.models(q, letter).to_vec();
            let mut next = BTreeSet::new();
            for (sp, op) in &partial {
                for m in &models {
                    let s2 = sp.union(m);
                    let o2 = if owes { op.union(m) } else { op.clone() };
                    next.insert((s2, o2));
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|(s, o)| {
                let o = if breakpoint { s.difference(&self.accepting) } else { o.difference(&self.accepting) };
                Vertex { s, o }
            })
            .collect()
    }

    /// Successors of `v` per letter index, expanding `v` on first use.
    pub fn successors(&mut self, v: VertexId) -> &[Vec<VertexId>] {
        if self.succ[v as usize].is_none() {
            let vert = self.vertices[v as usize].clone();
            let mut rows = Vec::with_capacity(self.awa.alphabet().len());
            for letter in 0..self.awa.alphabet().len() {
                let targets = self.step(&vert, letter);
                let mut ids: Vec<VertexId> = targets.into_iter().map(|t| self.intern(t)).collect();
                ids.sort_unstable();
                rows.push(ids);
            }
            self.succ[v as usize] = Some(rows);
        }
        self.succ[v as usize].as_deref().expect("just expanded")
    }

    /// Expands everything reachable from `from` in breadth-first order.
    pub fn explore(&mut self, from: VertexId, budget: &Budget) -> Result<()> {
        let mut queue = VecDeque::from([from]);
        let mut seen: BTreeSet<VertexId> = BTreeSet::from([from]);
        while let Some(v) = queue.pop_front() {
            let targets: Vec<VertexId> = self.successors(v).iter().flatten().copied().collect();
            for t in targets {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
            budget.check(self.vertices.len(), "building an obligation graph")?;
        }
        Ok(())
    }

    /// Whether some word is accepted from `v`, i.e. an accepting vertex on a
    /// cycle is reachable.
    pub fn nonempty_from(&mut self, v: VertexId, budget: &Budget) -> Result<bool> {
        if let Some(b) = self.nonempty[v as usize] {
            return Ok(b);
        }
        let mut region: Vec<VertexId> = vec![v];
        let mut local: HashMap<VertexId, usize> = HashMap::from([(v, 0)]);
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < region.len() {
            let u = region[i];
            let mut out = BTreeSet::new();
            if self.nonempty[u as usize].is_none() {
                let targets: Vec<VertexId> = self.successors(u).iter().flatten().copied().collect();
                for t in targets {
                    let id = *local.entry(t).or_insert_with(|| {
                        region.push(t);
                        region.len() - 1
                    });
                    out.insert(id);
                }
            }
            edges.push(out.into_iter().collect());
            i += 1;
            budget.check(self.vertices.len(), "checking obligation-graph emptiness")?;
        }
        let sccs = tarjan(region.len(), |x| edges[x].clone());
        let mut good = vec![false; sccs.len()];
        for (c, members) in sccs.members.iter().enumerate() {
            let mut g = sccs.nontrivial[c] && members.iter().any(|&x| self.vertices[region[x] as usize].is_accepting());
            for &x in members {
                if let Some(known) = self.nonempty[region[x] as usize] {
                    g |= known;
                }
                g |= edges[x].iter().any(|&y| sccs.component[y] != c && good[sccs.component[y]]);
            }
            good[c] = g;
        }
        for (x, &u) in region.iter().enumerate() {
            self.nonempty[u as usize] = Some(good[sccs.component[x]]);
        }
        Ok(good[sccs.component[0]])
    }

    /// Freezes the explored part reachable from vertex `from`, renumbered in
    /// breadth-first order so that `from` becomes vertex 0.
    pub fn into_graph(mut self, from: VertexId, budget: &Budget) -> Result<ObligationGraph> {
        self.explore(from, budget)?;
        let mut order = vec![from];
        let mut renum: HashMap<VertexId, VertexId> = HashMap::from([(from, 0)]);
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for row in self.succ[v as usize].as_ref().expect("explored") {
                for &t in row {
                    renum.entry(t).or_insert_with(|| {
                        order.push(t);
                        (order.len() - 1) as VertexId
                    });
                }
            }
            i += 1;
        }
        let succ = order
            .iter()
            .map(|&v| {
                self.succ[v as usize]
                    .as_ref()
                    .expect("explored")
                    .iter()
                    .map(|row| {
                        let mut r: Vec<VertexId> = row.iter().map(|t| renum[t]).collect();
                        r.sort_unstable();
                        r
                    })
                    .collect()
            })
            .collect();
        let vertices: Vec<Vertex> = order.iter().map(|&v| self.vertices[v as usize].clone()).collect();
        Ok(ObligationGraph {
            alphabet: self.awa.alphabet().clone(),
            vertices,
            succ,
        })
    }
}

/// The obligation graph of an automaton, with every vertex reachable from
/// vertex 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ObligationGraph {
    alphabet: Alphabet,
    vertices: Vec<Vertex>,
    succ: Vec<Vec<Vec<VertexId>>>,
}

/// Full obligation graph of `a` from `({q0}, {q0} \ F)`.
pub fn miyano_hayashi(a: &Awa) -> ObligationGraph {
    miyano_hayashi_with_budget(a, &Budget::unlimited()).expect("unlimited budget")
}

pub fn miyano_hayashi_with_budget(a: &Awa, budget: &Budget) -> Result<ObligationGraph> {
    let mut ex = Explorer::new(a);
    let v0 = ex.start_vertex(StateSet::singleton(a.initial()));
    ex.into_graph(v0, budget)
}

impl ObligationGraph {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty_graph(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn initial(&self) -> VertexId {
        0
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v as usize]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn is_accepting(&self, v: VertexId) -> bool {
        self.vertices[v as usize].is_accepting()
    }

    /// Successors on the letter with index `letter`.
    pub fn successors(&self, v: VertexId, letter: usize) -> &[VertexId] {
        &self.succ[v as usize][letter]
    }

    fn all_successors(&self, v: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.succ[v].iter().flatten().map(|&t| t as usize).collect();
        set.into_iter().collect()
    }

    /// Whether the Büchi language is empty.
    pub fn is_empty(&self) -> bool {
        self.accepting_lasso().is_none()
    }

    /// A lasso accepted through an accepting vertex on a cycle, if any.
    pub fn accepting_lasso(&self) -> Option<LassoWord> {
        let sccs = tarjan(self.len(), |v| self.all_successors(v));
        let target = (0..self.len()).find(|&v| sccs.on_cycle(v) && self.vertices[v].is_accepting())?;
        let prefix = self.path(0, target, |_| true)?;
        let comp = sccs.component[target];
        let mut period = Vec::new();
        for letter in 0..self.alphabet.len() {
            for &t in &self.succ[target][letter] {
                if sccs.component[t as usize] == comp {
                    if let Some(back) = self.path(t as usize, target, |x| sccs.component[x] == comp) {
                        period.push(self.alphabet.letter(letter));
                        period.extend(back);
                        return LassoWord::new(prefix, period).ok();
                    }
                }
            }
        }
        None
    }

    fn path(&self, from: usize, to: usize, allowed: impl Fn(usize) -> bool) -> Option<Vec<u32>> {
        let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut letters = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (p, l) = parent[&cur];
                    letters.push(self.alphabet.letter(l));
                    cur = p;
                }
                letters.reverse();
                return Some(letters);
            }
            for letter in 0..self.alphabet.len() {
                for &t in &self.succ[v][letter] {
                    let t = t as usize;
                    if !seen[t] && allowed(t) {
                        seen[t] = true;
                        parent.insert(t, (v, letter));
                        queue.push_back(t);
                    }
                }
            }
        }
        None
    }

    /// Büchi membership of a lasso: an accepting product node on a reachable
    /// cycle of the product with the lasso positions.
    pub fn accepts_lasso(&self, w: &LassoWord) -> bool {
        let letters = w.indices(&self.alphabet).expect("lasso word over the graph's alphabet");
        let positions = w.positions();
        let mut ids: HashMap<(u32, usize), usize> = HashMap::from([((0, 0), 0)]);
        let mut nodes = vec![(0u32, 0usize)];
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let (v, pos) = nodes[i];
            let next = w.succ(pos);
            let mut out = Vec::new();
            for &t in &self.succ[v as usize][letters[pos]] {
                let id = *ids.entry((t, next)).or_insert_with(|| {
                    nodes.push((t, next));
                    nodes.len() - 1
                });
                out.push(id);
            }
            edges.push(out);
            i += 1;
        }
        debug_assert!(nodes.iter().all(|&(_, p)| p < positions));
        let sccs = tarjan(nodes.len(), |x| edges[x].clone());
        (0..nodes.len()).any(|x| sccs.on_cycle(x) && self.vertices[nodes[x].0 as usize].is_accepting())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph obligation {\n  rankdir=LR;\n  node [shape=ellipse];\n");
        let _ = writeln!(s, "  init [shape=point];\n  init -> v0;");
        for (v, vert) in self.vertices.iter().enumerate() {
            let periph = if vert.is_accepting() { 2 } else { 1 };
            let _ = writeln!(s, "  v{v} [label=\"{}\", peripheries={periph}];", vert.label());
        }
        for v in 0..self.len() {
            let mut by_target: std::collections::BTreeMap<u32, Vec<String>> = Default::default();
            for letter in 0..self.alphabet.len() {
                for &t in &self.succ[v][letter] {
                    by_target.entry(t).or_default().push(self.alphabet.letter_name(self.alphabet.letter(letter)));
                }
            }
            for (t, names) in by_target {
                let _ = writeln!(s, "  v{v} -> v{t} [label=\"{}\"];", names.join(","));
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::enumerate_lassos;
    use crate::awa::from_ltl;
    use crate::formula::{eval_lasso, parse_ltl};

    fn graph(f: &str, aps: &[&str]) -> (ObligationGraph, crate::formula::Formula, Alphabet) {
        let alpha = Alphabet::full(aps).unwrap();
        let f = parse_ltl(f, aps).unwrap().to_nnf();
        (miyano_hayashi(&from_ltl(&f, &alpha).unwrap()), f, alpha)
    }

    #[test]
    fn fg_a_agrees_with_oracle() {
        let (g, f, alpha) = graph("FG a", &["a"]);
        for w in enumerate_lassos(&alpha, 2, 3) {
            assert_eq!(g.accepts_lasso(&w), eval_lasso(&f, &w));
        }
        assert!(g.accepts_lasso(&LassoWord::parse(";{a}", &alpha).unwrap()));
        assert!(!g.accepts_lasso(&LassoWord::parse(";{a}{}", &alpha).unwrap()));
    }

    #[test]
    fn nondeterministic_automaton_gives_singletons() {
        let (g, _, _) = graph("F a", &["a"]);
        assert!(g.vertices().iter().all(|v| v.s.len() == 1));
    }

    #[test]
    fn vertex_invariants() {
        let (g, _, _) = graph("GF a -> GF b", &["a", "b"]);
        for v in g.vertices() {
            assert!(v.o.is_subset(&v.s));
        }
        assert!(g.len() <= 3usize.pow(9));
    }

    #[test]
    fn dual_of_tautology_is_empty() {
        let alpha = Alphabet::full(&["a"]).unwrap();
        let f = parse_ltl("a | !a", &["a"]).unwrap().to_nnf();
        let g = miyano_hayashi(&from_ltl(&f, &alpha).unwrap().dualize());
        assert!(g.is_empty());
        for w in enumerate_lassos(&alpha, 2, 2) {
            assert!(!g.accepts_lasso(&w));
        }
    }

    #[test]
    fn nested_next_under_eventually() {
        // per-state minimal models are needed for this one
        let alpha = Alphabet::full(&["r"]).unwrap();
        let f = parse_ltl("G X F X r", &["r"]).unwrap().to_nnf();
        let g = miyano_hayashi(&from_ltl(&f, &alpha).unwrap());
        for w in enumerate_lassos(&alpha, 2, 3) {
            assert_eq!(g.accepts_lasso(&w), eval_lasso(&f, &w), "{}", w.display(&alpha));
        }
    }

    #[test]
    fn witness_is_accepted() {
        let (g, f, _) = graph("GF a & FG !b", &["a", "b"]);
        let w = g.accepting_lasso().expect("non-empty");
        assert!(eval_lasso(&f, &w));
    }

    #[test]
    fn explorer_emptiness_memo() {
        let alpha = Alphabet::full(&["a"]).unwrap();
        let f = parse_ltl("G a & F !a", &["a"]).unwrap().to_nnf();
        let a = from_ltl(&f, &alpha).unwrap();
        let mut ex = Explorer::new(&a);
        let v = ex.start_vertex(StateSet::singleton(a.initial()));
        assert!(!ex.nonempty_from(v, &Budget::unlimited()).unwrap());
        let g = parse_ltl("G a", &["a"]).unwrap();
        let b = from_ltl(&g, &alpha).unwrap();
        let mut ex = Explorer::new(&b);
        let v = ex.start_vertex(StateSet::singleton(b.initial()));
        assert!(ex.nonempty_from(v, &Budget::unlimited()).unwrap());
    }

    #[test]
    fn dot_marks_accepting_vertices() {
        let (g, _, _) = graph("FG a", &["a"]);
        assert!(g.to_dot().contains("peripheries=2"));
    }
}
