//! The chain of co-Büchi automata, natural colors and chain verification.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::alphabet::{enumerate_lassos, Alphabet, LassoWord, Letter};
use crate::awa::Awa;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::floating::{determinize, dfw_accepts_lasso, level_product, minimize_dfw, universal_dfw, Dfw};
use crate::formula::{eval_lasso, Formula};
use crate::scc::tarjan;
use crate::sltm::{build_canonical_sltm_with_budget, Sltm, SltmBuild};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transition {
    pub letter: Letter,
    pub to: u32,
    pub accepting: bool,
}

/// History-deterministic co-Büchi automaton with transition-based acceptance.
/// States `0..sltm_states` copy the SLTM, the rest are the DFW's states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HdNcw {
    pub aps: Vec<String>,
    pub letters: Vec<Letter>,
    pub initial: u32,
    pub sltm_states: usize,
    pub transitions: Vec<Vec<Transition>>,
}

impl HdNcw {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn accepting_count(&self) -> usize {
        self.transitions.iter().flatten().filter(|t| t.accepting).count()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// Whether every state has at most one accepting transition per letter.
    pub fn accepting_part_is_deterministic(&self) -> bool {
        self.transitions.iter().all(|row| {
            let mut seen = std::collections::BTreeSet::new();
            row.iter().filter(|t| t.accepting).all(|t| seen.insert(t.letter))
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("automata serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let c: HdNcw = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        if c.initial as usize >= c.len().max(1) || c.transitions.iter().flatten().any(|t| t.to as usize >= c.len()) {
            return Err(Error::Malformed("transition to an unknown state".into()));
        }
        Ok(c)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let alpha = Alphabet::restricted(&self.aps, self.letters.clone()).ok();
        let letter_name = |x: Letter| alpha.as_ref().map_or(format!("{x:#b}"), |a| a.letter_name(x));
        let mut s = format!("digraph {name} {{\n  rankdir=LR;\n  init [shape=point];\n  init -> n{};\n", self.initial);
        for q in 0..self.len() {
            let (shape, text) = if q < self.sltm_states {
                ("box", format!("s{q}"))
            } else {
                ("circle", format!("q{}", q - self.sltm_states))
            };
            let _ = writeln!(s, "  n{q} [shape={shape}, label=\"{text}\"];");
        }
        for (q, row) in self.transitions.iter().enumerate() {
            for t in row {
                let style = if t.accepting { "solid" } else { "dashed" };
                let _ = writeln!(s, "  n{q} -> n{} [label=\"{}\", style={style}];", t.to, letter_name(t.letter));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// The HD-NCW of a floating DFW: the SLTM and the DFW side by side. Only the
/// DFW's own transitions are accepting; every other move follows the labels.
pub fn dfw_to_hd_ncw(d: &Dfw, m: &Sltm) -> HdNcw {
    let alpha = m.alphabet();
    let k = m.len() as u32;
    let mut by_label: Vec<Vec<u32>> = vec![Vec::new(); m.len()];
    for q in 0..d.len() as u32 {
        by_label[d.label(q) as usize].push(q);
    }
    let mut transitions: Vec<Vec<Transition>> = Vec::with_capacity(m.len() + d.len());
    for s in 0..k {
        let mut row = Vec::new();
        for x in 0..alpha.len() {
            let t = m.next(s, x);
            let letter = alpha.letter(x);
            row.push(Transition { letter, to: t, accepting: false });
            for &q in &by_label[t as usize] {
                row.push(Transition { letter, to: k + q, accepting: false });
            }
        }
        transitions.push(row);
    }
    for q in 0..d.len() as u32 {
        let mut row = Vec::new();
        for x in 0..alpha.len() {
            let letter = alpha.letter(x);
            let t = m.next(d.label(q), x);
            for &q2 in &by_label[t as usize] {
                row.push(Transition { letter, to: k + q2, accepting: false });
            }
            if let Some(q2) = d.next(q, x) {
                row.push(Transition { letter, to: k + q2, accepting: true });
            }
        }
        transitions.push(row);
    }
    HdNcw {
        aps: alpha.aps().to_vec(),
        letters: alpha.letters().to_vec(),
        initial: m.initial(),
        sltm_states: m.len(),
        transitions,
    }
}

/// Co-Büchi lasso membership: a reachable cycle of the product with the
/// lasso positions that uses accepting transitions only.
pub fn ncw_accepts_lasso(c: &HdNcw, w: &LassoWord) -> bool {
    if c.is_empty() {
        return false;
    }
    let npos = w.positions();
    let id = |q: u32, pos: usize| q as usize * npos + pos;
    let total = c.len() * npos;
    let mut reached = vec![false; total];
    let mut stack = vec![(c.initial, 0usize)];
    reached[id(c.initial, 0)] = true;
    while let Some((q, pos)) = stack.pop() {
        let x = w.at(pos);
        let next = w.succ(pos);
        for t in &c.transitions[q as usize] {
            if t.letter == x && !reached[id(t.to, next)] {
                reached[id(t.to, next)] = true;
                stack.push((t.to, next));
            }
        }
    }
    let sccs = tarjan(total, |node| {
        let (q, pos) = (node / npos, node % npos);
        let mut out = Vec::new();
        if reached[node] {
            let x = w.at(pos);
            let next = w.succ(pos);
            for t in &c.transitions[q] {
                if t.accepting && t.letter == x {
                    out.push(id(t.to, next));
                }
            }
        }
        out
    });
    (0..total).any(|node| reached[node] && sccs.on_cycle(node))
}

/// One level of the chain.
#[derive(Debug, Clone)]
pub struct Level {
    pub dfw: Dfw,
    pub ncw: HdNcw,
    pub nfw_states: usize,
    pub determinized_states: usize,
}

/// The chain `A¹ ⊃ … ⊃ Aᵏ` of a language, sharing one SLTM.
pub struct Cocoa {
    pub formula: Option<String>,
    pub awa: Awa,
    pub build: SltmBuild,
    pub universal: Dfw,
    pub levels: Vec<Level>,
}

impl Cocoa {
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    pub fn sltm(&self) -> &Sltm {
        &self.build.sltm
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.awa.alphabet()
    }

    /// Level `l` as a DFW; level 0 is the universal one.
    pub fn dfw(&self, l: usize) -> &Dfw {
        if l == 0 {
            &self.universal
        } else {
            &self.levels[l - 1].dfw
        }
    }

    pub fn level_accepts(&self, l: usize, w: &LassoWord) -> bool {
        dfw_accepts_lasso(self.dfw(l), self.sltm(), w)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<_> = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                json!({
                    "level": i + 1,
                    "nfw_states": l.nfw_states,
                    "determinized_states": l.determinized_states,
                    "dfw": l.dfw.to_json(),
                    "hd_ncw": l.ncw.to_json(),
                })
            })
            .collect();
        json!({
            "formula": self.formula,
            "aps": self.alphabet().aps(),
            "letters": self.alphabet().letters(),
            "sltm": self.sltm().to_json(),
            "k": self.k(),
            "levels": levels,
        })
    }

    /// A copy with one DFW transition of level `l` removed, together with the
    /// HD-NCW rebuilt from it. The transition is the first one whose removal
    /// changes the level's language on lassos within the bounds, so the
    /// mutant is never equivalent to the original.
    pub fn drop_accepting(&self, l: usize, prefix: usize, period: usize) -> Option<Cocoa> {
        let level = self.levels.get(l.checked_sub(1)?)?;
        let words = enumerate_lassos(self.alphabet(), prefix, period);
        let dfw = level.dfw.transitions().into_iter().find_map(|(q, x, _)| {
            let d = level.dfw.without_transition(q, x);
            words
                .par_iter()
                .any(|w| dfw_accepts_lasso(&d, self.sltm(), w) != dfw_accepts_lasso(&level.dfw, self.sltm(), w))
                .then_some(d)
        })?;
        let ncw = dfw_to_hd_ncw(&dfw, self.sltm());
        let mut levels = self.levels.clone();
        levels[l - 1] = Level {
            dfw,
            ncw,
            ..levels[l - 1].clone()
        };
        Some(Cocoa {
            formula: self.formula.clone(),
            awa: self.awa.clone(),
            build: self.build.clone(),
            universal: self.universal.clone(),
            levels,
        })
    }
}

pub fn build_chain(a: &Awa) -> Result<Cocoa> {
    build_chain_with_budget(a, &Budget::default())
}

pub fn build_chain_with_budget(a: &Awa, budget: &Budget) -> Result<Cocoa> {
    let build = build_canonical_sltm_with_budget(a, budget)?;
    chain_from_sltm(a, build, budget)
}

/// The level loop on top of an SLTM built from `a`.
pub fn chain_from_sltm(a: &Awa, build: SltmBuild, budget: &Budget) -> Result<Cocoa> {
    let universal = universal_dfw(&build.sltm);
    let mut levels: Vec<Level> = Vec::new();
    for l in 1.. {
        budget.check_time(&format!("level {l}"))?;
        let prev = levels.last().map_or(&universal, |lv| &lv.dfw);
        let nfw = level_product(prev, &build.sltm, l, &build.g_neg, &build.g_pos);
        budget.check(nfw.len(), &format!("level {l} product"))?;
        let graph = if l % 2 == 1 { &build.g_neg } else { &build.g_pos };
        let det = determinize(&nfw, prev.len(), graph.len(), budget)?;
        let dfw = minimize_dfw(&det);
        if !dfw.is_label_consistent(&build.sltm) {
            return Err(Error::Malformed(format!("level {l} breaks label consistency")));
        }
        if dfw.is_empty() {
            break;
        }
        let ncw = dfw_to_hd_ncw(&dfw, &build.sltm);
        levels.push(Level {
            nfw_states: nfw.len(),
            determinized_states: det.len(),
            dfw,
            ncw,
        });
    }
    Ok(Cocoa {
        formula: None,
        awa: a.clone(),
        build,
        universal,
        levels,
    })
}

/// The largest level accepting `w`, or 0.
pub fn natural_color(chain: &Cocoa, w: &LassoWord) -> usize {
    (1..=chain.k()).rev().find(|&l| chain.level_accepts(l, w)).unwrap_or(0)
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub word: String,
    pub color: usize,
    pub in_language: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub lassos: usize,
    pub counterexamples: usize,
    pub monotonicity_violations: usize,
    pub ncw_disagreements: usize,
    pub color_histogram: Vec<usize>,
    pub first_counterexample: Option<Counterexample>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0 && self.monotonicity_violations == 0 && self.ncw_disagreements == 0
    }
}

/// Checks `w ∈ L(f) ⟺ color(w) even`, monotonicity of the levels and agreement
/// of every HD-NCW with its DFW on all bounded lassos.
pub fn verify_chain(chain: &Cocoa, f: &Formula, prefix: usize, period: usize) -> VerifyReport {
    let start = Instant::now();
    let alpha = chain.alphabet();
    let words = enumerate_lassos(alpha, prefix, period);
    struct Outcome {
        color: usize,
        in_language: bool,
        monotone: bool,
        ncw_agree: bool,
    }
    let outcomes: Vec<Outcome> = words
        .par_iter()
        .map(|w| {
            let accepted: Vec<bool> = (1..=chain.k()).map(|l| chain.level_accepts(l, w)).collect();
            let color = accepted.iter().rposition(|&b| b).map_or(0, |i| i + 1);
            Outcome {
                color,
                in_language: eval_lasso(f, w),
                monotone: accepted.windows(2).all(|p| p[0] || !p[1]),
                ncw_agree: chain
                    .levels
                    .iter()
                    .zip(&accepted)
                    .all(|(lv, &b)| ncw_accepts_lasso(&lv.ncw, w) == b),
            }
        })
        .collect();
    let mut histogram = vec![0; chain.k() + 1];
    for o in &outcomes {
        histogram[o.color] += 1;
    }
    let bad = |o: &Outcome| o.color.is_multiple_of(2) != o.in_language;
    VerifyReport {
        lassos: words.len(),
        counterexamples: outcomes.iter().filter(|o| bad(o)).count(),
        monotonicity_violations: outcomes.iter().filter(|o| !o.monotone).count(),
        ncw_disagreements: outcomes.iter().filter(|o| !o.ncw_agree).count(),
        color_histogram: histogram,
        first_counterexample: words.iter().zip(&outcomes).find(|(_, o)| bad(o)).map(|(w, o)| Counterexample {
            word: w.display(alpha),
            color: o.color,
            in_language: o.in_language,
        }),
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::awa::from_ltl;
    use crate::formula::parse_ltl;

    fn chain(f: &str, aps: &[&str]) -> (Cocoa, Formula) {
        let alpha = Alphabet::full(aps).unwrap();
        let phi = parse_ltl(f, aps).unwrap().to_nnf();
        (build_chain(&from_ltl(&phi, &alpha).unwrap()).unwrap(), phi)
    }

    #[test]
    fn chain_lengths() {
        assert_eq!(chain("G a", &["a"]).0.k(), 1);
        assert_eq!(chain("FG a", &["a"]).0.k(), 2);
        assert_eq!(chain("GF a -> GF b", &["a", "b"]).0.k(), 2);
        assert_eq!(chain("a | !a", &["a"]).0.k(), 0);
    }

    #[test]
    fn colors() {
        let (c, _) = chain("FG a", &["a"]);
        let w = |s| LassoWord::parse(s, c.alphabet()).unwrap();
        assert_eq!(natural_color(&c, &w("{a};{a}")), 2);
        assert_eq!(natural_color(&c, &w(";{a}{}")), 1);
        let (g, _) = chain("G a", &["a"]);
        assert_eq!(natural_color(&g, &LassoWord::parse(";{a}", g.alphabet()).unwrap()), 0);
    }

    #[test]
    fn hd_ncw_shape() {
        let (c, _) = chain("G a", &["a"]);
        let lv = &c.levels[0];
        assert_eq!(lv.ncw.accepting_count(), lv.dfw.num_transitions());
        assert!(lv.ncw.accepting_part_is_deterministic());
        let w = |s| LassoWord::parse(s, c.alphabet()).unwrap();
        assert!(ncw_accepts_lasso(&lv.ncw, &w(";{}")));
        assert!(!ncw_accepts_lasso(&lv.ncw, &w(";{a}")));
        let empty = dfw_to_hd_ncw(&Dfw::empty(c.alphabet().len()), c.sltm());
        assert_eq!(empty.len(), c.sltm().len());
        assert_eq!(empty.accepting_count(), 0);
        assert!(!ncw_accepts_lasso(&empty, &w(";{}")));
    }

    #[test]
    fn verification_and_mutation() {
        for (f, aps) in [("GF a -> GF b", vec!["a", "b"]), ("FG a | GF b", vec!["a", "b"]), ("true", vec!["a"])] {
            let (c, phi) = chain(f, &aps);
            let r = verify_chain(&c, &phi, 2, 3);
            assert!(r.passed(), "{f}: {r:?}");
            if c.k() > 0 {
                let m = c.drop_accepting(1, 2, 3).expect("a non-redundant transition");
                assert!(verify_chain(&m, &phi, 2, 3).counterexamples > 0, "{f}");
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let (c, _) = chain("FG a", &["a"]);
        let ncw = &c.levels[1].ncw;
        assert_eq!(&HdNcw::from_json(&ncw.to_json()).unwrap(), ncw);
        assert_eq!(c.to_json()["k"], 2);
        assert!(c.levels[0].ncw.to_dot("l1").contains("style=dashed"));
    }
}
