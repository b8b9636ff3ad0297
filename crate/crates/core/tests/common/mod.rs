#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use cocoa_core::alphabet::{enumerate_lassos, words_of_length};
use cocoa_core::awa::{from_ltl, Awa};
use cocoa_core::budget::Budget;
use cocoa_core::cocoa::{build_chain, ncw_accepts_lasso, Cocoa};
use cocoa_core::fixtures::{random_corpus, GoldenChain, CORPUS_APS, CORPUS_SEED, FG_A_OR_GF_B, GOLDEN_CHAINS};
use cocoa_core::floating::{
    determinize, dfw_accepts_lasso, level_product, minimize_dfw, nfw_accepts_lasso, reachable_transitions,
};
use cocoa_core::formula::{eval_lasso, parse_ltl};
use cocoa_core::obligation::miyano_hayashi;
use cocoa_core::sltm::labels_equivalent;
use cocoa_core::stateset::StateSet;
use cocoa_core::{Alphabet, Formula, LassoWord, Letter};

pub const PREFIX: usize = 2;
pub const PERIOD: usize = 3;

pub struct Case {
    pub name: String,
    pub formula: Formula,
    pub alphabet: Alphabet,
}

impl Case {
    pub fn new(text: &str, aps: &[&str]) -> Case {
        Case {
            name: text.to_string(),
            formula: parse_ltl(text, aps).unwrap().to_nnf(),
            alphabet: Alphabet::full(aps).unwrap(),
        }
    }

    pub fn awa(&self) -> Awa {
        from_ltl(&self.formula, &self.alphabet).unwrap()
    }

    pub fn chain(&self) -> Cocoa {
        build_chain(&self.awa()).unwrap()
    }

    pub fn lassos(&self) -> Vec<LassoWord> {
        enumerate_lassos(&self.alphabet, PREFIX, PERIOD)
    }
}

/// The golden fixtures followed by the sample automaton's formula.
pub fn fixture_cases() -> Vec<Case> {
    let mut cases: Vec<Case> = GOLDEN_CHAINS.iter().map(|g| Case::new(g.formula, g.aps)).collect();
    cases.push(Case::new(FG_A_OR_GF_B, &["a", "b"]));
    cases
}

pub fn random_cases(count: usize, max_size: usize) -> Vec<Case> {
    let aps: Vec<String> = CORPUS_APS.iter().map(|s| s.to_string()).collect();
    let alphabet = Alphabet::full(&CORPUS_APS).unwrap();
    random_corpus(CORPUS_SEED, count, max_size)
        .into_iter()
        .map(|f| Case {
            name: f.display(&aps).to_string(),
            formula: f,
            alphabet: alphabet.clone(),
        })
        .collect()
}

fn fail<T>(case: &str, msg: impl std::fmt::Display) -> Result<T, String> {
    Err(format!("{case}: {msg}"))
}

/// Chain length and every level language against its formula.
pub fn check_golden(g: &GoldenChain) -> Result<(), String> {
    let case = Case::new(g.formula, g.aps);
    let chain = case.chain();
    if chain.k() != g.levels.len() {
        return fail(g.name, format!("{} levels, expected {}", chain.k(), g.levels.len()));
    }
    let level_formulas: Vec<Formula> = g.levels.iter().map(|t| parse_ltl(t, g.aps).unwrap()).collect();
    for w in case.lassos() {
        for (i, lf) in level_formulas.iter().enumerate() {
            if chain.level_accepts(i + 1, &w) != eval_lasso(lf, &w) {
                return fail(
                    g.name,
                    format!("level {} disagrees with `{}` on {}", i + 1, g.levels[i], w.display(&case.alphabet)),
                );
            }
        }
    }
    Ok(())
}

/// `w ∈ L ⟺ color(w) even` on every bounded lasso; returns the lasso count.
pub fn check_max_even(case: &Case, chain: &Cocoa) -> Result<usize, String> {
    let r = cocoa_core::cocoa::verify_chain(chain, &case.formula, PREFIX, PERIOD);
    match &r.first_counterexample {
        Some(c) => fail(
            &case.name,
            format!("{} counterexamples, first {} with color {}", r.counterexamples, c.word, c.color),
        ),
        None => Ok(r.lassos),
    }
}

pub fn check_awa_vs_eval(case: &Case) -> Result<(), String> {
    let a = case.awa();
    for w in case.lassos() {
        if a.accepts_lasso(&w) != eval_lasso(&case.formula, &w) {
            return fail(&case.name, format!("automaton disagrees on {}", w.display(&case.alphabet)));
        }
    }
    Ok(())
}

/// Both obligation graphs against their alternating automata.
pub fn check_miyano_hayashi(case: &Case) -> Result<(), String> {
    let a = case.awa();
    let d = a.dualize();
    let (g, gd) = (miyano_hayashi(&a), miyano_hayashi(&d));
    for w in case.lassos() {
        if g.accepts_lasso(&w) != a.accepts_lasso(&w) || gd.accepts_lasso(&w) != d.accepts_lasso(&w) {
            return fail(&case.name, format!("obligation graph disagrees on {}", w.display(&case.alphabet)));
        }
        if d.accepts_lasso(&w) == a.accepts_lasso(&w) {
            return fail(&case.name, format!("dual is not the complement on {}", w.display(&case.alphabet)));
        }
    }
    Ok(())
}

/// Per-level sizes gathered while replaying the construction.
pub struct LevelReplay {
    pub nfw_states: usize,
    pub determinized_states: usize,
    pub bound: f64,
}

/// Replays every level and the first empty one: the NFW is transient-free and
/// label-consistent, determinization respects the size bound, and the NFW,
/// determinized and minimized automata agree on every bounded lasso.
pub fn check_levels(case: &Case, chain: &Cocoa) -> Result<Vec<LevelReplay>, String> {
    let b = &chain.build;
    let lassos = case.lassos();
    let mut out = Vec::new();
    for l in 1..=chain.k() + 1 {
        let prev = chain.dfw(l - 1);
        let nfw = level_product(prev, &b.sltm, l, &b.g_neg, &b.g_pos);
        if !nfw.is_transient_free() || !nfw.is_label_consistent(&b.sltm) {
            return fail(&case.name, format!("level {l} product is not transient-free and consistent"));
        }
        let g = if l % 2 == 1 { &b.g_neg } else { &b.g_pos };
        let det = determinize(&nfw, prev.len(), g.len(), &Budget::unlimited()).map_err(|e| e.to_string())?;
        let min = minimize_dfw(&det);
        let bound = (prev.len() as f64).powi(2) * 2f64.powf(g.len() as f64) * g.len() as f64;
        if det.len() as f64 > bound {
            return fail(&case.name, format!("level {l}: {} states exceed {bound}", det.len()));
        }
        if !det.is_label_consistent(&b.sltm) || !min.is_label_consistent(&b.sltm) || !min.is_transient_free() {
            return fail(&case.name, format!("level {l} DFW breaks label consistency"));
        }
        if l <= chain.k() && &min != chain.dfw(l) {
            return fail(&case.name, format!("level {l} replay differs from the chain"));
        }
        if l == chain.k() + 1 && !min.is_empty() {
            return fail(&case.name, format!("level {l} after the last one is not empty"));
        }
        for w in &lassos {
            let expect = nfw_accepts_lasso(&nfw, &b.sltm, w);
            if dfw_accepts_lasso(&det, &b.sltm, w) != expect || dfw_accepts_lasso(&min, &b.sltm, w) != expect {
                return fail(&case.name, format!("level {l} language changes on {}", w.display(&case.alphabet)));
            }
        }
        out.push(LevelReplay {
            nfw_states: nfw.len(),
            determinized_states: det.len(),
            bound,
        });
    }
    Ok(out)
}

/// HD-NCW shape and language against the level DFW.
pub fn check_hd_ncw(case: &Case, chain: &Cocoa) -> Result<(), String> {
    for (i, lv) in chain.levels.iter().enumerate() {
        if lv.ncw.accepting_count() != lv.dfw.num_transitions() || !lv.ncw.accepting_part_is_deterministic() {
            return fail(&case.name, format!("level {} HD-NCW has the wrong accepting part", i + 1));
        }
        for w in case.lassos() {
            if ncw_accepts_lasso(&lv.ncw, &w) != dfw_accepts_lasso(&lv.dfw, chain.sltm(), &w) {
                return fail(&case.name, format!("level {} HD-NCW differs on {}", i + 1, w.display(&case.alphabet)));
            }
        }
    }
    Ok(())
}

fn image(g: &cocoa_core::obligation::ObligationGraph, set: &StateSet, x: usize) -> StateSet {
    set.iter().flat_map(|v| g.successors(v, x).iter().copied()).collect()
}

/// Witness replay of the naive construction, single-step closure of the
/// vertex sets, containment of prefix images and pairwise distinct labels.
pub fn check_sltm(case: &Case, chain: &Cocoa, prefix_len: usize) -> Result<(), String> {
    let b = &chain.build;
    let m = &b.sltm;
    let alpha = &case.alphabet;
    let mut union_neg: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); m.len()];
    let mut union_pos: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); m.len()];
    for (n, st) in b.naive.iter().enumerate() {
        let p = b.witness_prefix(n as u32);
        let mut neg = StateSet::singleton(b.g_neg.initial());
        let mut pos = StateSet::singleton(b.g_pos.initial());
        for &x in &p {
            let i = alpha.index_of(x).unwrap();
            neg = image(&b.g_neg, &neg, i);
            pos = image(&b.g_pos, &pos, i);
        }
        if neg != st.neg || pos != st.pos {
            return fail(&case.name, format!("witness of naive state {n} does not replay"));
        }
        let q = m.state_after(&p).unwrap();
        if q != b.class[n] {
            return fail(&case.name, format!("witness of naive state {n} ends in the wrong state"));
        }
        union_neg[q as usize].extend(st.neg.iter());
        union_pos[q as usize].extend(st.pos.iter());
    }
    for q in 0..m.len() as u32 {
        if union_neg[q as usize].iter().copied().collect::<Vec<_>>() != m.vertex_set_neg(q)
            || union_pos[q as usize].iter().copied().collect::<Vec<_>>() != m.vertex_set_pos(q)
        {
            return fail(&case.name, format!("vertex sets of state {q} are not the union of their witnesses"));
        }
        for x in 0..alpha.len() {
            let t = m.next(q, x);
            let img = image(&b.g_neg, &m.vertex_set_neg(q).iter().copied().collect(), x);
            let img_pos = image(&b.g_pos, &m.vertex_set_pos(q).iter().copied().collect(), x);
            let tn: StateSet = m.vertex_set_neg(t).iter().copied().collect();
            let tp: StateSet = m.vertex_set_pos(t).iter().copied().collect();
            if !img.is_subset(&tn) || !img_pos.is_subset(&tp) {
                return fail(&case.name, format!("step from state {q} leaves the successor's vertex set"));
            }
        }
    }
    for len in 0..=prefix_len {
        for p in words_of_length(alpha, len) {
            let mut neg = StateSet::singleton(b.g_neg.initial());
            for &x in &p {
                neg = image(&b.g_neg, &neg, alpha.index_of(x).unwrap());
            }
            let q = m.state_after(&p).unwrap();
            if !neg.is_subset(&m.vertex_set_neg(q).iter().copied().collect()) {
                return fail(&case.name, "prefix image escapes the reached state's vertex set");
            }
        }
    }
    for q1 in 0..m.len() as u32 {
        for q2 in q1 + 1..m.len() as u32 {
            if labels_equivalent(m.label(q1), m.label(q2), &chain.awa, &b.dual).map_err(|e| e.to_string())? {
                return fail(&case.name, format!("states {q1} and {q2} have equivalent labels"));
            }
        }
    }
    Ok(())
}

/// Each level is strictly below the previous one on some bounded lasso.
pub fn check_strict(case: &Case, chain: &Cocoa) -> Result<(), String> {
    let lassos = case.lassos();
    for l in 2..=chain.k() {
        let sep = lassos.iter().any(|w| chain.level_accepts(l - 1, w) && !chain.level_accepts(l, w));
        if !sep {
            return fail(&case.name, format!("no bounded lasso separates levels {} and {l}", l - 1));
        }
    }
    Ok(())
}

fn prefixes_by_state(case: &Case, chain: &Cocoa, max_len: usize) -> HashMap<u32, Vec<Vec<Letter>>> {
    let mut groups: HashMap<u32, Vec<Vec<Letter>>> = HashMap::new();
    for len in 0..=max_len {
        for p in words_of_length(&case.alphabet, len) {
            groups.entry(chain.sltm().state_after(&p).unwrap()).or_default().push(p);
        }
    }
    groups
}

/// Prefixes reaching the same SLTM state have the same membership in the
/// language and in every level for all appended bounded lassos.
pub fn check_same_state_same_levels(
    case: &Case,
    chain: &Cocoa,
    max_prefix: usize,
    suffix_bounds: (usize, usize),
) -> Result<usize, String> {
    let suffixes = enumerate_lassos(&case.alphabet, suffix_bounds.0, suffix_bounds.1);
    let mut compared = 0;
    for (_, group) in prefixes_by_state(case, chain, max_prefix) {
        let rep = &group[0];
        for p in &group[1..] {
            for s in &suffixes {
                let (w1, w2) = (s.after_prefix(rep), s.after_prefix(p));
                if eval_lasso(&case.formula, &w1) != eval_lasso(&case.formula, &w2) {
                    return fail(&case.name, "prefixes with one SLTM state have different suffix languages");
                }
                for l in 1..=chain.k() {
                    if chain.level_accepts(l, &w1) != chain.level_accepts(l, &w2) {
                        return fail(
                            &case.name,
                            format!(
                                "level {l} separates {} and {} with one SLTM state",
                                w1.display(&case.alphabet),
                                w2.display(&case.alphabet)
                            ),
                        );
                    }
                }
                compared += 1;
            }
        }
    }
    Ok(compared)
}

/// The transitions usable after a prefix depend only on its SLTM state.
pub fn check_reachable_transitions(case: &Case, chain: &Cocoa, max_prefix: usize) -> Result<(), String> {
    for (_, group) in prefixes_by_state(case, chain, max_prefix) {
        for l in 1..=chain.k() {
            let d = chain.dfw(l);
            let first = reachable_transitions(d, chain.sltm(), &group[0]);
            if group[1..].iter().any(|p| reachable_transitions(d, chain.sltm(), p) != first) {
                return fail(&case.name, format!("level {l} reachable transitions depend on the prefix"));
            }
        }
    }
    Ok(())
}
