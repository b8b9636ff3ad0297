//! Positive CNF arithmetic over state sets.
//!
//! A CNF is a list of clauses; the empty list is `true` and a list holding the
//! empty clause is `false`. Every function returns a canonical form: clauses
//! sorted, duplicates and supersets of other clauses removed.

use crate::stateset::StateSet;

pub type Cnf = Vec<StateSet>;

pub fn t() -> Cnf {
    Vec::new()
}

pub fn f() -> Cnf {
    vec![StateSet::new()]
}

pub fn var(q: u32) -> Cnf {
    vec![StateSet::singleton(q)]
}

pub fn is_false(c: &Cnf) -> bool {
    c.iter().any(StateSet::is_empty)
}

/// Keeps the inclusion-minimal sets, ordered by their sorted id lists.
pub fn minimize(mut sets: Vec<StateSet>) -> Vec<StateSet> {
    sets.sort_by_key(|s| (s.len(), s.to_vec()));
    sets.dedup();
    let mut kept: Vec<StateSet> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept.sort_by_key(StateSet::to_vec);
    kept
}

pub fn and(mut a: Cnf, b: Cnf) -> Cnf {
    if is_false(&a) || is_false(&b) {
        return f();
    }
    a.extend(b);
    minimize(a)
}

pub fn or(a: Cnf, b: Cnf) -> Cnf {
    if a.is_empty() || b.is_empty() {
        return t();
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in &a {
        for y in &b {
            out.push(x.union(y));
        }
    }
    minimize(out)
}

/// Minimal hitting sets of `clauses`, i.e. the minimal models of the CNF.
/// The CNF `true` has the single model `∅`; `false` has none.
pub fn minimal_transversals(clauses: &[StateSet]) -> Vec<StateSet> {
    let mut current = vec![StateSet::new()];
    let mut ordered: Vec<&StateSet> = clauses.iter().collect();
    ordered.sort_by_key(|c| c.len());
    for clause in ordered {
        let mut next = Vec::new();
        for t in &current {
            if t.intersects(clause) {
                next.push(t.clone());
            } else {
                for q in clause.iter() {
                    let mut u = t.clone();
                    u.insert(q);
                    next.push(u);
                }
            }
        }
        current = minimize(next);
        if current.is_empty() {
            break;
        }
    }
    current
}
