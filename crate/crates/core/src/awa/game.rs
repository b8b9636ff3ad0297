//! The word-checking game on a lasso as a finite Büchi game.
//!
//! Rejector vertices are `(state, position)`; on each the rejector picks a
//! clause of the transition formula, leading to an acceptor vertex where the
//! acceptor picks a state of that clause. Positions wrap into the period. In a
//! weak automaton "eventually only accepting" equals "accepting infinitely
//! often", so the acceptor's objective is Büchi on accepting states.

use std::collections::HashMap;

use super::{Awa, StateId};
use crate::alphabet::LassoWord;

pub(super) fn accepts(a: &Awa, start: StateId, w: &LassoWord) -> bool {
    let letters = w.indices(a.alphabet()).expect("lasso word over the automaton's alphabet");
    let mut game = Game::default();
    let mut rej_ids: HashMap<(StateId, usize), usize> = HashMap::new();
    let mut stack = vec![(start, 0usize)];
    let root = game.add(false, a.is_accepting(start));
    rej_ids.insert((start, 0), root);
    while let Some((q, pos)) = stack.pop() {
        let v = rej_ids[&(q, pos)];
        let next = w.succ(pos);
        for clause in a.delta(q, letters[pos]).clauses() {
            let c = game.add(true, false);
            game.edge(v, c);
            for &r in clause {
                let t = *rej_ids.entry((r, next)).or_insert_with(|| {
                    stack.push((r, next));
                    game.add(false, a.is_accepting(r))
                });
                game.edge(c, t);
            }
        }
    }
    game.solve_buchi()[root]
}

#[derive(Default)]
pub(crate) struct Game {
    acceptor: Vec<bool>,
    target: Vec<bool>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Game {
    pub(crate) fn add(&mut self, acceptor_owns: bool, target: bool) -> usize {
        self.acceptor.push(acceptor_owns);
        self.target.push(target);
        self.succ.push(Vec::new());
        self.pred.push(Vec::new());
        self.acceptor.len() - 1
    }

    pub(crate) fn edge(&mut self, from: usize, to: usize) {
        self.succ[from].push(to);
        self.pred[to].push(from);
    }

    /// Vertices from which `player` can force a visit to `goal`, inside the
    /// subgame `alive`.
    fn attractor(&self, alive: &[bool], goal: &[bool], acceptor: bool) -> Vec<bool> {
        let n = self.acceptor.len();
        let mut attr = vec![false; n];
        let mut count: Vec<usize> = (0..n).map(|v| self.succ[v].iter().filter(|&&s| alive[s]).count()).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&v| alive[v] && goal[v]).collect();
        for &v in &queue {
            attr[v] = true;
        }
        while let Some(v) = queue.pop() {
            for &p in &self.pred[v] {
                if !alive[p] || attr[p] {
                    continue;
                }
                let take = if self.acceptor[p] == acceptor {
                    true
                } else {
                    count[p] -= 1;
                    count[p] == 0
                };
                if take {
                    attr[p] = true;
                    queue.push(p);
                }
            }
        }
        attr
    }

    /// Winning region of the acceptor for "target infinitely often".
    pub(crate) fn solve_buchi(&self) -> Vec<bool> {
        let n = self.acceptor.len();
        let mut alive = vec![true; n];
        loop {
            let reach = self.attractor(&alive, &self.target, true);
            let trap: Vec<bool> = (0..n).map(|v| alive[v] && !reach[v]).collect();
            if !trap.iter().any(|&t| t) {
                return alive;
            }
            let lost = self.attractor(&alive, &trap, false);
            for v in 0..n {
                if lost[v] {
                    alive[v] = false;
                }
            }
        }
    }
}
