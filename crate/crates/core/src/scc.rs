//! Tarjan's strongly connected components over dense integer graphs.
//!
//! Iterative, so deep automata do not overflow the stack. Nodes are visited in
//! increasing id order and successors in the order given, which makes the
//! component numbering reproducible.

/// Result of an SCC decomposition.
#[derive(Debug, Clone)]
pub struct Sccs {
    /// Component index per node. Components are numbered in the order Tarjan
    /// completes them, i.e. every edge goes to a component with an index less
    /// than or equal to its source's.
    pub component: Vec<usize>,
    /// Members of each component, sorted.
    pub members: Vec<Vec<usize>>,
    /// Whether a component contains a cycle (more than one node or a self-loop).
    pub nontrivial: Vec<bool>,
}

impl Sccs {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether `node` lies on a cycle.
    pub fn on_cycle(&self, node: usize) -> bool {
        self.nontrivial[self.component[node]]
    }
}

pub fn tarjan<F, I>(n: usize, mut successors: F) -> Sccs
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut component = vec![UNSEEN; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut self_loop = vec![false; n];
    let mut next_index = 0;

    let succ: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let s: Vec<usize> = successors(v).into_iter().collect();
            if s.contains(&v) {
                self_loop[v] = true;
            }
            s
        })
        .collect();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let id = members.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component[w] = id;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    members.push(comp);
                }
            }
        }
    }

    let nontrivial = members
        .iter()
        .map(|m| m.len() > 1 || self_loop[m[0]])
        .collect();
    Sccs {
        component,
        members,
        nontrivial,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_in_reverse_topological_order() {
        // 0 -> 1 <-> 2 -> 3, 3 self-loop, 4 isolated
        let adj = [vec![1], vec![2], vec![1, 3], vec![3], vec![]];
        let sccs = tarjan(5, |v| adj[v].clone());
        assert_eq!(sccs.len(), 4);
        assert_eq!(sccs.component[1], sccs.component[2]);
        for (v, succ) in adj.iter().enumerate() {
            for &w in succ {
                assert!(sccs.component[w] <= sccs.component[v]);
            }
        }
        assert!(sccs.on_cycle(1) && sccs.on_cycle(3));
        assert!(!sccs.on_cycle(0) && !sccs.on_cycle(4));
    }

    #[test]
    fn long_chain_does_not_overflow() {
        let n = 200_000;
        let sccs = tarjan(n, |v| if v + 1 < n { vec![v + 1] } else { vec![0] });
        assert_eq!(sccs.len(), 1);
        assert!(sccs.nontrivial[0]);
    }
}
