//! Strongly connected components and the condensation DAG.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use super::graph::AuxiliaryGraph;

/// SCC decomposition with a deterministic topological order.
///
/// Components are numbered in topological order: every condensation arc goes from a lower
/// to a higher component number. Ties are broken by the smallest member index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    /// Component number of each node.
    pub component_of: Vec<usize>,
    /// Members of each component (sorted).
    pub components: Vec<Vec<usize>>,
    /// Successor components of each component.
    pub dag: Vec<BTreeSet<usize>>,
}

impl Condensation {
    /// Components with more than one node.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.components.iter().filter(|c| c.len() > 1)
    }
}

/// Tarjan's algorithm (iterative) over an adjacency list.
pub fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
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
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Condenses an arbitrary adjacency list.
pub fn condense(adj: &[Vec<usize>]) -> Condensation {
    let raw = tarjan(adj);
    let n = adj.len();
    let mut raw_of = vec![0; n];
    for (k, comp) in raw.iter().enumerate() {
        for &v in comp {
            raw_of[v] = k;
        }
    }
    let m = raw.len();
    let mut succ = vec![BTreeSet::new(); m];
    let mut indeg = vec![0usize; m];
    for (u, list) in adj.iter().enumerate() {
        for &v in list {
            let (a, b) = (raw_of[u], raw_of[v]);
            if a != b && succ[a].insert(b) {
                indeg[b] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..m)
        .filter(|&k| indeg[k] == 0)
        .map(|k| Reverse((raw[k][0], k)))
        .collect();
    let mut order = Vec::with_capacity(m);
    while let Some(Reverse((_, k))) = heap.pop() {
        order.push(k);
        for &s in &succ[k] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                heap.push(Reverse((raw[s][0], s)));
            }
        }
    }
    let mut renumber = vec![0; m];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    let components: Vec<Vec<usize>> = order.iter().map(|&k| raw[k].clone()).collect();
    let component_of = raw_of.iter().map(|&k| renumber[k]).collect();
    let dag = order
        .iter()
        .map(|&k| succ[k].iter().map(|&s| renumber[s]).collect())
        .collect();
    Condensation {
        component_of,
        components,
        dag,
    }
}

/// Adjacency list of the auxiliary graph (all colors, collapsed).
pub fn aux_adjacency(aux: &AuxiliaryGraph) -> Vec<Vec<usize>> {
    (0..aux.len())
        .map(|u| {
            let mut v: Vec<usize> = aux.out_arcs(u).iter().map(|&(w, _)| w).collect();
            v.dedup();
            v
        })
        .collect()
}

/// SCC condensation of the auxiliary graph.
pub fn scc_condensation(aux: &AuxiliaryGraph) -> Condensation {
    condense(&aux_adjacency(aux))
}

/// Whether the auxiliary graph has no directed cycle.
pub fn is_acyclic(aux: &AuxiliaryGraph) -> bool {
    scc_condensation(aux)
        .components
        .iter()
        .all(|c| c.len() == 1)
}

/// Deterministic topological order of the nodes (smallest index first among ready nodes),
/// or `None` when the graph has a cycle.
pub fn topological_order(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for list in adj {
        for &v in list {
            indeg[v] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = heap.pop() {
        order.push(u);
        for &v in &adj[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                heap.push(Reverse(v));
            }
        }
    }
    (order.len() == n).then_some(order)
}
