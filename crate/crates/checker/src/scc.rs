use cbc_kernel::{NodeId, ProofGraph};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Strongly connected components of the reachable part of a graph, restricted
/// to nodes accepted by `keep`.
pub struct Sccs {
    pub comp: BTreeMap<NodeId, usize>,
    /// Components with at least one internal edge.
    pub cyclic: Vec<bool>,
}

impl Sccs {
    pub fn new(g: &ProofGraph, keep: impl Fn(NodeId) -> bool) -> Self {
        let nodes: Vec<NodeId> = g.reachable().into_iter().filter(|&n| keep(n)).collect();
        let inside: BTreeSet<NodeId> = nodes.iter().copied().collect();
        let succ = |n: NodeId| -> Vec<NodeId> {
            g.node(n)
                .premises
                .iter()
                .copied()
                .filter(|p| inside.contains(p))
                .collect()
        };

        // iterative Tarjan
        let mut index: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut low: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut on_stack: BTreeSet<NodeId> = BTreeSet::new();
        let mut stack: Vec<NodeId> = Vec::new();
        let mut comp: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut ncomp = 0;
        let mut counter = 0;
        for &start in &nodes {
            if index.contains_key(&start) {
                continue;
            }
            let mut work: Vec<(NodeId, Vec<NodeId>, usize)> = Vec::new();
            index.insert(start, counter);
            low.insert(start, counter);
            counter += 1;
            stack.push(start);
            on_stack.insert(start);
            work.push((start, succ(start), 0));
            while let Some((v, ss, i)) = work.last_mut() {
                let v = *v;
                if *i < ss.len() {
                    let w = ss[*i];
                    *i += 1;
                    if !index.contains_key(&w) {
                        index.insert(w, counter);
                        low.insert(w, counter);
                        counter += 1;
                        stack.push(w);
                        on_stack.insert(w);
                        let sw = succ(w);
                        work.push((w, sw, 0));
                    } else if on_stack.contains(&w) {
                        let lw = index[&w];
                        let lv = low.get_mut(&v).unwrap();
                        *lv = (*lv).min(lw);
                    }
                } else {
                    work.pop();
                    if let Some((u, ..)) = work.last() {
                        let lv = low[&v];
                        let lu = low.get_mut(u).unwrap();
                        *lu = (*lu).min(lv);
                    }
                    if low[&v] == index[&v] {
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack.remove(&w);
                            comp.insert(w, ncomp);
                            if w == v {
                                break;
                            }
                        }
                        ncomp += 1;
                    }
                }
            }
        }
        let mut cyclic = vec![false; ncomp];
        for &n in &nodes {
            for p in succ(n) {
                if comp[&p] == comp[&n] {
                    cyclic[comp[&n]] = true;
                }
            }
        }
        Sccs { comp, cyclic }
    }

    pub fn on_cycle(&self, n: NodeId) -> bool {
        self.comp.get(&n).is_some_and(|&c| self.cyclic[c])
    }

    pub fn same(&self, a: NodeId, b: NodeId) -> bool {
        matches!((self.comp.get(&a), self.comp.get(&b)), (Some(x), Some(y)) if x == y)
    }

    /// Shortest path `from -> .. -> to` inside the component of `to`,
    /// following premises in order. Includes both ends.
    pub fn path(&self, g: &ProofGraph, from: NodeId, to: NodeId) -> Option<Vec<NodeId>> {
        if !self.same(from, to) {
            return None;
        }
        if from == to {
            return Some(vec![from]);
        }
        let mut prev: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(n) = queue.pop_front() {
            for &p in &g.node(n).premises {
                if !self.same(p, to) || !seen.insert(p) {
                    continue;
                }
                prev.insert(p, n);
                if p == to {
                    let mut out = vec![to];
                    let mut cur = to;
                    while cur != from {
                        cur = prev[&cur];
                        out.push(cur);
                    }
                    out.reverse();
                    return Some(out);
                }
                queue.push_back(p);
            }
        }
        None
    }

    /// Shortest simple cycle starting at `n`, listed from `n`.
    pub fn cycle_through(&self, g: &ProofGraph, n: NodeId) -> Option<Vec<NodeId>> {
        self.cycle_via_edge(g, n, None)
    }

    /// Shortest simple cycle that leaves `n` through premise `k` (any
    /// premise if `None`).
    pub fn cycle_via_edge(&self, g: &ProofGraph, n: NodeId, k: Option<usize>) -> Option<Vec<NodeId>> {
        if !self.on_cycle(n) {
            return None;
        }
        let prem = &g.node(n).premises;
        let firsts: Vec<NodeId> = match k {
            Some(k) => prem.get(k).copied().into_iter().collect(),
            None => prem.clone(),
        };
        let mut best: Option<Vec<NodeId>> = None;
        for p in firsts {
            if p == n {
                return Some(vec![n]);
            }
            if let Some(path) = self.path(g, p, n) {
                let mut cyc = vec![n];
                cyc.extend_from_slice(&path[..path.len() - 1]);
                if best.as_ref().is_none_or(|b| cyc.len() < b.len()) {
                    best = Some(cyc);
                }
            }
        }
        best
    }
}

/// Picks the shortest candidate; ties go to the smallest start node.
pub fn shortest(cands: impl IntoIterator<Item = Vec<NodeId>>) -> Option<Vec<NodeId>> {
    cands
        .into_iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then(a[0].cmp(&b[0])))
}
