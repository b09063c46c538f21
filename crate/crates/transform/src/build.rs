use cbc_kernel::{Node, NodeId, ProofGraph, Rule, Sequent};
use std::collections::BTreeMap;

/// Incremental construction of a proof graph.
#[derive(Debug, Clone)]
pub struct Builder {
    pub g: ProofGraph,
    redirect: BTreeMap<NodeId, NodeId>,
}

impl Builder {
    pub fn new(name: impl Into<String>) -> Self {
        Builder {
            g: ProofGraph::new(name),
            redirect: BTreeMap::new(),
        }
    }

    /// Continues numbering after the nodes of an existing graph.
    pub fn extend(g: ProofGraph) -> Self {
        Builder {
            g,
            redirect: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, rule: Rule, seq: Sequent, premises: Vec<NodeId>) -> NodeId {
        self.g.push(rule, seq, premises)
    }

    /// A placeholder to be filled by `set`, for closing cycles.
    pub fn reserve(&mut self) -> NodeId {
        self.g.push(Rule::Zero, Sequent::n(0, 0), vec![])
    }

    pub fn set(&mut self, id: NodeId, rule: Rule, seq: Sequent, premises: Vec<NodeId>) {
        self.g.insert(id, Node::new(rule, seq, premises));
    }

    /// Makes the reserved slot `id` stand for the node `target`. Edges into
    /// `id` are rewritten by `finish`.
    pub fn alias(&mut self, id: NodeId, target: NodeId) {
        if id != target {
            self.redirect.insert(id, target);
        }
    }

    pub fn resolve(&self, mut id: NodeId) -> NodeId {
        let mut steps = 0;
        while let Some(&t) = self.redirect.get(&id) {
            id = t;
            steps += 1;
            assert!(steps <= self.redirect.len(), "cyclic alias");
        }
        id
    }

    pub fn seq(&self, id: NodeId) -> Sequent {
        self.g.node(id).seq
    }

    pub fn finish(mut self, root: NodeId) -> ProofGraph {
        let fixed: Vec<(NodeId, Vec<NodeId>)> = self
            .g
            .nodes
            .iter()
            .map(|(id, n)| (*id, n.premises.iter().map(|p| self.resolve(*p)).collect()))
            .collect();
        for (id, prem) in fixed {
            self.g.nodes.get_mut(&id).unwrap().premises = prem;
        }
        for id in self.redirect.keys() {
            self.g.nodes.remove(id);
        }
        self.g.root = self.resolve(root);
        self.g.prune();
        self.g
    }

    /// Structural steps from `concl` up to `premise`. Premise normal `j` is
    /// conclusion normal `nmap[j]`, premise safe `j` is conclusion safe
    /// `smap[j]`. Unused inputs are weakened away, safe zone first, the rest
    /// permuted by exchanges.
    pub fn restructure(&mut self, concl: Sequent, nmap: &[usize], smap: &[usize], premise: NodeId) -> NodeId {
        let mut ops: Vec<(Rule, Sequent)> = Vec::new();
        let mut cur_n: Vec<usize> = (0..concl.boxed).collect();
        let mut cur_s: Vec<usize> = (0..concl.plain).collect();
        let seq = |n: &Vec<usize>, s: &Vec<usize>| Sequent::new(n.len(), s.len(), concl.succ);

        while let Some(i) = cur_s.iter().position(|l| !smap.contains(l)) {
            for j in i..cur_s.len() - 1 {
                ops.push((Rule::ExchN(j), seq(&cur_n, &cur_s)));
                cur_s.swap(j, j + 1);
            }
            ops.push((Rule::WeakN, seq(&cur_n, &cur_s)));
            cur_s.pop();
        }
        for (t, want) in smap.iter().enumerate() {
            let i = cur_s.iter().position(|l| l == want).expect("safe map is a bijection");
            for j in (t..i).rev() {
                ops.push((Rule::ExchN(j), seq(&cur_n, &cur_s)));
                cur_s.swap(j, j + 1);
            }
        }
        while let Some(i) = cur_n.iter().position(|l| !nmap.contains(l)) {
            for j in (0..i).rev() {
                ops.push((Rule::ExchBox(j), seq(&cur_n, &cur_s)));
                cur_n.swap(j, j + 1);
            }
            ops.push((Rule::WeakBox, seq(&cur_n, &cur_s)));
            cur_n.remove(0);
        }
        for (t, want) in nmap.iter().enumerate() {
            let i = cur_n.iter().position(|l| l == want).expect("normal map is a bijection");
            for j in (t..i).rev() {
                ops.push((Rule::ExchBox(j), seq(&cur_n, &cur_s)));
                cur_n.swap(j, j + 1);
            }
        }
        let mut prev = premise;
        for (rule, s) in ops.into_iter().rev() {
            prev = self.add(rule, s, vec![prev]);
        }
        prev
    }

    /// `count` wB steps over `premise`.
    pub fn weaken_front(&mut self, count: usize, premise: NodeId) -> NodeId {
        let s = self.seq(premise);
        let mut prev = premise;
        for i in 1..=count {
            prev = self.add(Rule::WeakBox, Sequent::new(s.boxed + i, s.plain, s.succ), vec![prev]);
        }
        prev
    }
}
