use crate::rule::Rule;
use crate::sequent::Sequent;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub rule: Rule,
    pub seq: Sequent,
    pub premises: Vec<NodeId>,
}

impl Node {
    pub fn new(rule: Rule, seq: Sequent, premises: Vec<NodeId>) -> Self {
        Node { rule, seq, premises }
    }
}

/// A finite rooted graph of inference steps. Cycles are allowed, so every
/// graph stands for a regular coderivation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProofGraph {
    pub name: String,
    pub root: NodeId,
    pub nodes: BTreeMap<NodeId, Node>,
}

impl ProofGraph {
    pub fn new(name: impl Into<String>) -> Self {
        ProofGraph {
            name: name.into(),
            root: 0,
            nodes: BTreeMap::new(),
        }
    }

    pub fn get(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    /// Panics on an unknown id; use on validated graphs only.
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[&id]
    }

    pub fn root_node(&self) -> &Node {
        self.node(self.root)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn next_id(&self) -> NodeId {
        self.nodes.keys().next_back().map_or(0, |k| k + 1)
    }

    /// Appends a node under a fresh id.
    pub fn push(&mut self, rule: Rule, seq: Sequent, premises: Vec<NodeId>) -> NodeId {
        let id = self.next_id();
        self.nodes.insert(id, Node::new(rule, seq, premises));
        id
    }

    pub fn insert(&mut self, id: NodeId, node: Node) {
        self.nodes.insert(id, node);
    }

    /// Nodes reachable from the root in breadth-first order. Dangling premise
    /// ids are skipped.
    pub fn reachable(&self) -> Vec<NodeId> {
        self.reachable_from(self.root)
    }

    pub fn reachable_from(&self, start: NodeId) -> Vec<NodeId> {
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        if self.nodes.contains_key(&start) {
            seen.insert(start);
            queue.push_back(start);
        }
        while let Some(id) = queue.pop_front() {
            order.push(id);
            for &p in &self.nodes[&id].premises {
                if self.nodes.contains_key(&p) && seen.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        order
    }

    /// Number of premise edges pointing at each node, counted over reachable
    /// nodes.
    pub fn in_degrees(&self) -> BTreeMap<NodeId, usize> {
        let mut deg: BTreeMap<NodeId, usize> = BTreeMap::new();
        for id in self.reachable() {
            deg.entry(id).or_default();
            for &p in &self.nodes[&id].premises {
                *deg.entry(p).or_default() += 1;
            }
        }
        deg
    }

    /// Drops unreachable nodes.
    pub fn prune(&mut self) {
        let keep: BTreeSet<NodeId> = self.reachable().into_iter().collect();
        self.nodes.retain(|k, _| keep.contains(k));
    }

    /// Renumbers reachable nodes 0.. in breadth-first order from the root.
    pub fn compact(&self) -> ProofGraph {
        let order = self.reachable();
        let map: BTreeMap<NodeId, NodeId> = order
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i as NodeId))
            .collect();
        let mut out = ProofGraph::new(self.name.clone());
        for &id in &order {
            let n = &self.nodes[&id];
            let rule = match &n.rule {
                Rule::Dis(c) => Rule::Dis(*map.get(c).unwrap_or(c)),
                r => r.clone(),
            };
            let premises = n.premises.iter().map(|p| map[p]).collect();
            out.insert(map[&id], Node::new(rule, n.seq, premises));
        }
        out.root = 0;
        out
    }

    pub fn rule_census(&self) -> BTreeMap<&'static str, usize> {
        let mut c = BTreeMap::new();
        for id in self.reachable() {
            *c.entry(self.nodes[&id].rule.name()).or_default() += 1;
        }
        c
    }

    pub fn contains_rule(&self, pred: impl Fn(&Rule) -> bool) -> bool {
        self.reachable().iter().any(|id| pred(&self.nodes[id].rule))
    }
}
