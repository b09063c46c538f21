use crate::minimize::minimize;
use cbc_kernel::{Node, NodeId, ProofGraph, Rule};
use std::collections::{BTreeMap, BTreeSet};

/// A finite tree unfolding of a regular proof. Every leaf is an axiom or a
/// bud `Dis(c)` whose companion `c` is a strict ancestor with the same
/// minimized origin.
#[derive(Debug, Clone)]
pub struct CycleNF {
    pub tree: ProofGraph,
    pub minimized: ProofGraph,
    /// Tree position to minimized node.
    pub origin: BTreeMap<NodeId, NodeId>,
    pub parent: BTreeMap<NodeId, NodeId>,
}

impl CycleNF {
    pub fn buds(&self) -> Vec<NodeId> {
        self.tree
            .nodes
            .iter()
            .filter(|(_, n)| matches!(n.rule, Rule::Dis(_)))
            .map(|(id, _)| *id)
            .collect()
    }

    pub fn companion(&self, bud: NodeId) -> Option<NodeId> {
        match self.tree.get(bud)?.rule {
            Rule::Dis(c) => Some(c),
            _ => None,
        }
    }

    pub fn companions(&self) -> BTreeSet<NodeId> {
        self.buds().into_iter().filter_map(|b| self.companion(b)).collect()
    }

    pub fn buds_of(&self, companion: NodeId) -> Vec<NodeId> {
        self.buds().into_iter().filter(|b| self.companion(*b) == Some(companion)).collect()
    }

    /// Whether `a` lies on the path from the root to `b` (inclusive).
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent.get(&c).copied();
        }
        false
    }

    /// Root path of a position, root first.
    pub fn path(&self, n: NodeId) -> Vec<NodeId> {
        let mut out = vec![n];
        let mut cur = n;
        while let Some(p) = self.parent.get(&cur) {
            out.push(*p);
            cur = *p;
        }
        out.reverse();
        out
    }

    /// The tree with every bud replaced by a back edge to its companion.
    pub fn refold(&self) -> ProofGraph {
        let mut g = self.tree.clone();
        let redirect: BTreeMap<NodeId, NodeId> =
            self.buds().into_iter().filter_map(|b| Some((b, self.companion(b)?))).collect();
        for n in g.nodes.values_mut() {
            for p in n.premises.iter_mut() {
                if let Some(c) = redirect.get(p) {
                    *p = *c;
                }
            }
        }
        g.prune();
        g
    }
}

/// Minimizes, then unfolds leftmost-first, cutting each path at the first
/// repetition of a minimized node.
pub fn cycle_normal_form(g: &ProofGraph) -> CycleNF {
    let (m, _) = minimize(g);
    let mut cnf = CycleNF {
        tree: ProofGraph::new(g.name.clone()),
        minimized: m,
        origin: BTreeMap::new(),
        parent: BTreeMap::new(),
    };
    if cnf.minimized.is_empty() {
        return cnf;
    }
    let mut on_path: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let root = unfold(&mut cnf, 0, None, &mut on_path);
    cnf.tree.root = root;
    cnf
}

fn unfold(cnf: &mut CycleNF, m: NodeId, parent: Option<NodeId>, on_path: &mut BTreeMap<NodeId, NodeId>) -> NodeId {
    let id = cnf.tree.next_id();
    let node = cnf.minimized.node(m).clone();
    if let Some(p) = parent {
        cnf.parent.insert(id, p);
    }
    cnf.origin.insert(id, m);
    if let Some(&c) = on_path.get(&m) {
        cnf.tree.insert(id, Node::new(Rule::Dis(c), node.seq, vec![]));
        return id;
    }
    cnf.tree.insert(id, Node::new(node.rule.clone(), node.seq, vec![]));
    on_path.insert(m, id);
    let mut kids = Vec::with_capacity(node.premises.len());
    for p in &node.premises {
        kids.push(unfold(cnf, *p, Some(id), on_path));
    }
    on_path.remove(&m);
    cnf.tree.nodes.get_mut(&id).unwrap().premises = kids;
    id
}

/// `Close(n)`: companions at or above `n` of buds above `n`.
/// `Open(n)`: buds above `n` whose companion lies strictly below `n`.
pub fn close_open_sets(cnf: &CycleNF, n: NodeId) -> (BTreeSet<NodeId>, BTreeSet<NodeId>) {
    let mut close = BTreeSet::new();
    let mut open = BTreeSet::new();
    for b in cnf.buds() {
        if !cnf.is_ancestor(n, b) {
            continue;
        }
        let c = cnf.companion(b).unwrap();
        if cnf.is_ancestor(n, c) {
            close.insert(c);
        } else {
            open.insert(b);
        }
    }
    (close, open)
}
