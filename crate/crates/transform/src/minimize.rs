use cbc_kernel::{Node, NodeId, ProofGraph, Rule, Sequent};
use std::collections::{BTreeMap, BTreeSet};

/// Coarsest bisimulation on labelled nodes: equal rule and sequent, and
/// premises pairwise in the same block.
fn partition(nodes: &BTreeMap<NodeId, (Rule, Sequent, Vec<NodeId>)>) -> BTreeMap<NodeId, usize> {
    let mut block: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut labels: BTreeMap<(&Rule, &Sequent), usize> = BTreeMap::new();
    for (id, (r, s, _)) in nodes {
        let k = labels.len();
        block.insert(*id, *labels.entry((r, s)).or_insert(k));
    }
    let mut count = labels.len();
    loop {
        let mut sigs: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next = BTreeMap::new();
        for (id, (_, _, prem)) in nodes {
            let sig = (block[id], prem.iter().map(|p| block[p]).collect());
            let k = sigs.len();
            next.insert(*id, *sigs.entry(sig).or_insert(k));
        }
        let n = sigs.len();
        block = next;
        if n == count {
            return block;
        }
        count = n;
    }
}

fn table(g: &ProofGraph, offset: NodeId, out: &mut BTreeMap<NodeId, (Rule, Sequent, Vec<NodeId>)>) {
    for id in g.reachable() {
        let n = g.node(id);
        let rule = match &n.rule {
            Rule::Dis(c) => Rule::Dis(c + offset),
            r => r.clone(),
        };
        out.insert(id + offset, (rule, n.seq, n.premises.iter().map(|p| p + offset).collect()));
    }
}

/// Quotient of the reachable part by bisimilarity. Blocks are numbered in
/// leftmost-first depth-first order from the root, so bisimilar inputs give
/// identical outputs. Also returns the block of every reachable node.
pub fn minimize(g: &ProofGraph) -> (ProofGraph, BTreeMap<NodeId, NodeId>) {
    let mut nodes = BTreeMap::new();
    table(g, 0, &mut nodes);
    let block = partition(&nodes);
    let mut rep: BTreeMap<usize, NodeId> = BTreeMap::new();
    for (id, b) in &block {
        rep.entry(*b).or_insert(*id);
    }
    // canonical numbering
    let mut canon: BTreeMap<usize, NodeId> = BTreeMap::new();
    let mut stack = vec![block[&g.root]];
    let mut seen = BTreeSet::new();
    while let Some(b) = stack.pop() {
        if !seen.insert(b) {
            continue;
        }
        canon.insert(b, canon.len() as NodeId);
        let prem = &nodes[&rep[&b]].2;
        for p in prem.iter().rev() {
            if !seen.contains(&block[p]) {
                stack.push(block[p]);
            }
        }
    }
    let mut out = ProofGraph::new(g.name.clone());
    for (b, &id) in &canon {
        let (rule, seq, prem) = &nodes[&rep[b]];
        let rule = match rule {
            Rule::Dis(c) => Rule::Dis(canon[&block[c]]),
            r => r.clone(),
        };
        out.insert(id, Node::new(rule, *seq, prem.iter().map(|p| canon[&block[p]]).collect()));
    }
    out.root = 0;
    let map = block.iter().map(|(id, b)| (*id, canon[b])).collect();
    (out, map)
}

/// Whether node `a` of `g` and node `b` of `h` unfold to the same tree.
pub fn bisimilar(g: &ProofGraph, a: NodeId, h: &ProofGraph, b: NodeId) -> bool {
    let mut g1 = g.clone();
    g1.root = a;
    let mut h1 = h.clone();
    h1.root = b;
    let offset = g.next_id();
    let mut nodes = BTreeMap::new();
    table(&g1, 0, &mut nodes);
    table(&h1, offset, &mut nodes);
    let block = partition(&nodes);
    block[&a] == block[&(b + offset)]
}
