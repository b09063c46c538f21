use cbc_kernel::{NodeId, ProofGraph, Rule};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    /// The loop contains a boxed conditional.
    One,
    /// No boxed cut, boxL or wB, and no zero branch of a boxed conditional.
    Two,
    /// No wN, no zero branch of a plain conditional, no right premise of a
    /// plain cut.
    Three,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathViolation {
    pub clause: Clause,
    pub node: NodeId,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudReport {
    pub bud: NodeId,
    pub companion: NodeId,
    /// From the companion down to the parent of the bud.
    pub path: Vec<NodeId>,
    pub has_cond_box: bool,
    pub violations: Vec<PathViolation>,
}

impl BudReport {
    pub fn violations_of(&self, clause: Clause) -> impl Iterator<Item = &PathViolation> {
        self.violations.iter().filter(move |v| v.clause == clause)
    }
}

/// Walks each companion-to-bud path of a cycle normal form tree, given as a
/// graph whose buds are `dis` leaves.
pub fn cycle_path_diagnostics(tree: &ProofGraph) -> Vec<BudReport> {
    let mut parent: BTreeMap<NodeId, (NodeId, usize)> = BTreeMap::new();
    for id in tree.reachable() {
        for (k, &p) in tree.node(id).premises.iter().enumerate() {
            parent.entry(p).or_insert((id, k));
        }
    }
    let mut out = Vec::new();
    for id in tree.reachable() {
        let Rule::Dis(comp) = tree.node(id).rule else {
            continue;
        };
        // climb from the bud to the companion, remembering the premise taken
        let mut steps: Vec<(NodeId, usize)> = Vec::new();
        let mut cur = id;
        while cur != comp {
            let Some(&(p, k)) = parent.get(&cur) else {
                break;
            };
            steps.push((p, k));
            cur = p;
        }
        steps.reverse();
        let mut rep = BudReport {
            bud: id,
            companion: comp,
            path: steps.iter().map(|&(n, _)| n).collect(),
            has_cond_box: false,
            violations: Vec::new(),
        };
        let mut flag = |clause, node, what: &str| {
            rep.violations.push(PathViolation {
                clause,
                node,
                what: what.to_string(),
            })
        };
        let mut has_cond = false;
        for &(n, k) in &steps {
            match tree.node(n).rule {
                Rule::CondBox => {
                    has_cond = true;
                    if k == 0 {
                        flag(Clause::Two, n, "zero branch of condB");
                    }
                }
                Rule::CutBox => flag(Clause::Two, n, "cutB"),
                Rule::BoxL => flag(Clause::Two, n, "boxL"),
                Rule::WeakBox => flag(Clause::Two, n, "wB"),
                Rule::WeakN => flag(Clause::Three, n, "wN"),
                Rule::CondN if k == 0 => flag(Clause::Three, n, "zero branch of condN"),
                Rule::CutN if k == 1 => flag(Clause::Three, n, "right premise of cutN"),
                _ => {}
            }
        }
        if !has_cond {
            flag(Clause::One, comp, "no condB on the loop");
        }
        rep.has_cond_box = has_cond;
        out.push(rep);
    }
    out
}
