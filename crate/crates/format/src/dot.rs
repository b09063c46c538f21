use crate::proof::sequent_literal;
use cbc_kernel::{NodeId, ProofGraph, Rule};
use std::collections::BTreeMap;
use std::fmt::Write;

#[derive(Clone, Copy, PartialEq)]
enum Mark {
    Open,
    Done,
}

/// One DOT digraph. Edges to a node on the current depth-first path from the
/// root are drawn dashed and red; buds get a dotted edge to their companion,
/// and each companion is marked `dis` once.
pub fn export_dot(g: &ProofGraph) -> String {
    let mut back: Vec<(NodeId, usize)> = Vec::new();
    let mut mark: BTreeMap<NodeId, Mark> = BTreeMap::new();
    let mut stack: Vec<(NodeId, usize)> = Vec::new();
    if g.get(g.root).is_some() {
        mark.insert(g.root, Mark::Open);
        stack.push((g.root, 0));
    }
    while let Some(&mut (id, ref mut next)) = stack.last_mut() {
        let prem = &g.node(id).premises;
        if *next == prem.len() {
            mark.insert(id, Mark::Done);
            stack.pop();
            continue;
        }
        let k = *next;
        *next += 1;
        let p = prem[k];
        if g.get(p).is_none() {
            continue;
        }
        match mark.get(&p) {
            Some(Mark::Open) => back.push((id, k)),
            Some(Mark::Done) => {}
            None => {
                mark.insert(p, Mark::Open);
                stack.push((p, 0));
            }
        }
    }

    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", g.name.replace('"', "'")).unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    let companions: std::collections::BTreeSet<NodeId> = g
        .reachable()
        .into_iter()
        .filter_map(|id| match g.node(id).rule {
            Rule::Dis(c) => Some(c),
            _ => None,
        })
        .collect();
    for id in g.reachable() {
        let n = g.node(id);
        let label = format!("{} : {}", n.rule, sequent_literal(&n.seq));
        let mut extra = if id == g.root { ", penwidth=2" } else { "" }.to_string();
        if companions.contains(&id) {
            extra.push_str(", peripheries=2, xlabel=\"dis\"");
        }
        writeln!(out, "  n{id} [label=\"{}\"{extra}];", label.replace('"', "'")).unwrap();
    }
    for id in g.reachable() {
        let n = g.node(id);
        for (k, p) in n.premises.iter().enumerate() {
            if back.contains(&(id, k)) {
                writeln!(out, "  n{id} -> n{p} [label=\"{k}\", style=dashed, color=red, constraint=false];").unwrap();
            } else {
                writeln!(out, "  n{id} -> n{p} [label=\"{k}\"];").unwrap();
            }
        }
        if let Rule::Dis(c) = n.rule {
            writeln!(out, "  n{id} -> n{c} [style=dotted, color=blue, label=\"bud\", constraint=false];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Number of back edges found by the same traversal; used by tests.
pub fn back_edge_count(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains("style=dashed")).count()
}
