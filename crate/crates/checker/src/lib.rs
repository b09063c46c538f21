//! Global criteria on circular proof graphs: safety, left-leaning, progress
//! for safe graphs, the resulting classification, and per-loop diagnostics
//! on cycle normal forms.

mod diag;
mod scc;

pub use diag::{cycle_path_diagnostics, BudReport, Clause, PathViolation};
pub use scc::Sccs;

use cbc_kernel::{NodeId, ProofGraph, Rule};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Safety {
    Safe,
    Unsafe { witness: Vec<NodeId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeftLeaning {
    Ok,
    Violating { witness: Vec<NodeId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Progress {
    Progressing,
    NotProgressing { witness: Vec<NodeId> },
    /// The cycle criterion only applies to safe graphs.
    UnknownUnsafe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    CB,
    CNB,
    None,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::CB => "CB",
            Class::CNB => "CNB",
            Class::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub safe: bool,
    pub left_leaning: bool,
    /// `None` when undecided, which happens only for unsafe graphs.
    pub progressing: Option<bool>,
    pub witness_cycle: Option<Vec<NodeId>>,
    pub class: Class,
    pub safety: Safety,
    pub leaning: LeftLeaning,
    pub progress: Progress,
}

impl Classification {
    /// Human readable reasons for not being in the requested class.
    pub fn reasons(&self, want_cb: bool) -> Vec<String> {
        let mut out = Vec::new();
        if let Safety::Unsafe { witness } = &self.safety {
            out.push(format!("unsafe: cycle {} crosses a boxed cut", show(witness)));
        }
        match &self.progress {
            Progress::NotProgressing { witness } => {
                out.push(format!("not progressing: cycle {} has no boxed conditional", show(witness)))
            }
            Progress::UnknownUnsafe => out.push("progress undecided for an unsafe graph".into()),
            Progress::Progressing => {}
        }
        if want_cb {
            if let LeftLeaning::Violating { witness } = &self.leaning {
                out.push(format!("not left-leaning: cycle {} goes right at a cut", show(witness)));
            }
        }
        out
    }
}

pub fn show(cycle: &[NodeId]) -> String {
    let parts: Vec<String> = cycle.iter().map(|n| n.to_string()).collect();
    format!("[{}]", parts.join(" -> "))
}

pub fn check_safety(g: &ProofGraph) -> Safety {
    let sccs = Sccs::new(g, |_| true);
    let cands = g
        .reachable()
        .into_iter()
        .filter(|&n| g.node(n).rule == Rule::CutBox)
        .filter_map(|n| sccs.cycle_through(g, n));
    match scc::shortest(cands) {
        None => Safety::Safe,
        Some(witness) => Safety::Unsafe { witness },
    }
}

pub fn check_left_leaning(g: &ProofGraph) -> LeftLeaning {
    let sccs = Sccs::new(g, |_| true);
    let cands = g
        .reachable()
        .into_iter()
        .filter(|&n| g.node(n).rule == Rule::CutN)
        .filter_map(|n| sccs.cycle_via_edge(g, n, Some(1)));
    match scc::shortest(cands) {
        None => LeftLeaning::Ok,
        Some(witness) => LeftLeaning::Violating { witness },
    }
}

pub fn check_progressing_safe(g: &ProofGraph) -> Progress {
    if check_safety(g) != Safety::Safe {
        return Progress::UnknownUnsafe;
    }
    let sccs = Sccs::new(g, |n| g.node(n).rule != Rule::CondBox);
    let cands = sccs
        .comp
        .keys()
        .copied()
        .filter_map(|n| sccs.cycle_through(g, n))
        .collect::<Vec<_>>();
    match scc::shortest(cands) {
        None => Progress::Progressing,
        Some(witness) => Progress::NotProgressing { witness },
    }
}

pub fn classify(g: &ProofGraph) -> Classification {
    let safety = check_safety(g);
    let leaning = check_left_leaning(g);
    let progress = check_progressing_safe(g);
    let safe = safety == Safety::Safe;
    let left_leaning = leaning == LeftLeaning::Ok;
    let progressing = match progress {
        Progress::Progressing => Some(true),
        Progress::NotProgressing { .. } => Some(false),
        Progress::UnknownUnsafe => None,
    };
    let class = match (safe, progressing, left_leaning) {
        (true, Some(true), true) => Class::CB,
        (true, Some(true), false) => Class::CNB,
        _ => Class::None,
    };
    let witness_cycle = match (&safety, &progress, &leaning) {
        (Safety::Unsafe { witness }, ..) => Some(witness.clone()),
        (_, Progress::NotProgressing { witness }, _) => Some(witness.clone()),
        (.., LeftLeaning::Violating { witness }) => Some(witness.clone()),
        _ => None,
    };
    Classification {
        safe,
        left_leaning,
        progressing,
        witness_cycle,
        class,
        safety,
        leaning,
        progress,
    }
}
