use crate::graph::{NodeId, ProofGraph};
use crate::rule::Rule;
use crate::sequent::{SType, Sequent};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepError {
    pub node: Option<NodeId>,
    pub msg: String,
}

impl StepError {
    fn at(node: NodeId, msg: impl Into<String>) -> Self {
        StepError {
            node: Some(node),
            msg: msg.into(),
        }
    }
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(n) => write!(f, "node {n}: {}", self.msg),
            None => write!(f, "{}", self.msg),
        }
    }
}

impl std::error::Error for StepError {}

/// Which of the special rule tags a graph may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Allowed {
    pub srec: bool,
    pub oracle: bool,
    pub dis: bool,
}

impl Allowed {
    /// Plain circular proofs over the rules without srec.
    pub const CIRCULAR: Allowed = Allowed {
        srec: false,
        oracle: false,
        dis: false,
    };
    /// Finite derivations, possibly with oracle leaves.
    pub const DERIVATION: Allowed = Allowed {
        srec: true,
        oracle: true,
        dis: false,
    };
    pub const ANY: Allowed = Allowed {
        srec: true,
        oracle: true,
        dis: true,
    };
}

fn expect(cond: bool, node: NodeId, msg: impl FnOnce() -> String) -> Result<(), StepError> {
    if cond {
        Ok(())
    } else {
        Err(StepError::at(node, msg()))
    }
}

/// Checks one inference step against its rule schema.
pub fn validate_step(graph: &ProofGraph, id: NodeId) -> Result<(), StepError> {
    let node = graph
        .get(id)
        .ok_or_else(|| StepError::at(id, "no such node"))?;
    let want = node.rule.premise_count();
    expect(node.premises.len() == want, id, || {
        format!(
            "{} takes {} premises, found {}",
            node.rule,
            want,
            node.premises.len()
        )
    })?;
    let mut prem = Vec::with_capacity(want);
    for &p in &node.premises {
        let n = graph
            .get(p)
            .ok_or_else(|| StepError::at(id, format!("premise {p} does not exist")))?;
        prem.push(n.seq);
    }
    let c = node.seq;
    let (b, p) = (c.boxed, c.plain);
    let same = |got: Sequent, exp: Sequent, which: usize| {
        expect(got == exp, id, || {
            format!("{}: premise {which} should be `{exp}`, found `{got}`", node.rule)
        })
    };
    let succ_n = || {
        expect(c.succ == SType::Plain, id, || {
            format!("{} concludes N, found `{c}`", node.rule)
        })
    };
    match &node.rule {
        Rule::Id => same(c, Sequent::n(0, 1), 0).map_err(|_| StepError::at(id, format!("id must be `N => N`, found `{c}`"))),
        Rule::Zero => same(c, Sequent::n(0, 0), 0).map_err(|_| StepError::at(id, format!("0 must be `=> N`, found `{c}`"))),
        Rule::S0 | Rule::S1 => same(prem[0], c, 0),
        Rule::WeakN => {
            expect(p >= 1, id, || format!("wN needs a plain N, found `{c}`"))?;
            same(prem[0], Sequent::new(b, p - 1, c.succ), 0)
        }
        Rule::WeakBox => {
            expect(b >= 1, id, || format!("wB needs a boxed N, found `{c}`"))?;
            same(prem[0], Sequent::new(b - 1, p, c.succ), 0)
        }
        Rule::ExchN(i) => {
            expect(i + 1 < p, id, || format!("eN({i}) out of range in `{c}`"))?;
            same(prem[0], c, 0)
        }
        Rule::ExchBox(i) => {
            expect(i + 1 < b, id, || format!("eB({i}) out of range in `{c}`"))?;
            same(prem[0], c, 0)
        }
        Rule::BoxL => {
            expect(b >= 1, id, || format!("boxL needs a boxed N, found `{c}`"))?;
            same(prem[0], Sequent::new(b - 1, p + 1, c.succ), 0)
        }
        Rule::BoxR => {
            expect(p == 0 && c.succ == SType::Boxed, id, || {
                format!("boxR concludes an all-boxed `bN` sequent, found `{c}`")
            })?;
            same(prem[0], Sequent::n(b, 0), 0)
        }
        Rule::CutN => {
            same(prem[0], Sequent::n(b, p), 0)?;
            same(prem[1], Sequent::new(b, p + 1, c.succ), 1)
        }
        Rule::CutBox => {
            same(prem[0], Sequent::b(b, p), 0)?;
            same(prem[1], Sequent::new(b + 1, p, c.succ), 1)
        }
        Rule::CondN => {
            succ_n()?;
            expect(p >= 1, id, || format!("condN needs a plain N, found `{c}`"))?;
            same(prem[0], Sequent::n(b, p - 1), 0)?;
            same(prem[1], c, 1)?;
            same(prem[2], c, 2)
        }
        Rule::CondBox => {
            succ_n()?;
            expect(b >= 1, id, || format!("condB needs a boxed N, found `{c}`"))?;
            same(prem[0], Sequent::n(b - 1, p), 0)?;
            same(prem[1], c, 1)?;
            same(prem[2], c, 2)
        }
        Rule::SRec => {
            succ_n()?;
            expect(b >= 1, id, || format!("srec needs a boxed N, found `{c}`"))?;
            same(prem[0], Sequent::n(b - 1, p), 0)?;
            same(prem[1], Sequent::n(b, p + 1), 1)?;
            same(prem[2], Sequent::n(b, p + 1), 2)
        }
        Rule::Oracle(_) => succ_n(),
        Rule::Dis(comp) => match graph.get(*comp) {
            Some(n) => same(c, n.seq, 0)
                .map_err(|_| StepError::at(id, format!("bud `{c}` differs from companion `{}`", n.seq))),
            None => Err(StepError::at(id, format!("companion {comp} does not exist"))),
        },
    }
}

/// Validates every reachable node, reachability of all nodes and the allowed
/// rule tags. Returns every error found.
pub fn validate_graph(graph: &ProofGraph, allowed: Allowed) -> Result<(), Vec<StepError>> {
    let mut errs = Vec::new();
    if graph.get(graph.root).is_none() {
        errs.push(StepError {
            node: None,
            msg: format!("root {} does not exist", graph.root),
        });
        return Err(errs);
    }
    let reach: BTreeSet<NodeId> = graph.reachable().into_iter().collect();
    for (&id, node) in &graph.nodes {
        if !reach.contains(&id) {
            errs.push(StepError::at(id, "unreachable from root"));
            continue;
        }
        if let Err(e) = validate_step(graph, id) {
            errs.push(e);
        }
        let forbidden = match node.rule {
            Rule::SRec => !allowed.srec,
            Rule::Oracle(_) => !allowed.oracle,
            Rule::Dis(_) => !allowed.dis,
            _ => false,
        };
        if forbidden {
            errs.push(StepError::at(id, format!("rule {} not allowed here", node.rule.name())));
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}
