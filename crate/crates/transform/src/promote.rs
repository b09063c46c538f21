use crate::build::Builder;
use crate::TransformError;
use cbc_kernel::{NodeId, ProofGraph, Rule, SType, Sequent};
use std::collections::BTreeMap;

/// Moves every plain input into the boxed zone: a node with sequent
/// `(b, p, A)` becomes one with `(b + p, 0, A)` computing the same function
/// with the former safes read as normals. Back edges are kept, so the
/// result is regular whenever the input is.
pub fn box_promote(g: &ProofGraph) -> Result<ProofGraph, TransformError> {
    let mut st = Promote {
        g,
        b: Builder::new(format!("{}_box", g.name)),
        done: BTreeMap::new(),
    };
    let root = st.go(g.root)?;
    Ok(st.b.finish(root))
}

struct Promote<'a> {
    g: &'a ProofGraph,
    b: Builder,
    done: BTreeMap<NodeId, NodeId>,
}

impl Promote<'_> {
    fn go(&mut self, id: NodeId) -> Result<NodeId, TransformError> {
        if let Some(&d) = self.done.get(&id) {
            return Ok(d);
        }
        let node = self.g.node(id).clone();
        let s = node.seq;
        let k = s.boxed + s.plain;
        let out = Sequent::new(k, 0, s.succ);
        let me = self.b.reserve();
        self.done.insert(id, me);
        let mut prem = Vec::new();
        for p in &node.premises {
            prem.push(self.go(*p)?);
        }
        let (rule, premises) = match &node.rule {
            Rule::Id => {
                let id0 = self.b.add(Rule::Id, Sequent::n(0, 1), vec![]);
                (Rule::BoxL, vec![id0])
            }
            Rule::Zero | Rule::S0 | Rule::S1 | Rule::BoxR | Rule::CutBox | Rule::CondBox => (node.rule.clone(), prem),
            Rule::ExchBox(i) => (Rule::ExchBox(*i), prem),
            Rule::ExchN(i) => (Rule::ExchBox(s.boxed + i), prem),
            Rule::WeakBox => (Rule::WeakBox, prem),
            Rule::WeakN => {
                // drop the last position
                let mut nmap: Vec<usize> = (0..k).collect();
                nmap.retain(|&i| i != k - 1);
                let r = self.b.restructure(out, &nmap, &[], prem[0]);
                return self.alias(me, r);
            }
            Rule::BoxL => {
                let nmap: Vec<usize> = (1..k).chain([0]).collect();
                let r = self.b.restructure(out, &nmap, &[], prem[0]);
                return self.alias(me, r);
            }
            Rule::CutN => {
                let left = self.b.add(Rule::BoxR, out.with_succ(SType::Boxed), vec![prem[0]]);
                let wide = Sequent::new(k + 1, 0, s.succ);
                let nmap: Vec<usize> = (1..=k).chain([0]).collect();
                let right = self.b.restructure(wide, &nmap, &[], prem[1]);
                (Rule::CutBox, vec![left, right])
            }
            Rule::CondN => {
                // bring the scrutinee to the front, branch there, then put
                // it back where the branches expect it
                let front = Sequent::new(k, 0, s.succ);
                let back: Vec<usize> = (1..k).chain([0]).collect();
                let p1 = self.b.restructure(front, &back, &[], prem[1]);
                let p2 = self.b.restructure(front, &back, &[], prem[2]);
                let c = self.b.add(Rule::CondBox, front, vec![prem[0], p1, p2]);
                let to_front: Vec<usize> = [k - 1].into_iter().chain(0..k - 1).collect();
                let r = self.b.restructure(out, &to_front, &[], c);
                return self.alias(me, r);
            }
            r @ (Rule::SRec | Rule::Oracle(_) | Rule::Dis(_)) => {
                return Err(TransformError::Unsupported(format!("{r} at node {id}")));
            }
        };
        self.b.set(me, rule, out, premises);
        Ok(me)
    }

    fn alias(&mut self, me: NodeId, r: NodeId) -> Result<NodeId, TransformError> {
        self.b.alias(me, r);
        Ok(me)
    }
}
