use crate::build::Builder;
use crate::TransformError;
use cbc_kernel::{NodeId, ProofGraph, Rule, SType, Sequent};
use std::collections::{BTreeMap, BTreeSet};

/// For a proof concluding `□N`, an equivalent proof over the boxed zone
/// alone. Sub-proofs above `boxR` are shared unchanged.
pub fn strip_safe_inputs(g: &ProofGraph) -> Result<ProofGraph, TransformError> {
    let root = g.root_node();
    if root.seq.succ != SType::Boxed {
        return Err(TransformError::Unsupported(format!(
            "root concludes {}, expected a boxed succedent",
            root.seq.succ
        )));
    }
    let mut st = Strip {
        g,
        b: Builder::extend(g.clone()),
        done: BTreeMap::new(),
        active: BTreeSet::new(),
    };
    let r = st.go(g.root)?;
    let mut out = st.b.finish(r);
    out.name = format!("{}_strip", g.name);
    Ok(out)
}

struct Strip<'a> {
    g: &'a ProofGraph,
    b: Builder,
    done: BTreeMap<NodeId, NodeId>,
    active: BTreeSet<NodeId>,
}

impl Strip<'_> {
    fn go(&mut self, id: NodeId) -> Result<NodeId, TransformError> {
        if let Some(&d) = self.done.get(&id) {
            return Ok(d);
        }
        let node = self.g.node(id).clone();
        let s = node.seq;
        let out = Sequent::new(s.boxed, 0, SType::Boxed);
        if node.rule == Rule::BoxR {
            return Ok(id);
        }
        if !self.active.insert(id) {
            return Err(TransformError::NotProgressing(format!(
                "boxed succedent loops through node {id} without boxR"
            )));
        }
        let p = &node.premises;
        let r = match &node.rule {
            Rule::S0 | Rule::S1 => {
                let q = self.go(p[0])?;
                self.b.add(node.rule.clone(), out, vec![q])
            }
            Rule::WeakN | Rule::ExchN(_) => self.go(p[0])?,
            Rule::WeakBox | Rule::BoxL => {
                let q = self.go(p[0])?;
                self.b.add(Rule::WeakBox, out, vec![q])
            }
            Rule::ExchBox(i) => {
                let q = self.go(p[0])?;
                self.b.add(Rule::ExchBox(*i), out, vec![q])
            }
            Rule::CutN => self.go(p[1])?,
            Rule::CutBox => {
                let l = self.go(p[0])?;
                let r = self.go(p[1])?;
                self.b.add(Rule::CutBox, out, vec![l, r])
            }
            r => {
                return Err(TransformError::Unsupported(format!(
                    "{r} cannot conclude a boxed succedent (node {id})"
                )))
            }
        };
        self.active.remove(&id);
        self.done.insert(id, r);
        Ok(r)
    }
}
