//! Terms to finite derivations, recursion steps to loops, and nested
//! recursion to circular proofs with parameter passing.

use cbc_interp::{check_term_class, ClassViolation, Sort, Term, TermClass, T};
use cbc_kernel::{Node, NodeId, ProofGraph, Rule, SType, Sequent};
use cbc_transform::{pass_parameters, Builder, TransformError};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("class violation: {0}")]
    Class(String),
    #[error(transparent)]
    Shape(#[from] TransformError),
    #[error("unsupported term: {0}")]
    Unsupported(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl From<ClassViolation> for CompileError {
    fn from(v: ClassViolation) -> Self {
        CompileError::Class(v.to_string())
    }
}

/// A finite derivation of a B term. Recursion is kept as `srec` steps.
pub fn term_to_derivation(t: &T) -> Result<ProofGraph, CompileError> {
    check_term_class(t, TermClass::B)?;
    let mut c = Compiler::new("derivation");
    let root = c.term(t)?;
    Ok(c.b.finish(root))
}

/// Replaces every `srec` step by a boxed conditional whose two recursive
/// premises cut the looped node into the step function.
pub fn srec_eliminate(g: &ProofGraph) -> ProofGraph {
    let mut b = Builder::extend(g.clone());
    let recs: Vec<NodeId> = g.reachable().into_iter().filter(|id| g.node(*id).rule == Rule::SRec).collect();
    for id in recs {
        let node = g.node(id).clone();
        let s = node.seq;
        let h0 = b.add(Rule::CutN, s, vec![id, node.premises[1]]);
        let h1 = b.add(Rule::CutN, s, vec![id, node.premises[2]]);
        b.set(id, Rule::CondBox, s, vec![node.premises[0], h0, h1]);
    }
    let mut out = b.finish(g.root);
    out.name = g.name.clone();
    out
}

/// A circular proof of an NB term. Nested recursions become loops closed
/// at a boxed conditional after passing the recursion parameters to the
/// recursive-call leaves.
pub fn nb_to_circular(t: &T) -> Result<ProofGraph, CompileError> {
    let g = srec_eliminate(&oracle_derivation(t)?);
    if !oracle_paths_avoid_cut_box(&g) {
        return Err(CompileError::Internal("boxed cut on a path to an oracle".into()));
    }
    Ok(g)
}

/// A proof of an NB term whose free oracles become oracle leaves. Inner
/// nested recursions are closed into loops; `srec` steps are kept.
pub fn oracle_derivation(t: &T) -> Result<ProofGraph, CompileError> {
    check_term_class(t, TermClass::NB)?;
    let mut c = Compiler::new("circular");
    let root = c.term(t)?;
    Ok(c.b.finish(root))
}

/// B terms through the finite derivation, other NB terms through nested
/// recursion.
pub fn compile_circular(t: &T) -> Result<ProofGraph, CompileError> {
    if check_term_class(t, TermClass::B).is_ok() {
        Ok(srec_eliminate(&term_to_derivation(t)?))
    } else {
        nb_to_circular(t)
    }
}

/// Whether no path from the root to an oracle leaf passes a `cutB` step.
pub fn oracle_paths_avoid_cut_box(g: &ProofGraph) -> bool {
    let mut rev: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut reach = BTreeSet::new();
    for id in g.reachable() {
        let n = g.node(id);
        for p in &n.premises {
            rev.entry(*p).or_default().push(id);
        }
        if matches!(n.rule, Rule::Oracle(_)) {
            reach.insert(id);
            queue.push_back(id);
        }
    }
    while let Some(n) = queue.pop_front() {
        for p in rev.get(&n).into_iter().flatten() {
            if reach.insert(*p) {
                queue.push_back(*p);
            }
        }
    }
    !reach.iter().any(|id| g.node(*id).rule == Rule::CutBox)
}

struct Compiler {
    b: Builder,
    memo: BTreeMap<usize, NodeId>,
}

impl Compiler {
    fn new(name: &str) -> Self {
        Compiler {
            b: Builder::new(name),
            memo: BTreeMap::new(),
        }
    }

    fn term(&mut self, t: &T) -> Result<NodeId, CompileError> {
        let key = std::rc::Rc::as_ptr(t) as usize;
        if let Some(&id) = self.memo.get(&key) {
            return Ok(id);
        }
        let id = self.build(t)?;
        self.memo.insert(key, id);
        Ok(id)
    }

    fn id(&mut self) -> NodeId {
        self.b.add(Rule::Id, Sequent::n(0, 1), vec![])
    }

    fn build(&mut self, t: &T) -> Result<NodeId, CompileError> {
        Ok(match &**t {
            Term::Zero => self.b.add(Rule::Zero, Sequent::n(0, 0), vec![]),
            Term::S0 | Term::S1 => {
                let r = if **t == Term::S0 { Rule::S0 } else { Rule::S1 };
                let i = self.id();
                self.b.add(r, Sequent::n(0, 1), vec![i])
            }
            Term::Pred => {
                let z = self.b.add(Rule::Zero, Sequent::n(0, 0), vec![]);
                let i = self.id();
                self.b.add(Rule::CondN, Sequent::n(0, 1), vec![z, i, i])
            }
            Term::Cond => {
                // move the scrutinee last, then project each branch
                let inner = Sequent::n(0, 4);
                let i = self.id();
                let x = self.b.restructure(Sequent::n(0, 3), &[], &[0], i);
                let y = self.b.restructure(inner, &[], &[1], i);
                let z = self.b.restructure(inner, &[], &[2], i);
                let c = self.b.add(Rule::CondN, inner, vec![x, y, z]);
                self.b.restructure(inner, &[], &[1, 2, 3, 0], c)
            }
            Term::Proj { m, n, sort, idx } => {
                let concl = Sequent::n(*m, *n);
                match sort {
                    Sort::Safe => {
                        let i = self.id();
                        self.b.restructure(concl, &[], &[*idx], i)
                    }
                    Sort::Normal => {
                        let i = self.id();
                        let l = self.b.add(Rule::BoxL, Sequent::n(1, 0), vec![i]);
                        self.b.restructure(concl, &[*idx], &[], l)
                    }
                }
            }
            Term::Oracle { name, m, n } => self.b.add(Rule::Oracle(name.clone()), Sequent::n(*m, *n), vec![]),
            Term::Comp {
                m,
                n,
                head,
                normals,
                safes,
            } => self.comp(*m, *n, head, normals, safes)?,
            Term::SRecN { g, h0, h1 } => {
                let (m, n) = arity(t)?;
                let g = self.term(g)?;
                let h0 = self.term(h0)?;
                let h1 = self.term(h1)?;
                self.b.add(Rule::SRec, Sequent::n(m, n), vec![g, h0, h1])
            }
            Term::SNRec { oracle, g, h0, h1 } => self.snrec(t, oracle, g, h0, h1)?,
            Term::Fix { .. } | Term::GuardedCall { .. } | Term::Ref { .. } => {
                return Err(CompileError::Unsupported(t.to_string()))
            }
        })
    }

    /// Safe arguments are cut in first with plain cuts, then normal
    /// arguments with boxed cuts, so that paths to oracles inside safe
    /// arguments never pass a boxed cut.
    fn comp(&mut self, m: usize, n: usize, head: &T, normals: &[T], safes: &[T]) -> Result<NodeId, CompileError> {
        let (hm, hn) = (normals.len(), safes.len());
        let p = n + hn;
        // context on top: (r_{hm-1}, .., r_0, x ; y, t_0, .., t_{hn-1})
        let head_nmap: Vec<usize> = (0..hm).rev().collect();
        let head_smap: Vec<usize> = (n..p).collect();
        let h = self.term(head)?;
        let mut top = self.b.restructure(Sequent::n(hm + m, p), &head_nmap, &head_smap, h);
        for i in (0..hm).rev() {
            let r = self.term(&normals[i])?;
            let boxed = self.b.add(Rule::BoxR, Sequent::new(m, 0, SType::Boxed), vec![r]);
            let nmap: Vec<usize> = (i..i + m).collect();
            let left = self.b.restructure(Sequent::new(i + m, p, SType::Boxed), &nmap, &[], boxed);
            top = self.b.add(Rule::CutBox, Sequent::n(i + m, p), vec![left, top]);
        }
        for j in (0..hn).rev() {
            let t = self.term(&safes[j])?;
            let nmap: Vec<usize> = (0..m).collect();
            let smap: Vec<usize> = (0..n).collect();
            let left = self.b.restructure(Sequent::n(m, n + j), &nmap, &smap, t);
            top = self.b.add(Rule::CutN, Sequent::n(m, n + j), vec![left, top]);
        }
        Ok(top)
    }

    /// `f(0, x; y) = g(x; y)`, `f(s_i x, x; y) = h_i(x, x; y)` with the
    /// oracle standing for `f(x, x; -)`.
    fn snrec(&mut self, t: &T, oracle: &str, g: &T, h0: &T, h1: &T) -> Result<NodeId, CompileError> {
        let (m, n) = arity(t)?;
        let g = self.term(g)?;
        let me = self.b.reserve();
        let mut steps = Vec::new();
        for h in [h0, h1] {
            let mut inner = Compiler::new("step");
            let r = inner.term(h)?;
            let d = inner.b.finish(r);
            if !oracle_paths_avoid_cut_box(&d) {
                return Err(CompileError::Internal(format!("boxed cut on a path to {oracle}")));
            }
            let star = format!("{oracle}*");
            let d = pass_parameters(&d, oracle, &star)?;
            steps.push(self.graft(&d, &star, me));
        }
        self.b.set(me, Rule::CondBox, Sequent::n(m, n), vec![g, steps[0], steps[1]]);
        Ok(me)
    }

    /// Copies `d` into the builder with every `leaf` oracle redirected to
    /// `target`.
    fn graft(&mut self, d: &ProofGraph, leaf: &str, target: NodeId) -> NodeId {
        let mut map = BTreeMap::new();
        let ids = d.reachable();
        for id in &ids {
            let n = d.node(*id);
            let new = if matches!(&n.rule, Rule::Oracle(a) if a == leaf) {
                target
            } else {
                self.b.reserve()
            };
            map.insert(*id, new);
        }
        for id in &ids {
            let n = d.node(*id);
            if matches!(&n.rule, Rule::Oracle(a) if a == leaf) {
                continue;
            }
            let node = Node::new(n.rule.clone(), n.seq, n.premises.iter().map(|p| map[p]).collect());
            self.b.set(map[id], node.rule, node.seq, node.premises);
        }
        map[&d.root]
    }
}

fn arity(t: &T) -> Result<(usize, usize), CompileError> {
    cbc_interp::arity(t).map_err(|e| CompileError::Class(e.to_string()))
}
