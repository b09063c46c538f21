//! Accepted circular proofs to programs over guarded recursion.
//!
//! The proof is minimized and split into strongly connected components.
//! Each cyclic component becomes one block of simultaneous recursion with a
//! function per boxed conditional in it; every other node is translated
//! by its semantic clause. Blocks are flattened to a single guarded
//! function with rotation tags before they are emitted.

use cbc_checker::{classify, Class};
use cbc_interp::{Family, PPProgram, Term, T};
use cbc_kernel::{NodeId, ProofGraph, Rule, Value};
use cbc_transform::{minimize, reduce_simultaneous, rotation_tag, strip_safe_inputs, TransformError};
use num_bigint::BigUint;
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("rejected: {0}")]
    Rejected(String),
    #[error("construction failed: {0}")]
    Construction(String),
}

impl From<TransformError> for TranslateError {
    fn from(e: TransformError) -> Self {
        TranslateError::Construction(e.to_string())
    }
}

/// One recursion block before flattening.
#[derive(Debug, Clone)]
pub struct Block {
    /// Name of the flattened definition.
    pub name: String,
    pub family: Family,
    /// Minimized node and original arity of each function.
    pub functions: Vec<(NodeId, (usize, usize))>,
    /// Common padded arity.
    pub arity: (usize, usize),
    /// The simultaneous block, calls between functions guarded.
    pub simultaneous: T,
}

#[derive(Debug, Clone)]
pub struct Translation {
    pub program: PPProgram,
    pub class: Class,
    pub blocks: Vec<Block>,
}

/// Common arity of a block: the maximum over its functions. Missing
/// inputs are filled with 0.
pub fn normalize_arities(arities: &[(usize, usize)]) -> (usize, usize) {
    arities
        .iter()
        .fold((0, 0), |(m, n), (a, b)| (m.max(*a), n.max(*b)))
}

/// `xs` followed by zeros up to length `to`.
pub fn pad(xs: &[Value], to: usize) -> Vec<Value> {
    let mut out = xs.to_vec();
    out.resize(to.max(xs.len()), Value::from(0u8));
    out
}

pub fn translate(g: &ProofGraph) -> Result<PPProgram, TranslateError> {
    Ok(translate_blocks(g)?.program)
}

pub fn translate_blocks(g: &ProofGraph) -> Result<Translation, TranslateError> {
    let c = classify(g);
    let family = match c.class {
        Class::CB => Family::NormalsAndSafes,
        Class::CNB => Family::Normals,
        Class::None => return Err(TranslateError::Rejected(c.reasons(false).join("; "))),
    };
    let mut ctx = Ctx {
        family,
        defs: Vec::new(),
        blocks: Vec::new(),
        oracles: BTreeMap::new(),
    };
    let main = ctx.graph(g)?;
    ctx.defs.push(("main".into(), main));
    Ok(Translation {
        program: PPProgram {
            oracles: ctx.oracles,
            defs: ctx.defs,
            main: "main".into(),
        },
        class: c.class,
        blocks: ctx.blocks,
    })
}

struct Ctx {
    family: Family,
    defs: Vec<(String, T)>,
    blocks: Vec<Block>,
    oracles: BTreeMap<String, (usize, usize)>,
}

impl Ctx {
    /// Closed term for the root of a graph.
    fn graph(&mut self, g: &ProofGraph) -> Result<T, TranslateError> {
        if g.is_empty() {
            return Err(TranslateError::Rejected("empty proof".into()));
        }
        let (m, _) = minimize(g);
        let comps = components(&m);
        let mut gt = GraphTr {
            g: &m,
            comp: comps,
            closed: BTreeMap::new(),
            entries: BTreeMap::new(),
            stripped: BTreeMap::new(),
        };
        gt.closed(self, m.root)
    }
}

struct GraphTr<'a> {
    g: &'a ProofGraph,
    /// Cyclic component of each node on a cycle.
    comp: BTreeMap<NodeId, Vec<NodeId>>,
    closed: BTreeMap<NodeId, T>,
    entries: BTreeMap<NodeId, T>,
    stripped: BTreeMap<NodeId, T>,
}

/// Nodes lying on a cycle, mapped to their strongly connected component.
fn components(g: &ProofGraph) -> BTreeMap<NodeId, Vec<NodeId>> {
    let ids = g.reachable();
    let reach: BTreeMap<NodeId, BTreeSet<NodeId>> = ids.iter().map(|i| (*i, g.reachable_from(*i).into_iter().collect())).collect();
    let mut out = BTreeMap::new();
    for a in &ids {
        let comp: Vec<NodeId> = ids.iter().copied().filter(|b| reach[a].contains(b) && reach[b].contains(a)).collect();
        let cyclic = comp.len() > 1 || g.node(*a).premises.contains(a);
        if cyclic {
            out.insert(*a, comp);
        }
    }
    out
}

fn zero(m: usize, n: usize) -> T {
    Term::constant(m, n, &BigUint::from(0u8))
}

fn normals(m: usize, skip: usize) -> Vec<T> {
    (skip..m).map(|i| Term::normal(m, 0, i)).collect()
}

fn safes(m: usize, n: usize, upto: usize) -> Vec<T> {
    (0..upto).map(|j| Term::safe(m, n, j)).collect()
}

/// The semantic clause of one step over the terms of its premises. For
/// `cutB` the first premise term is the safe-free version of the left
/// premise.
fn step(g: &ProofGraph, id: NodeId, prem: Vec<T>) -> Result<T, TranslateError> {
    let node = g.node(id);
    let (b, p) = (node.seq.boxed, node.seq.plain);
    let pred = |t: T, m: usize, n: usize| Term::app(m, n, Term::pred(), vec![t]);
    Ok(match &node.rule {
        Rule::Id => Term::safe(0, 1, 0),
        Rule::Zero => Term::zero(),
        Rule::S0 => Term::app(b, p, Term::s0(), vec![prem[0].clone()]),
        Rule::S1 => Term::app(b, p, Term::s1(), vec![prem[0].clone()]),
        Rule::BoxR => prem[0].clone(),
        Rule::WeakN => Term::comp(b, p, prem[0].clone(), normals(b, 0), safes(b, p, p - 1)),
        Rule::WeakBox => Term::comp(b, p, prem[0].clone(), normals(b, 1), safes(b, p, p)),
        Rule::ExchN(i) => {
            let mut s = safes(b, p, p);
            s.swap(*i, i + 1);
            Term::comp(b, p, prem[0].clone(), normals(b, 0), s)
        }
        Rule::ExchBox(i) => {
            let mut n = normals(b, 0);
            n.swap(*i, i + 1);
            Term::comp(b, p, prem[0].clone(), n, safes(b, p, p))
        }
        Rule::BoxL => {
            let mut s = safes(b, p, p);
            s.push(Term::normal(b, p, 0));
            Term::comp(b, p, prem[0].clone(), normals(b, 1), s)
        }
        Rule::CutN => {
            let mut s = safes(b, p, p);
            s.push(prem[0].clone());
            Term::comp(b, p, prem[1].clone(), normals(b, 0), s)
        }
        Rule::CutBox => {
            let mut n = vec![prem[0].clone()];
            n.extend(normals(b, 0));
            Term::comp(b, p, prem[1].clone(), n, safes(b, p, p))
        }
        Rule::CondN => {
            let w = Term::safe(b, p, p - 1);
            let rest = safes(b, p, p - 1);
            let zero_case = Term::comp(b, p, prem[0].clone(), normals(b, 0), rest.clone());
            let mut half = rest;
            half.push(pred(w.clone(), b, p));
            let even = Term::comp(b, p, prem[1].clone(), normals(b, 0), half.clone());
            let odd = Term::comp(b, p, prem[2].clone(), normals(b, 0), half);
            Term::app(b, p, Term::cond(), vec![w, zero_case, even, odd])
        }
        Rule::CondBox => {
            let x = Term::normal(b, p, 0);
            let zero_case = Term::comp(b, p, prem[0].clone(), normals(b, 1), safes(b, p, p));
            let mut half = vec![pred(Term::normal(b, 0, 0), b, 0)];
            half.extend(normals(b, 1));
            let even = Term::comp(b, p, prem[1].clone(), half.clone(), safes(b, p, p));
            let odd = Term::comp(b, p, prem[2].clone(), half, safes(b, p, p));
            Term::app(b, p, Term::cond(), vec![x, zero_case, even, odd])
        }
        Rule::Oracle(a) => Term::oracle(a.clone(), b, p),
        r @ (Rule::SRec | Rule::Dis(_)) => {
            return Err(TranslateError::Rejected(format!("{r} at node {id} is not a circular proof step")))
        }
    })
}

impl GraphTr<'_> {
    fn is_function(&self, id: NodeId) -> bool {
        self.comp.contains_key(&id) && self.g.node(id).rule == Rule::CondBox
    }

    /// Closed term of a node.
    fn closed(&mut self, ctx: &mut Ctx, id: NodeId) -> Result<T, TranslateError> {
        if let Some(t) = self.closed.get(&id) {
            return Ok(t.clone());
        }
        let t = if self.is_function(id) {
            self.entry(ctx, id)?
        } else {
            let prem = self.premises(ctx, id, &mut |s, ctx, p| s.closed(ctx, p))?;
            step(self.g, id, prem)?
        };
        if let Rule::Oracle(a) = &self.g.node(id).rule {
            let s = self.g.node(id).seq;
            ctx.oracles.insert(a.clone(), (s.boxed, s.plain));
        }
        self.closed.insert(id, t.clone());
        Ok(t)
    }

    fn premises(
        &mut self,
        ctx: &mut Ctx,
        id: NodeId,
        sub: &mut dyn FnMut(&mut Self, &mut Ctx, NodeId) -> Result<T, TranslateError>,
    ) -> Result<Vec<T>, TranslateError> {
        let node = self.g.node(id).clone();
        let mut out = Vec::new();
        for (k, p) in node.premises.iter().enumerate() {
            if node.rule == Rule::CutBox && k == 0 {
                out.push(self.strip(ctx, *p)?);
            } else {
                out.push(sub(self, ctx, *p)?);
            }
        }
        Ok(out)
    }

    /// The left premise of a boxed cut read over normal inputs only.
    fn strip(&mut self, ctx: &mut Ctx, id: NodeId) -> Result<T, TranslateError> {
        if let Some(t) = self.stripped.get(&id) {
            return Ok(t.clone());
        }
        let mut sub = self.g.clone();
        sub.root = id;
        sub.prune();
        let t = ctx.graph(&strip_safe_inputs(&sub)?)?;
        self.stripped.insert(id, t.clone());
        Ok(t)
    }

    /// Call into the flattened block of a function node, from outside.
    fn entry(&mut self, ctx: &mut Ctx, id: NodeId) -> Result<T, TranslateError> {
        if !self.entries.contains_key(&id) {
            self.block(ctx, id)?;
        }
        Ok(self.entries[&id].clone())
    }

    fn block(&mut self, ctx: &mut Ctx, member: NodeId) -> Result<(), TranslateError> {
        let comp = self.comp[&member].clone();
        let funcs: Vec<NodeId> = comp.iter().copied().filter(|n| self.g.node(*n).rule == Rule::CondBox).collect();
        let arities: Vec<(usize, usize)> = funcs.iter().map(|f| (self.g.node(*f).seq.boxed, self.g.node(*f).seq.plain)).collect();
        let (bm, pm) = normalize_arities(&arities);
        if arities.iter().any(|(b, _)| *b != bm) {
            return Err(TranslateError::Construction("functions of one cycle differ in normal inputs".into()));
        }
        let index = ctx.blocks.len();
        let gname = format!("g{index}");
        let fname = |i: usize| format!("f{index}_{i}");
        // reserve the slot so nested blocks get later numbers
        ctx.blocks.push(Block {
            name: gname.clone(),
            family: ctx.family,
            functions: funcs.iter().copied().zip(arities.iter().copied()).collect(),
            arity: (bm, pm),
            simultaneous: Term::zero(),
        });

        let members: BTreeSet<NodeId> = comp.iter().copied().collect();
        let mut local: BTreeMap<NodeId, T> = BTreeMap::new();
        for (i, f) in funcs.iter().enumerate() {
            let (_, p) = arities[i];
            let mut s = safes(bm, p, p);
            s.extend((p..pm).map(|_| zero(bm, p)));
            local.insert(*f, Term::comp(bm, p, Term::gcall(fname(i), bm, pm), normals(bm, 0), s));
        }
        let mut defs = Vec::new();
        for (i, f) in funcs.iter().enumerate() {
            let prem = self.premises(ctx, *f, &mut |s, ctx, p| s.inside(ctx, p, &members, &mut local))?;
            let body = step(self.g, *f, prem)?;
            let p = arities[i].1;
            let body = if p == pm { body } else { Term::comp(bm, pm, body, normals(bm, 0), safes(bm, pm, p)) };
            defs.push((fname(i), body));
        }
        let fix = Rc::new(Term::Fix {
            family: ctx.family,
            m: bm,
            n: pm,
            defs,
            select: 0,
        });
        let flat = reduce_simultaneous(&fix, &gname)?.flat;
        let k = funcs.len();
        for (i, f) in funcs.iter().enumerate() {
            let p = arities[i].1;
            let mut s = safes(bm, p, p);
            s.extend((p..pm).map(|_| zero(bm, p)));
            s.extend(rotation_tag(i, k).into_iter().map(|c| Term::constant(bm, p, &BigUint::from(c))));
            let call = Term::comp(bm, p, Term::reference(&gname, bm, pm + k), normals(bm, 0), s);
            self.entries.insert(*f, call);
        }
        ctx.blocks[index].simultaneous = fix;
        ctx.defs.push((gname, flat));
        Ok(())
    }

    /// Term of a node inside a cyclic component: function nodes become
    /// guarded calls, other members are unfolded, the rest is closed.
    fn inside(
        &mut self,
        ctx: &mut Ctx,
        id: NodeId,
        members: &BTreeSet<NodeId>,
        local: &mut BTreeMap<NodeId, T>,
    ) -> Result<T, TranslateError> {
        if let Some(t) = local.get(&id) {
            return Ok(t.clone());
        }
        if !members.contains(&id) {
            return self.closed(ctx, id);
        }
        let node = self.g.node(id).clone();
        let mut prem = Vec::new();
        for (k, p) in node.premises.iter().enumerate() {
            if node.rule == Rule::CutBox && k == 0 {
                prem.push(self.strip(ctx, *p)?);
            } else {
                prem.push(self.inside(ctx, *p, members, local)?);
            }
        }
        let t = step(self.g, id, prem)?;
        local.insert(id, t.clone());
        Ok(t)
    }
}
