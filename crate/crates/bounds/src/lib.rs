//! Growth bounds `|f(x; y)| <= e(Σ|x|) + d·Σc + max|y|` synthesized from
//! the structure of a term, and a sampler that checks them.

mod expr;
mod verify;

pub use expr::BoundExpr;
pub use verify::{sample_inputs, verify_bound, verify_pair, verify_program, BoundReport, Violation};

use cbc_interp::{PPProgram, Sort, Term, T};
use std::collections::BTreeMap;
use std::rc::Rc;

#[derive(Debug, Clone)]
pub struct BoundPair {
    pub e: BoundExpr,
    pub d: u64,
    pub is_polynomial: bool,
}

impl BoundPair {
    fn new(e: BoundExpr, d: u64) -> Self {
        let is_polynomial = e.is_polynomial();
        BoundPair { e, d: d.max(1), is_polynomial }
    }
}

/// One recursion inside a term: the bound of the recursive function, the
/// summed bound of its step functions and their oracle factor.
#[derive(Debug, Clone)]
pub struct RecursionBound {
    pub e_f: BoundExpr,
    pub e_h: BoundExpr,
    pub d_h: u64,
}

pub fn synthesize_bound(t: &T) -> BoundPair {
    Synth::default().go(t)
}

/// Bounds of every definition of a program; references use the bound of
/// the definition they name.
pub fn synthesize_program(p: &PPProgram) -> Vec<(String, BoundPair)> {
    let mut s = Synth::default();
    p.defs
        .iter()
        .map(|(name, t)| {
            let b = s.go(t);
            s.refs.insert(name.clone(), b.clone());
            (name.clone(), b)
        })
        .collect()
}

/// Bounds of every recursion in `t`, innermost first.
pub fn recursion_bounds(t: &T) -> Vec<RecursionBound> {
    let mut s = Synth::default();
    s.go(t);
    s.recursions
}

/// `m(x, y) = e(Σ|x|) + d·Σc + max|y|`, the bound on every safe input an
/// oracle call can see when each oracle `a_i` satisfies
/// `|a_i(u; v)| <= c_i + max|v|`.
#[derive(Debug, Clone)]
pub struct InputBound {
    pub pair: BoundPair,
    pub constants: Vec<u64>,
}

impl InputBound {
    /// `None` when the bound is too large to represent.
    pub fn at(&self, xs: &[cbc_kernel::Value], ys: &[cbc_kernel::Value]) -> Option<num_bigint::BigUint> {
        let n: u64 = xs.iter().map(|x| cbc_kernel::value::len(x) as u64).sum();
        let my = ys.iter().map(|y| cbc_kernel::value::len(y) as u64).max().unwrap_or(0);
        let c: u64 = self.constants.iter().sum();
        Some(self.pair.e.eval(n)? + num_bigint::BigUint::from(self.pair.d) * c + my)
    }
}

pub fn input_bound(t: &T, constants: &[u64]) -> InputBound {
    InputBound {
        pair: synthesize_bound(t),
        constants: constants.to_vec(),
    }
}

#[derive(Default)]
struct Synth {
    recursions: Vec<RecursionBound>,
    memo: BTreeMap<usize, BoundPair>,
    refs: BTreeMap<String, BoundPair>,
}

impl Synth {
    fn go(&mut self, t: &T) -> BoundPair {
        let key = Rc::as_ptr(t) as usize;
        if let Some(b) = self.memo.get(&key) {
            return b.clone();
        }
        let b = self.build(t);
        self.memo.insert(key, b.clone());
        b
    }

    fn build(&mut self, t: &T) -> BoundPair {
        use BoundExpr as E;
        match &**t {
            Term::Zero | Term::S0 | Term::S1 | Term::Pred | Term::Cond | Term::Proj { .. } => {
                BoundPair::new(E::add(E::constant(1), E::var()), 1)
            }
            Term::Ref { name, .. } if self.refs.contains_key(name) => self.refs[name].clone(),
            Term::Oracle { .. } | Term::GuardedCall { .. } | Term::Ref { .. } => BoundPair::new(E::constant(0), 1),
            Term::Comp {
                head,
                normals,
                safes,
                ..
            } => {
                let h = self.go(head);
                // projections of the normal inputs add up to at most the
                // multiplicity of the most repeated one times n
                let mut mult: BTreeMap<usize, u64> = BTreeMap::new();
                let mut inner = E::constant(0);
                for r in normals {
                    match &**r {
                        Term::Proj {
                            sort: Sort::Normal,
                            idx,
                            ..
                        } => *mult.entry(*idx).or_default() += 1,
                        _ => inner = E::add(inner, self.go(r).e),
                    }
                }
                if let Some(k) = mult.values().max() {
                    inner = E::add(E::mul(E::constant(*k), E::var()), inner);
                }
                let mut e = E::apply(h.e, inner);
                let mut d_args = 0;
                for s in safes {
                    let b = self.go(s);
                    e = E::add(e, b.e);
                    if s.bears_oracles() {
                        d_args = d_args.max(b.d);
                    }
                }
                let d_head = if head.bears_oracles() { h.d } else { 0 };
                BoundPair::new(e, d_head + d_args)
            }
            Term::SRecN { g, h0, h1 } => {
                let parts = [self.go(g), self.go(h0), self.go(h1)];
                self.recursion(&parts, 1, 1)
            }
            Term::SNRec { g, h0, h1, .. } => {
                let parts = [self.go(g), self.go(h0), self.go(h1)];
                let d = parts[1].d.max(parts[2].d);
                self.recursion(&parts, d, d)
            }
            Term::Fix { defs, .. } => {
                let parts: Vec<BoundPair> = defs.iter().map(|(_, b)| self.go(b)).collect();
                let d = parts.iter().map(|p| p.d).max().unwrap_or(1);
                self.recursion(&parts, d, d)
            }
        }
    }

    /// `e_f(n) = (n + 1)·d^n·(e_1(n) + .. + e_k(n))`, which satisfies
    /// `e_f(n) >= e_h(n) + d·e_f(n - 1)`.
    fn recursion(&mut self, parts: &[BoundPair], d_h: u64, d_f: u64) -> BoundPair {
        use BoundExpr as E;
        let sum = parts.iter().fold(E::constant(0), |acc, p| E::add(acc, p.e.clone()));
        let e_f = E::mul(
            E::mul(E::add(E::var(), E::constant(1)), E::pow(E::constant(d_h), E::var())),
            sum.clone(),
        );
        self.recursions.push(RecursionBound {
            e_f: e_f.clone(),
            e_h: sum,
            d_h,
        });
        BoundPair::new(e_f, d_f)
    }
}
