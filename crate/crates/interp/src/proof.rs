use crate::{EvalConfig, EvalError, OracleEnv};
use cbc_kernel::value::{is_odd, pred, s0, s1};
use cbc_kernel::{NodeId, ProofGraph, Rule, Value};
use num_traits::Zero;
use std::collections::{HashMap, HashSet};

enum Task {
    Eval(NodeId, Vec<Value>),
    Ret(Value),
}

enum Frame {
    Succ(bool),
    /// Continue with the right premise of a cut once the left value is known.
    CutN(NodeId, Vec<Value>),
    CutB(NodeId, Vec<Value>),
    /// Step premise of srec, given the predecessor and the context tail.
    SRec(NodeId, Value, Vec<Value>),
    Memo(NodeId, Vec<Value>),
}

/// Evaluates nodes of one graph. The context vector holds the boxed
/// (normal) inputs followed by the plain (safe) ones.
pub struct ProofEval<'a> {
    g: &'a ProofGraph,
    host: &'a OracleEnv,
    cfg: EvalConfig,
    fuel: u64,
    pub steps: u64,
    memo: HashMap<(NodeId, Vec<Value>), Value>,
    shared: HashSet<NodeId>,
}

impl<'a> ProofEval<'a> {
    pub fn new(g: &'a ProofGraph, host: &'a OracleEnv, cfg: EvalConfig) -> Self {
        let shared = g
            .in_degrees()
            .into_iter()
            .filter(|&(_, d)| d >= 2)
            .map(|(id, _)| id)
            .collect();
        ProofEval {
            g,
            host,
            cfg,
            fuel: cfg.fuel,
            steps: 0,
            memo: HashMap::new(),
            shared,
        }
    }

    pub fn refuel(&mut self) {
        self.fuel = self.cfg.fuel;
        self.steps = 0;
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn eval(&mut self, node: NodeId, xs: &[Value], ys: &[Value]) -> Result<Value, EvalError> {
        let n = self
            .g
            .get(node)
            .ok_or_else(|| EvalError::UnknownName(format!("node {node}")))?;
        if (n.seq.boxed, n.seq.plain) != (xs.len(), ys.len()) {
            return Err(EvalError::Arity(format!(
                "`{}` takes ({}, {}) inputs, given ({}, {})",
                n.seq,
                n.seq.boxed,
                n.seq.plain,
                xs.len(),
                ys.len()
            )));
        }
        let ctx: Vec<Value> = xs.iter().chain(ys).cloned().collect();
        self.run(node, ctx)
    }

    fn run(&mut self, node: NodeId, ctx: Vec<Value>) -> Result<Value, EvalError> {
        let mut stack: Vec<Frame> = Vec::new();
        let mut task = Task::Eval(node, ctx);
        loop {
            task = match task {
                Task::Ret(v) => match stack.pop() {
                    None => return Ok(v),
                    Some(Frame::Succ(b)) => Task::Ret(if b { s1(&v) } else { s0(&v) }),
                    Some(Frame::CutN(d1, mut ctx)) => {
                        ctx.push(v);
                        Task::Eval(d1, ctx)
                    }
                    Some(Frame::CutB(d1, mut ctx)) => {
                        ctx.insert(0, v);
                        Task::Eval(d1, ctx)
                    }
                    Some(Frame::SRec(d, x, mut ctx)) => {
                        ctx.insert(0, x);
                        ctx.push(v);
                        Task::Eval(d, ctx)
                    }
                    Some(Frame::Memo(id, ctx)) => {
                        self.memo.insert((id, ctx), v.clone());
                        Task::Ret(v)
                    }
                },
                Task::Eval(id, ctx) => {
                    if self.fuel == 0 {
                        return Err(EvalError::FuelExhausted);
                    }
                    self.fuel -= 1;
                    self.steps += 1;
                    if self.cfg.memo && self.shared.contains(&id) {
                        let key = (id, ctx);
                        if let Some(v) = self.memo.get(&key) {
                            task = Task::Ret(v.clone());
                            continue;
                        }
                        let ctx = key.1.clone();
                        stack.push(Frame::Memo(id, key.1));
                        self.step(id, ctx, &mut stack)?
                    } else {
                        self.step(id, ctx, &mut stack)?
                    }
                }
            }
        }
    }

    fn step(&mut self, id: NodeId, mut ctx: Vec<Value>, stack: &mut Vec<Frame>) -> Result<Task, EvalError> {
        let node = self
            .g
            .get(id)
            .ok_or_else(|| EvalError::UnknownName(format!("node {id}")))?;
        let b = node.seq.boxed;
        let p = &node.premises;
        let prem = |i: usize| -> Result<NodeId, EvalError> {
            p.get(i)
                .copied()
                .ok_or_else(|| EvalError::Malformed(format!("node {id} lacks premise {i}")))
        };
        if ctx.len() != b + node.seq.plain {
            return Err(EvalError::Arity(format!("node {id} given {} inputs", ctx.len())));
        }
        Ok(match &node.rule {
            Rule::Id => Task::Ret(ctx.pop().unwrap()),
            Rule::Zero => Task::Ret(Value::zero()),
            Rule::S0 | Rule::S1 => {
                stack.push(Frame::Succ(node.rule == Rule::S1));
                Task::Eval(prem(0)?, ctx)
            }
            Rule::WeakN => {
                ctx.pop();
                Task::Eval(prem(0)?, ctx)
            }
            Rule::WeakBox => {
                ctx.remove(0);
                Task::Eval(prem(0)?, ctx)
            }
            Rule::ExchN(i) => {
                ctx.swap(b + i, b + i + 1);
                Task::Eval(prem(0)?, ctx)
            }
            Rule::ExchBox(i) => {
                ctx.swap(*i, i + 1);
                Task::Eval(prem(0)?, ctx)
            }
            Rule::BoxL => {
                let x = ctx.remove(0);
                ctx.push(x);
                Task::Eval(prem(0)?, ctx)
            }
            Rule::BoxR => Task::Eval(prem(0)?, ctx),
            Rule::CutN => {
                stack.push(Frame::CutN(prem(1)?, ctx.clone()));
                Task::Eval(prem(0)?, ctx)
            }
            Rule::CutBox => {
                stack.push(Frame::CutB(prem(1)?, ctx.clone()));
                Task::Eval(prem(0)?, ctx)
            }
            Rule::CondN => {
                let w = ctx.pop().unwrap();
                if w.is_zero() {
                    Task::Eval(prem(0)?, ctx)
                } else {
                    let k = if is_odd(&w) { 2 } else { 1 };
                    ctx.push(pred(&w));
                    Task::Eval(prem(k)?, ctx)
                }
            }
            Rule::CondBox => {
                let w = ctx.remove(0);
                if w.is_zero() {
                    Task::Eval(prem(0)?, ctx)
                } else {
                    let k = if is_odd(&w) { 2 } else { 1 };
                    ctx.insert(0, pred(&w));
                    Task::Eval(prem(k)?, ctx)
                }
            }
            Rule::SRec => {
                let w = ctx.remove(0);
                if w.is_zero() {
                    Task::Eval(prem(0)?, ctx)
                } else {
                    let k = if is_odd(&w) { 2 } else { 1 };
                    let x = pred(&w);
                    stack.push(Frame::SRec(prem(k)?, x.clone(), ctx.clone()));
                    ctx.insert(0, x);
                    Task::Eval(id, ctx)
                }
            }
            Rule::Oracle(name) => {
                let f = self
                    .host
                    .get(name)
                    .ok_or_else(|| EvalError::UnknownOracle(name.clone()))?;
                Task::Ret(f(&ctx[..b], &ctx[b..]))
            }
            Rule::Dis(c) => Task::Eval(*c, ctx),
        })
    }
}

/// Value of the sub-proof at `node` on the given inputs.
pub fn eval_proof(
    g: &ProofGraph,
    node: NodeId,
    xs: &[Value],
    ys: &[Value],
    cfg: EvalConfig,
) -> Result<Value, EvalError> {
    ProofEval::new(g, &OracleEnv::default(), cfg).eval(node, xs, ys)
}
