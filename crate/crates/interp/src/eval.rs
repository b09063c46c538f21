use crate::term::{Family, PPProgram, Sort, Term, T};
use crate::{EvalConfig, EvalError, GuardMode, OracleEnv};
use cbc_kernel::value::{is_odd, pred, s0, s1};
use cbc_kernel::{subset_eq, subset_strict, Value};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub steps: u64,
    pub guard_fallbacks: u64,
    pub memo_hits: u64,
    pub memo_entries: usize,
    /// Longest chain of nested guarded calls within one recursion block.
    pub max_depth: usize,
}

enum Binding {
    /// The recursive call of a nested recursion, `f(x, rest; -)`.
    Nested {
        name: String,
        rec: T,
        x: Value,
        rest: Vec<Value>,
        env: Env,
    },
    Frame {
        fix: T,
        xs: Vec<Value>,
        ys: Vec<Value>,
        depth: usize,
        env: Env,
    },
}

struct EnvNode {
    b: Binding,
    next: Env,
}

type Env = Option<Rc<EnvNode>>;

fn push(b: Binding, next: &Env) -> Env {
    Some(Rc::new(EnvNode {
        b,
        next: next.clone(),
    }))
}

type MemoKey = (usize, usize, Vec<Value>, Vec<Value>);

/// A term evaluation session. Memo tables live as long as the session.
pub struct TermEval<'a> {
    refs: BTreeMap<&'a str, &'a T>,
    host: &'a OracleEnv,
    cfg: EvalConfig,
    fuel: u64,
    pub stats: EvalStats,
    memo: HashMap<MemoKey, Value>,
    closed: HashMap<usize, bool>,
}

impl<'a> TermEval<'a> {
    pub fn new(prog: Option<&'a PPProgram>, host: &'a OracleEnv, cfg: EvalConfig) -> Self {
        let refs = prog
            .map(|p| p.defs.iter().map(|(n, t)| (n.as_str(), t)).collect())
            .unwrap_or_default();
        TermEval {
            refs,
            host,
            cfg,
            fuel: cfg.fuel,
            stats: EvalStats::default(),
            memo: HashMap::new(),
            closed: HashMap::new(),
        }
    }

    /// Resets fuel and statistics, keeping memo tables.
    pub fn refuel(&mut self) {
        self.fuel = self.cfg.fuel;
        self.stats = EvalStats {
            memo_entries: self.memo.len(),
            ..EvalStats::default()
        };
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear_memo(&mut self) {
        self.memo.clear();
    }

    pub fn eval(&mut self, t: &T, xs: &[Value], ys: &[Value]) -> Result<Value, EvalError> {
        self.go(t, xs, ys, &None)
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if self.fuel == 0 {
            return Err(EvalError::FuelExhausted);
        }
        self.fuel -= 1;
        self.stats.steps += 1;
        Ok(())
    }

    fn go(&mut self, t: &T, xs: &[Value], ys: &[Value], env: &Env) -> Result<Value, EvalError> {
        self.tick()?;
        match &**t {
            Term::Zero => Ok(Value::zero()),
            Term::S0 => Ok(s0(arg(ys, 0)?)),
            Term::S1 => Ok(s1(arg(ys, 0)?)),
            Term::Pred => Ok(pred(arg(ys, 0)?)),
            Term::Cond => {
                if ys.len() != 4 {
                    return Err(EvalError::Arity("cond takes 4 safe inputs".into()));
                }
                Ok(ys[1 + branch(&ys[0])].clone())
            }
            Term::Proj { sort, idx, .. } => match sort {
                Sort::Normal => arg(xs, *idx).cloned(),
                Sort::Safe => arg(ys, *idx).cloned(),
            },
            Term::Oracle { name, .. } => self.oracle(name, xs, ys, env),
            Term::Comp {
                head,
                normals,
                safes,
                ..
            } => {
                let mut nv = Vec::with_capacity(normals.len());
                for r in normals {
                    nv.push(self.go(r, xs, &[], env)?);
                }
                if matches!(**head, Term::Cond) && safes.len() == 4 {
                    // only the selected branch is evaluated
                    let w = self.go(&safes[0], xs, ys, env)?;
                    return self.go(&safes[1 + branch(&w)], xs, ys, env);
                }
                let mut sv = Vec::with_capacity(safes.len());
                for s in safes {
                    sv.push(self.go(s, xs, ys, env)?);
                }
                self.go(head, &nv, &sv, env)
            }
            Term::SRecN { g, h0, h1 } => {
                let (x, rest) = xs.split_first().ok_or_else(|| EvalError::Arity("recursion needs a normal input".into()))?;
                let mut r = self.go(g, rest, ys, env)?;
                let mut prefix = Value::zero();
                let mut hx = Vec::with_capacity(xs.len());
                let mut hy = ys.to_vec();
                hy.push(Value::zero());
                for k in (0..x.bits()).rev() {
                    let bit = x.bit(k);
                    hx.clear();
                    hx.push(prefix.clone());
                    hx.extend_from_slice(rest);
                    *hy.last_mut().unwrap() = r;
                    r = self.go(if bit { h1 } else { h0 }, &hx, &hy, env)?;
                    prefix = if bit { s1(&prefix) } else { s0(&prefix) };
                }
                Ok(r)
            }
            Term::SNRec { oracle, g, h0, h1 } => {
                let (x, rest) = xs.split_first().ok_or_else(|| EvalError::Arity("recursion needs a normal input".into()))?;
                if x.is_zero() {
                    return self.go(g, rest, ys, env);
                }
                let px = pred(x);
                let h = if is_odd(x) { h1 } else { h0 };
                let inner = push(
                    Binding::Nested {
                        name: oracle.clone(),
                        rec: t.clone(),
                        x: px.clone(),
                        rest: rest.to_vec(),
                        env: env.clone(),
                    },
                    env,
                );
                let mut hx = Vec::with_capacity(xs.len());
                hx.push(px);
                hx.extend_from_slice(rest);
                self.go(h, &hx, ys, &inner)
            }
            Term::Fix { select, .. } => self.enter(t, *select, xs, ys, 1, env),
            Term::GuardedCall { name, .. } => self.guarded(name, xs, ys, env),
            Term::Ref { name, .. } => {
                let body = *self
                    .refs
                    .get(name.as_str())
                    .ok_or_else(|| EvalError::UnknownName(name.clone()))?;
                self.go(body, xs, ys, &None)
            }
        }
    }

    fn oracle(&mut self, name: &str, xs: &[Value], ys: &[Value], env: &Env) -> Result<Value, EvalError> {
        let mut cur = env.clone();
        while let Some(node) = cur {
            if let Binding::Nested {
                name: n,
                rec,
                x,
                rest,
                env: renv,
            } = &node.b
            {
                if n == name {
                    if !xs.is_empty() {
                        return Err(EvalError::Arity(format!("`{name}` takes safe inputs only")));
                    }
                    let mut args = Vec::with_capacity(rest.len() + 1);
                    args.push(x.clone());
                    args.extend_from_slice(rest);
                    let (rec, renv) = (rec.clone(), renv.clone());
                    return self.go(&rec, &args, ys, &renv);
                }
            }
            cur = node.next.clone();
        }
        let f = self
            .host
            .get(name)
            .ok_or_else(|| EvalError::UnknownOracle(name.to_string()))?;
        Ok(f(xs, ys))
    }

    fn guarded(&mut self, name: &str, us: &[Value], vs: &[Value], env: &Env) -> Result<Value, EvalError> {
        let mut cur = env.clone();
        while let Some(node) = cur {
            if let Binding::Frame {
                fix,
                xs,
                ys,
                depth,
                env: fenv,
            } = &node.b
            {
                if let Term::Fix { family, defs, .. } = &**fix {
                    if let Some(idx) = defs.iter().position(|(n, _)| n == name) {
                        let ok_n = us.len() == xs.len() && subset_strict(us, xs);
                        let ok_s = *family == Family::Normals || (vs.len() == ys.len() && subset_eq(vs, ys));
                        if !(ok_n && ok_s) {
                            return match self.cfg.guard_mode {
                                GuardMode::ReturnZero => {
                                    self.stats.guard_fallbacks += 1;
                                    Ok(Value::zero())
                                }
                                GuardMode::StrictError => Err(EvalError::GuardViolation { name: name.to_string() }),
                            };
                        }
                        let (fix, fenv, depth) = (fix.clone(), fenv.clone(), *depth);
                        return self.enter(&fix, idx, us, vs, depth + 1, &fenv);
                    }
                }
            }
            cur = node.next.clone();
        }
        Err(EvalError::UnknownName(name.to_string()))
    }

    fn is_closed(&mut self, fix: &T) -> bool {
        let key = Rc::as_ptr(fix) as usize;
        *self.closed.entry(key).or_insert_with(|| {
            let f = fix.free_names();
            f.oracles.is_empty() && f.calls.is_empty()
        })
    }

    fn enter(&mut self, fix: &T, idx: usize, xs: &[Value], ys: &[Value], depth: usize, env: &Env) -> Result<Value, EvalError> {
        let Term::Fix { defs, .. } = &**fix else {
            unreachable!()
        };
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let memo = self.cfg.memo && self.is_closed(fix);
        let key = memo.then(|| (Rc::as_ptr(fix) as usize, idx, xs.to_vec(), ys.to_vec()));
        if let Some(k) = &key {
            if let Some(v) = self.memo.get(k) {
                self.stats.memo_hits += 1;
                return Ok(v.clone());
            }
        }
        let frame = push(
            Binding::Frame {
                fix: fix.clone(),
                xs: xs.to_vec(),
                ys: ys.to_vec(),
                depth,
                env: env.clone(),
            },
            env,
        );
        let body = defs[idx].1.clone();
        let v = self.go(&body, xs, ys, &frame)?;
        if let Some(k) = key {
            self.memo.insert(k, v.clone());
            self.stats.memo_entries = self.memo.len();
        }
        Ok(v)
    }
}

fn arg(v: &[Value], i: usize) -> Result<&Value, EvalError> {
    v.get(i)
        .ok_or_else(|| EvalError::Arity(format!("missing input {i}")))
}

/// 0 for zero, 1 for even nonzero, 2 for odd.
fn branch(w: &Value) -> usize {
    if w.is_zero() {
        0
    } else if is_odd(w) {
        2
    } else {
        1
    }
}

pub fn eval_term(t: &T, env: &OracleEnv, xs: &[Value], ys: &[Value]) -> Result<Value, EvalError> {
    eval_term_with(t, env, xs, ys, EvalConfig::default())
}

pub fn eval_term_with(t: &T, env: &OracleEnv, xs: &[Value], ys: &[Value], cfg: EvalConfig) -> Result<Value, EvalError> {
    let (m, n) = crate::arity(t).map_err(|e| EvalError::Malformed(e.to_string()))?;
    if (m, n) != (xs.len(), ys.len()) {
        return Err(EvalError::Arity(format!("term takes ({m}, {n}) inputs, given ({}, {})", xs.len(), ys.len())));
    }
    TermEval::new(None, env, cfg).eval(t, xs, ys)
}

/// Evaluates program function `fname`.
pub fn eval_pp(
    prog: &PPProgram,
    fname: &str,
    env: &OracleEnv,
    xs: &[Value],
    ys: &[Value],
    cfg: EvalConfig,
) -> Result<Value, EvalError> {
    let arities = crate::check_program(prog).map_err(|e| EvalError::Malformed(e.to_string()))?;
    let &(m, n) = arities
        .get(fname)
        .ok_or_else(|| EvalError::UnknownName(fname.to_string()))?;
    if (m, n) != (xs.len(), ys.len()) {
        return Err(EvalError::Arity(format!("`{fname}` takes ({m}, {n}) inputs, given ({}, {})", xs.len(), ys.len())));
    }
    let body = prog.get(fname).unwrap();
    TermEval::new(Some(prog), env, cfg).eval(body, xs, ys)
}
