use crate::term::{PPProgram, Sort, Term};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{msg} in `{term}`")]
pub struct ArityError {
    pub msg: String,
    pub term: String,
}

fn err(t: &Term, msg: impl Into<String>) -> ArityError {
    let mut term = t.to_string();
    if term.len() > 120 {
        term.truncate(117);
        term.push_str("...");
    }
    ArityError {
        msg: msg.into(),
        term,
    }
}

struct Scope<'a> {
    refs: &'a BTreeMap<String, (usize, usize)>,
    oracles: Vec<(String, (usize, usize))>,
    calls: Vec<(String, (usize, usize))>,
}

fn lookup<'v>(v: &'v [(String, (usize, usize))], name: &str) -> Option<&'v (usize, usize)> {
    v.iter().rev().find(|(n, _)| n == name).map(|(_, a)| a)
}

fn go(t: &Term, sc: &mut Scope) -> Result<(usize, usize), ArityError> {
    match t {
        Term::Zero => Ok((0, 0)),
        Term::S0 | Term::S1 | Term::Pred => Ok((0, 1)),
        Term::Cond => Ok((0, 4)),
        Term::Proj { m, n, sort, idx } => {
            let bound = if *sort == Sort::Normal { m } else { n };
            if idx >= bound {
                return Err(err(t, format!("projection index {idx} out of range")));
            }
            Ok((*m, *n))
        }
        Term::Oracle { name, m, n } => {
            if let Some(&a) = lookup(&sc.oracles, name) {
                if a != (*m, *n) {
                    return Err(err(t, format!("oracle `{name}` has arity {a:?}")));
                }
            }
            Ok((*m, *n))
        }
        Term::Comp {
            m,
            n,
            head,
            normals,
            safes,
        } => {
            let ha = go(head, sc)?;
            if ha != (normals.len(), safes.len()) {
                return Err(err(t, format!("head arity {ha:?} vs {} normal and {} safe arguments", normals.len(), safes.len())));
            }
            for r in normals {
                let a = go(r, sc)?;
                if a != (*m, 0) {
                    return Err(err(t, format!("normal argument has arity {a:?}, expected ({m}, 0)")));
                }
            }
            for s in safes {
                let a = go(s, sc)?;
                if a != (*m, *n) {
                    return Err(err(t, format!("safe argument has arity {a:?}, expected ({m}, {n})")));
                }
            }
            Ok((*m, *n))
        }
        Term::SRecN { g, h0, h1 } => {
            let (gm, gn) = go(g, sc)?;
            for h in [h0, h1] {
                let a = go(h, sc)?;
                if a != (gm + 1, gn + 1) {
                    return Err(err(t, format!("step has arity {a:?}, expected ({}, {})", gm + 1, gn + 1)));
                }
            }
            Ok((gm + 1, gn))
        }
        Term::SNRec { oracle, g, h0, h1 } => {
            let (gm, gn) = go(g, sc)?;
            sc.oracles.push((oracle.clone(), (0, gn)));
            let res = (|| {
                for h in [h0, h1] {
                    let a = go(h, sc)?;
                    if a != (gm + 1, gn) {
                        return Err(err(t, format!("step has arity {a:?}, expected ({}, {gn})", gm + 1)));
                    }
                }
                Ok(())
            })();
            sc.oracles.pop();
            res?;
            Ok((gm + 1, gn))
        }
        Term::Fix {
            m, n, defs, select, ..
        } => {
            if defs.is_empty() || *select >= defs.len() {
                return Err(err(t, "empty block or selector out of range"));
            }
            for (i, (a, _)) in defs.iter().enumerate() {
                if defs[..i].iter().any(|(b, _)| a == b) {
                    return Err(err(t, format!("duplicate definition `{a}`")));
                }
            }
            let k = defs.len();
            sc.calls.extend(defs.iter().map(|(name, _)| (name.clone(), (*m, *n))));
            let res = defs.iter().try_for_each(|(_, body)| {
                let a = go(body, sc)?;
                if a != (*m, *n) {
                    return Err(err(t, format!("body has arity {a:?}, expected ({m}, {n})")));
                }
                Ok(())
            });
            sc.calls.truncate(sc.calls.len() - k);
            res?;
            Ok((*m, *n))
        }
        Term::GuardedCall { name, m, n } => match lookup(&sc.calls, name) {
            Some(&a) if a == (*m, *n) => Ok(a),
            Some(a) => Err(err(t, format!("`{name}` has arity {a:?}"))),
            None => Err(err(t, format!("guarded call to `{name}` outside its block"))),
        },
        Term::Ref { name, m, n } => match sc.refs.get(name) {
            Some(&a) if a == (*m, *n) => Ok(a),
            Some(a) => Err(err(t, format!("`{name}` has arity {a:?}"))),
            None => Err(err(t, format!("unknown definition `{name}`"))),
        },
    }
}

/// Arity of a standalone term. Free oracles take their declared arity;
/// `Ref`s are rejected.
pub fn arity(t: &Term) -> Result<(usize, usize), ArityError> {
    let refs = BTreeMap::new();
    go(
        t,
        &mut Scope {
            refs: &refs,
            oracles: vec![],
            calls: vec![],
        },
    )
}

/// Like `arity`, but `Ref`s are accepted at their stated arity.
pub(crate) fn arity_in_scope(t: &Term) -> Result<(usize, usize), ArityError> {
    let mut refs = BTreeMap::new();
    collect_refs(t, &mut refs);
    go(
        t,
        &mut Scope {
            refs: &refs,
            oracles: vec![],
            calls: vec![],
        },
    )
}

fn collect_refs(t: &Term, out: &mut BTreeMap<String, (usize, usize)>) {
    if let Term::Ref { name, m, n } = t {
        out.insert(name.clone(), (*m, *n));
    }
    for c in t.children() {
        collect_refs(c, out);
    }
}

/// Checks every definition, in order, and returns their arities.
pub fn check_program(p: &PPProgram) -> Result<BTreeMap<String, (usize, usize)>, ArityError> {
    let mut refs = BTreeMap::new();
    for (name, body) in &p.defs {
        let oracles = p.oracles.iter().map(|(n, a)| (n.clone(), *a)).collect();
        let a = go(
            body,
            &mut Scope {
                refs: &refs,
                oracles,
                calls: vec![],
            },
        )?;
        if refs.insert(name.clone(), a).is_some() {
            return Err(err(body, format!("duplicate definition `{name}`")));
        }
    }
    if !refs.contains_key(&p.main) {
        return Err(ArityError {
            msg: format!("main `{}` is not defined", p.main),
            term: String::new(),
        });
    }
    Ok(refs)
}
