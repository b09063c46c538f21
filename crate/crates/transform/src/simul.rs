use crate::TransformError;
use cbc_interp::{Term, T};
use num_bigint::BigUint;
use std::collections::BTreeMap;
use std::rc::Rc;

/// A block of simultaneous recursion flattened into a single recursive
/// function with extra safe tag inputs, plus one selector per original
/// function.
#[derive(Debug, Clone)]
pub struct Simultaneous {
    /// The single-function block, of arity `(m, n + k)`.
    pub flat: T,
    /// Selector `i` has arity `(m, n)` and computes the `i`-th function.
    pub selectors: Vec<T>,
}

/// Tag of function `i` of `k`: the `i`-th rotation of `1, .., k`. All tags
/// are permutations of each other, so guard comparisons on safes succeed
/// between any two of them.
pub fn rotation_tag(i: usize, k: usize) -> Vec<u64> {
    (0..k).map(|j| ((i + j) % k + 1) as u64).collect()
}

/// Flattens a `Fix` block. The flat body dispatches on the tag tuple,
/// returning 0 when it matches no function; calls to function `j` pass
/// the tag of `j`.
pub fn reduce_simultaneous(block: &T, name: &str) -> Result<Simultaneous, TransformError> {
    let Term::Fix {
        family,
        m,
        n,
        defs,
        ..
    } = &**block
    else {
        return Err(TransformError::Unsupported("not a recursion block".into()));
    };
    let (m, n, k) = (*m, *n, defs.len());
    let w = n + k;
    let tags: Vec<Vec<u64>> = (0..k).map(|i| rotation_tag(i, k)).collect();

    let call = |j: usize| -> T {
        let normals = (0..m).map(|i| Term::normal(m, 0, i)).collect();
        let mut safes: Vec<T> = (0..n).map(|i| Term::safe(m, n, i)).collect();
        safes.extend(tags[j].iter().map(|c| Term::constant(m, n, &BigUint::from(*c))));
        Term::comp(m, n, Term::gcall(name, m, w), normals, safes)
    };
    let subst: BTreeMap<String, T> = defs.iter().enumerate().map(|(j, (f, _))| (f.clone(), call(j))).collect();

    let lift = |t: &T| -> T {
        let normals = (0..m).map(|i| Term::normal(m, 0, i)).collect();
        let safes = (0..n).map(|i| Term::safe(m, w, i)).collect();
        Term::comp(m, w, t.clone(), normals, safes)
    };
    let c0 = Term::constant(m, w, &BigUint::from(0u8));
    let c1 = Term::constant(m, w, &BigUint::from(1u8));
    let cond = |a: T, x: T, y: T, z: T| Term::app(m, w, Term::cond(), vec![a, x, y, z]);

    // 1 if `arg` equals `c`, else 0, peeling one bit per level
    fn eq_const(c: &BigUint, arg: T, m: usize, w: usize) -> T {
        let c0 = Term::constant(m, w, &BigUint::from(0u8));
        let cond = |a: T, x: T, y: T, z: T| Term::app(m, w, Term::cond(), vec![a, x, y, z]);
        if c.bits() == 0 {
            return cond(arg, Term::constant(m, w, &BigUint::from(1u8)), c0.clone(), c0);
        }
        let rest = eq_const(&(c >> 1u32), Term::app(m, w, Term::pred(), vec![arg.clone()]), m, w);
        if c.bit(0) {
            cond(arg, c0.clone(), c0, rest)
        } else {
            cond(arg, c0.clone(), rest, c0)
        }
    }

    let mut body = c0.clone();
    for (i, (_, h)) in defs.iter().enumerate().rev() {
        let mut test = c1.clone();
        for (j, c) in tags[i].iter().enumerate().rev() {
            let e = eq_const(&BigUint::from(*c), Term::safe(m, w, n + j), m, w);
            test = if j + 1 == k { e } else { cond(e, c0.clone(), c0.clone(), test) };
        }
        let h = lift(&substitute(h, &subst));
        body = cond(test, body, h.clone(), h);
    }
    let flat = Rc::new(Term::Fix {
        family: *family,
        m,
        n: w,
        defs: vec![(name.to_string(), body)],
        select: 0,
    });
    let selectors = (0..k)
        .map(|j| {
            let normals = (0..m).map(|i| Term::normal(m, 0, i)).collect();
            let mut safes: Vec<T> = (0..n).map(|i| Term::safe(m, n, i)).collect();
            safes.extend(tags[j].iter().map(|c| Term::constant(m, n, &BigUint::from(*c))));
            Term::comp(m, n, flat.clone(), normals, safes)
        })
        .collect::<Vec<_>>();
    Ok(Simultaneous { flat, selectors })
}

/// Replaces guarded calls by name, respecting inner blocks that rebind a
/// name.
fn substitute(t: &T, map: &BTreeMap<String, T>) -> T {
    match &**t {
        Term::GuardedCall { name, .. } => map.get(name).cloned().unwrap_or_else(|| t.clone()),
        Term::Comp {
            m,
            n,
            head,
            normals,
            safes,
        } => Term::comp(
            *m,
            *n,
            substitute(head, map),
            normals.iter().map(|x| substitute(x, map)).collect(),
            safes.iter().map(|x| substitute(x, map)).collect(),
        ),
        Term::SRecN { g, h0, h1 } => Term::srec(substitute(g, map), substitute(h0, map), substitute(h1, map)),
        Term::SNRec { oracle, g, h0, h1 } => {
            Term::snrec(oracle.clone(), substitute(g, map), substitute(h0, map), substitute(h1, map))
        }
        Term::Fix {
            family,
            m,
            n,
            defs,
            select,
        } => {
            let inner: BTreeMap<String, T> = map
                .iter()
                .filter(|(k, _)| !defs.iter().any(|(d, _)| d == *k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            Rc::new(Term::Fix {
                family: *family,
                m: *m,
                n: *n,
                defs: defs.iter().map(|(d, b)| (d.clone(), substitute(b, &inner))).collect(),
                select: *select,
            })
        }
        _ => t.clone(),
    }
}
