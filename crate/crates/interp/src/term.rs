//! Terms of the two-sorted function algebras and guarded recursion programs.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

pub type T = Rc<Term>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Normal,
    Safe,
}

/// What a guarded call in a recursion block compares against its binding
/// tuple: strict on normals only, or additionally non-strict on safes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Normals,
    NormalsAndSafes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Zero,
    S0,
    S1,
    Pred,
    /// cond(;w,x,y,z)
    Cond,
    Proj {
        m: usize,
        n: usize,
        sort: Sort,
        idx: usize,
    },
    Oracle {
        name: String,
        m: usize,
        n: usize,
    },
    /// head(r_1(x;), .., r_k(x;); t_1(x;y), .., t_l(x;y))
    Comp {
        m: usize,
        n: usize,
        head: T,
        normals: Vec<T>,
        safes: Vec<T>,
    },
    /// Safe recursion on notation over the first normal input.
    SRecN { g: T, h0: T, h1: T },
    /// Safe nested recursion; `oracle` stands for the recursive call inside
    /// `h0` and `h1`, over safe inputs only.
    SNRec {
        oracle: String,
        g: T,
        h0: T,
        h1: T,
    },
    /// Simultaneous recursion on permutations of prefixes. Calls between the
    /// defined functions go through `GuardedCall`.
    Fix {
        family: Family,
        m: usize,
        n: usize,
        defs: Vec<(String, T)>,
        select: usize,
    },
    GuardedCall {
        name: String,
        m: usize,
        n: usize,
    },
    /// A previously defined program function.
    Ref {
        name: String,
        m: usize,
        n: usize,
    },
}

impl Term {
    pub fn zero() -> T {
        Rc::new(Term::Zero)
    }
    pub fn s0() -> T {
        Rc::new(Term::S0)
    }
    pub fn s1() -> T {
        Rc::new(Term::S1)
    }
    pub fn pred() -> T {
        Rc::new(Term::Pred)
    }
    pub fn cond() -> T {
        Rc::new(Term::Cond)
    }
    pub fn normal(m: usize, n: usize, idx: usize) -> T {
        Rc::new(Term::Proj {
            m,
            n,
            sort: Sort::Normal,
            idx,
        })
    }
    pub fn safe(m: usize, n: usize, idx: usize) -> T {
        Rc::new(Term::Proj {
            m,
            n,
            sort: Sort::Safe,
            idx,
        })
    }
    pub fn oracle(name: impl Into<String>, m: usize, n: usize) -> T {
        Rc::new(Term::Oracle {
            name: name.into(),
            m,
            n,
        })
    }
    pub fn comp(m: usize, n: usize, head: T, normals: Vec<T>, safes: Vec<T>) -> T {
        Rc::new(Term::Comp {
            m,
            n,
            head,
            normals,
            safes,
        })
    }
    /// `head` applied to safe arguments only.
    pub fn app(m: usize, n: usize, head: T, safes: Vec<T>) -> T {
        Term::comp(m, n, head, vec![], safes)
    }
    pub fn srec(g: T, h0: T, h1: T) -> T {
        Rc::new(Term::SRecN { g, h0, h1 })
    }
    pub fn snrec(oracle: impl Into<String>, g: T, h0: T, h1: T) -> T {
        Rc::new(Term::SNRec {
            oracle: oracle.into(),
            g,
            h0,
            h1,
        })
    }
    pub fn gcall(name: impl Into<String>, m: usize, n: usize) -> T {
        Rc::new(Term::GuardedCall {
            name: name.into(),
            m,
            n,
        })
    }
    pub fn reference(name: impl Into<String>, m: usize, n: usize) -> T {
        Rc::new(Term::Ref {
            name: name.into(),
            m,
            n,
        })
    }

    /// The constant `c` at arity (m, n), built from 0 and successors.
    pub fn constant(m: usize, n: usize, c: &num_bigint::BigUint) -> T {
        let mut t = Term::comp(m, n, Term::zero(), vec![], vec![]);
        let bits = c.bits();
        for k in (0..bits).rev() {
            let s = if c.bit(k) { Term::s1() } else { Term::s0() };
            t = Term::app(m, n, s, vec![t]);
        }
        t
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(
            self,
            Term::Comp { .. } | Term::SRecN { .. } | Term::SNRec { .. } | Term::Fix { .. }
        )
    }

    /// Direct subterms.
    pub fn children(&self) -> Vec<&T> {
        match self {
            Term::Comp {
                head,
                normals,
                safes,
                ..
            } => std::iter::once(head).chain(normals).chain(safes).collect(),
            Term::SRecN { g, h0, h1 } | Term::SNRec { g, h0, h1, .. } => vec![g, h0, h1],
            Term::Fix { defs, .. } => defs.iter().map(|(_, b)| b).collect(),
            _ => vec![],
        }
    }

    /// Oracle names and guarded-call names occurring free.
    pub fn free_names(&self) -> FreeNames {
        let mut f = FreeNames::default();
        collect_free(self, &mut Vec::new(), &mut Vec::new(), &mut f);
        f
    }

    /// Carries free oracle leaves or free guarded calls.
    pub fn bears_oracles(&self) -> bool {
        let f = self.free_names();
        !f.oracles.is_empty() || !f.calls.is_empty()
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeNames {
    pub oracles: Vec<String>,
    pub calls: Vec<String>,
}

fn collect_free(t: &Term, bound_o: &mut Vec<String>, bound_c: &mut Vec<String>, out: &mut FreeNames) {
    match t {
        Term::Oracle { name, .. } => {
            if !bound_o.contains(name) && !out.oracles.contains(name) {
                out.oracles.push(name.clone());
            }
        }
        Term::GuardedCall { name, .. } => {
            if !bound_c.contains(name) && !out.calls.contains(name) {
                out.calls.push(name.clone());
            }
        }
        Term::SNRec { oracle, g, h0, h1 } => {
            collect_free(g, bound_o, bound_c, out);
            bound_o.push(oracle.clone());
            collect_free(h0, bound_o, bound_c, out);
            collect_free(h1, bound_o, bound_c, out);
            bound_o.pop();
        }
        Term::Fix { defs, .. } => {
            let k = defs.len();
            bound_c.extend(defs.iter().map(|(n, _)| n.clone()));
            for (_, b) in defs {
                collect_free(b, bound_o, bound_c, out);
            }
            bound_c.truncate(bound_c.len() - k);
        }
        _ => {
            for c in t.children() {
                collect_free(c, bound_o, bound_c, out);
            }
        }
    }
}

/// A guarded recursion program: ordered named definitions, each closed
/// except for `Ref`s to earlier definitions and declared host oracles.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PPProgram {
    pub oracles: BTreeMap<String, (usize, usize)>,
    pub defs: Vec<(String, T)>,
    pub main: String,
}

impl PPProgram {
    pub fn get(&self, name: &str) -> Option<&T> {
        self.defs.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn main_term(&self) -> Option<&T> {
        self.get(&self.main)
    }

    /// Every guarded call of every definition, with the family of its block.
    pub fn guarded_blocks(&self) -> Vec<(Family, usize)> {
        fn walk(t: &Term, out: &mut Vec<(Family, usize)>) {
            if let Term::Fix { family, defs, .. } = t {
                out.push((*family, defs.len()));
            }
            for c in t.children() {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        for (_, t) in &self.defs {
            walk(t, &mut out);
        }
        out
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Normal => "N",
            Sort::Safe => "S",
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Normals => "normals",
            Family::NormalsAndSafes => "both",
        })
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, ts: &[T]) -> fmt::Result {
    f.write_str("(")?;
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{t}")?;
    }
    f.write_str(")")
}

/// S-expression syntax, read back by the format crate.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => f.write_str("(zero)"),
            Term::S0 => f.write_str("(s0)"),
            Term::S1 => f.write_str("(s1)"),
            Term::Pred => f.write_str("(pred)"),
            Term::Cond => f.write_str("(cond)"),
            Term::Proj { m, n, sort, idx } => write!(f, "(proj {m} {n} {sort} {idx})"),
            Term::Oracle { name, m, n } => write!(f, "(oracle {name} {m} {n})"),
            Term::Comp {
                m,
                n,
                head,
                normals,
                safes,
            } => {
                write!(f, "(comp {m} {n} {head} ")?;
                write_list(f, normals)?;
                f.write_str(" ")?;
                write_list(f, safes)?;
                f.write_str(")")
            }
            Term::SRecN { g, h0, h1 } => write!(f, "(srec {g} {h0} {h1})"),
            Term::SNRec { oracle, g, h0, h1 } => write!(f, "(snrec {oracle} {g} {h0} {h1})"),
            Term::Fix {
                family,
                m,
                n,
                defs,
                select,
            } => {
                write!(f, "(fix {family} {m} {n} {select}")?;
                for (name, body) in defs {
                    write!(f, " ({name} {body})")?;
                }
                f.write_str(")")
            }
            Term::GuardedCall { name, m, n } => write!(f, "(gcall {name} {m} {n})"),
            Term::Ref { name, m, n } => write!(f, "(ref {name} {m} {n})"),
        }
    }
}

impl fmt::Display for PPProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, (m, n)) in &self.oracles {
            writeln!(f, "(oracle {name} {m} {n})")?;
        }
        for (name, body) in &self.defs {
            writeln!(f, "(def {name} {body})")?;
        }
        writeln!(f, "(main {})", self.main)
    }
}
