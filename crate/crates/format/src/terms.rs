use crate::error::ParseError;
use crate::sexp::{read_all, Sexp};
use cbc_interp::{check_program, Family, PPProgram, Term, T};
use std::collections::BTreeMap;

struct Reader<'a> {
    defs: &'a BTreeMap<String, (usize, usize)>,
}

fn atom(s: &Sexp, what: &str) -> Result<String, ParseError> {
    match s {
        Sexp::Atom(a, ..) => Ok(a.clone()),
        _ => s.err(format!("expected {what}")),
    }
}

fn num(s: &Sexp, what: &str) -> Result<usize, ParseError> {
    let a = atom(s, what)?;
    a.parse().or_else(|_| s.err(format!("expected {what}, found `{a}`")))
}

fn ident(s: &Sexp) -> Result<String, ParseError> {
    let a = atom(s, "a name")?;
    let ok = a
        .chars()
        .next()
        .is_some_and(|c| c.is_alphabetic() || c == '_')
        && a.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-'));
    if ok {
        Ok(a)
    } else {
        s.err(format!("`{a}` is not a valid name"))
    }
}

fn expect_len(s: &Sexp, items: &[Sexp], n: usize) -> Result<(), ParseError> {
    if items.len() == n {
        Ok(())
    } else {
        let head = items.first().and_then(|h| atom(h, "").ok()).unwrap_or_default();
        s.err(format!("`{head}` takes {} arguments, found {}", n - 1, items.len().saturating_sub(1)))
    }
}

impl Reader<'_> {
    fn list(&self, s: &Sexp) -> Result<Vec<T>, ParseError> {
        match s {
            Sexp::List(items, ..) => items.iter().map(|i| self.term(i)).collect(),
            _ => s.err("expected a list of terms"),
        }
    }

    fn term(&self, s: &Sexp) -> Result<T, ParseError> {
        let items = match s {
            Sexp::List(items, ..) if !items.is_empty() => items,
            _ => return s.err("expected a term `(...)`"),
        };
        let head = atom(&items[0], "a constructor")?;
        let leaf = |t: Term| -> Result<T, ParseError> {
            expect_len(s, items, 1)?;
            Ok(std::rc::Rc::new(t))
        };
        match head.as_str() {
            "zero" => leaf(Term::Zero),
            "s0" => leaf(Term::S0),
            "s1" => leaf(Term::S1),
            "pred" => leaf(Term::Pred),
            "cond" => leaf(Term::Cond),
            "proj" => {
                expect_len(s, items, 5)?;
                let (m, n) = (num(&items[1], "arity")?, num(&items[2], "arity")?);
                let idx = num(&items[4], "index")?;
                match atom(&items[3], "`N` or `S`")?.as_str() {
                    "N" => Ok(Term::normal(m, n, idx)),
                    "S" => Ok(Term::safe(m, n, idx)),
                    o => items[3].err(format!("expected `N` or `S`, found `{o}`")),
                }
            }
            "oracle" => {
                expect_len(s, items, 4)?;
                Ok(Term::oracle(ident(&items[1])?, num(&items[2], "arity")?, num(&items[3], "arity")?))
            }
            "comp" => {
                expect_len(s, items, 6)?;
                Ok(Term::comp(
                    num(&items[1], "arity")?,
                    num(&items[2], "arity")?,
                    self.term(&items[3])?,
                    self.list(&items[4])?,
                    self.list(&items[5])?,
                ))
            }
            "srec" => {
                expect_len(s, items, 4)?;
                Ok(Term::srec(self.term(&items[1])?, self.term(&items[2])?, self.term(&items[3])?))
            }
            "snrec" => {
                expect_len(s, items, 5)?;
                Ok(Term::snrec(
                    ident(&items[1])?,
                    self.term(&items[2])?,
                    self.term(&items[3])?,
                    self.term(&items[4])?,
                ))
            }
            "fix" => {
                if items.len() < 6 {
                    return s.err("`fix` takes a family, arities, a selector and definitions");
                }
                let family = match atom(&items[1], "family")?.as_str() {
                    "normals" => Family::Normals,
                    "both" => Family::NormalsAndSafes,
                    o => return items[1].err(format!("unknown family `{o}`")),
                };
                let mut defs = Vec::new();
                for d in &items[5..] {
                    match d {
                        Sexp::List(p, ..) if p.len() == 2 => defs.push((ident(&p[0])?, self.term(&p[1])?)),
                        _ => return d.err("expected `(name TERM)`"),
                    }
                }
                Ok(std::rc::Rc::new(Term::Fix {
                    family,
                    m: num(&items[2], "arity")?,
                    n: num(&items[3], "arity")?,
                    select: num(&items[4], "selector")?,
                    defs,
                }))
            }
            "gcall" => {
                expect_len(s, items, 4)?;
                Ok(Term::gcall(ident(&items[1])?, num(&items[2], "arity")?, num(&items[3], "arity")?))
            }
            "ref" => {
                expect_len(s, items, 4)?;
                let name = ident(&items[1])?;
                if !self.defs.contains_key(&name) {
                    return items[1].err(format!("`{name}` is not defined above"));
                }
                Ok(Term::reference(name, num(&items[2], "arity")?, num(&items[3], "arity")?))
            }
            o => items[0].err(format!("unknown constructor `{o}`")),
        }
    }
}

/// Parses a standalone term.
pub fn parse_term(text: &str) -> Result<T, ParseError> {
    let es = read_all(text)?;
    match es.as_slice() {
        [e] => {
            let defs = BTreeMap::new();
            let t = Reader { defs: &defs }.term(e)?;
            cbc_interp::arity(&t).map_err(|err| {
                let (l, c) = e.pos();
                ParseError::new(l, c, err.to_string())
            })?;
            Ok(t)
        }
        _ => Err(ParseError::new(1, 1, "expected exactly one term")),
    }
}

/// Parses a document of oracle declarations, definitions and an optional
/// `(main name)`; without one the last definition is the entry point.
pub fn parse_terms(text: &str) -> Result<PPProgram, ParseError> {
    let mut prog = PPProgram::default();
    let mut arities: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut main: Option<(String, Sexp)> = None;
    for e in read_all(text)? {
        let items = match &e {
            Sexp::List(items, ..) if !items.is_empty() => items.clone(),
            _ => return e.err("expected `(oracle ...)`, `(def ...)` or `(main ...)`"),
        };
        match atom(&items[0], "a keyword")?.as_str() {
            "oracle" => {
                expect_len(&e, &items, 4)?;
                let name = ident(&items[1])?;
                let a = (num(&items[2], "arity")?, num(&items[3], "arity")?);
                if prog.oracles.insert(name.clone(), a).is_some() {
                    return items[1].err(format!("oracle `{name}` declared twice"));
                }
            }
            "def" => {
                expect_len(&e, &items, 3)?;
                let name = ident(&items[1])?;
                if arities.contains_key(&name) {
                    return items[1].err(format!("`{name}` defined twice"));
                }
                let t = Reader { defs: &arities }.term(&items[2])?;
                for o in t.free_names().oracles {
                    if !prog.oracles.contains_key(&o) {
                        return items[2].err(format!("oracle `{o}` used before its declaration"));
                    }
                }
                prog.defs.push((name.clone(), t));
                prog.main = name.clone();
                let checked = check_program(&prog).map_err(|err| {
                    let (l, c) = items[2].pos();
                    ParseError::new(l, c, err.to_string())
                })?;
                arities.insert(name.clone(), checked[&name]);
            }
            "main" => {
                expect_len(&e, &items, 2)?;
                main = Some((ident(&items[1])?, items[1].clone()));
            }
            o => return items[0].err(format!("unknown keyword `{o}`")),
        }
    }
    if prog.defs.is_empty() {
        return Err(ParseError::new(1, 1, "no definitions"));
    }
    if let Some((m, at)) = main {
        if !arities.contains_key(&m) {
            return at.err(format!("main `{m}` is not defined"));
        }
        prog.main = m;
    }
    Ok(prog)
}

pub fn serialize_terms(p: &PPProgram) -> String {
    p.to_string()
}
