use crate::term::{Family, Term};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermClass {
    B,
    NB,
    SB,
    Bpp,
    SBpp,
    NBpp,
}

impl TermClass {
    pub const ALL: [TermClass; 6] = [
        TermClass::B,
        TermClass::NB,
        TermClass::SB,
        TermClass::Bpp,
        TermClass::SBpp,
        TermClass::NBpp,
    ];

    fn nested_recursion(self) -> bool {
        !matches!(self, TermClass::B | TermClass::Bpp)
    }

    fn prefix_recursion(self) -> bool {
        matches!(self, TermClass::Bpp | TermClass::SBpp | TermClass::NBpp)
    }

    fn unnested_only(self) -> bool {
        matches!(self, TermClass::SB | TermClass::Bpp | TermClass::SBpp)
    }
}

impl fmt::Display for TermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermClass::B => "B",
            TermClass::NB => "NB",
            TermClass::SB => "SB",
            TermClass::Bpp => "Bpp",
            TermClass::SBpp => "SBpp",
            TermClass::NBpp => "NBpp",
        })
    }
}

impl FromStr for TermClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TermClass::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown class `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule}: `{subterm}`")]
pub struct ClassViolation {
    pub rule: String,
    pub subterm: String,
}

fn violation(t: &Term, rule: impl Into<String>) -> ClassViolation {
    let mut subterm = t.to_string();
    if subterm.len() > 160 {
        subterm.truncate(157);
        subterm.push_str("...");
    }
    ClassViolation {
        rule: rule.into(),
        subterm,
    }
}

/// Syntactic membership of a term in one of the algebras.
pub fn check_term_class(t: &Term, class: TermClass) -> Result<(), ClassViolation> {
    crate::arity::arity_in_scope(t).map_err(|e| violation(t, format!("ill-formed: {}", e.msg)))?;
    walk(t, class)
}

fn walk(t: &Term, class: TermClass) -> Result<(), ClassViolation> {
    match t {
        Term::Comp {
            head,
            normals,
            safes,
            ..
        } => {
            if normals.iter().any(|r| r.bears_oracles()) {
                return Err(violation(t, "normal argument of a composition calls an oracle"));
            }
            if !class.prefix_recursion() && !normals.is_empty() && head.bears_oracles() {
                return Err(violation(t, "composition along a normal input into an oracle-bearing function"));
            }
            if class.unnested_only() && head.bears_oracles() && safes.iter().any(|s| s.bears_oracles()) {
                return Err(violation(t, "nested safe composition"));
            }
        }
        Term::SRecN { .. } => {
            if t.bears_oracles() {
                return Err(violation(t, "recursion on notation over oracles"));
            }
        }
        Term::SNRec { g, .. } => {
            if !class.nested_recursion() {
                return Err(violation(t, format!("nested recursion is not in {class}")));
            }
            if g.bears_oracles() {
                return Err(violation(t, "base case of nested recursion calls an oracle"));
            }
        }
        Term::Fix { family, .. } => {
            if !class.prefix_recursion() {
                return Err(violation(t, format!("recursion on prefixes is not in {class}")));
            }
            if class == TermClass::Bpp && *family != Family::NormalsAndSafes {
                return Err(violation(t, "recursion without guards on safe inputs"));
            }
        }
        Term::GuardedCall { .. } => {
            if !class.prefix_recursion() {
                return Err(violation(t, format!("guarded call is not in {class}")));
            }
        }
        _ => {}
    }
    for c in t.children() {
        walk(c, class)?;
    }
    Ok(())
}

/// Checks every definition of a program.
pub fn check_program_class(p: &crate::PPProgram, class: TermClass) -> Result<(), ClassViolation> {
    crate::check_program(p).map_err(|e| ClassViolation {
        rule: "ill-formed program".into(),
        subterm: e.to_string(),
    })?;
    p.defs.iter().try_for_each(|(_, t)| walk(t, class))
}
