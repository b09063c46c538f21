//! Evaluation of circular proof graphs as equational programs, and of
//! two-sorted function algebra terms and guarded recursion programs.

mod arity;
mod class;
mod eval;
mod proof;
pub mod term;

pub use arity::{arity, check_program, ArityError};
pub use class::{check_program_class, check_term_class, ClassViolation, TermClass};
pub use eval::{eval_pp, eval_term, eval_term_with, EvalStats, TermEval};
pub use proof::{eval_proof, ProofEval};
pub use term::{Family, PPProgram, Sort, Term, T};

use cbc_kernel::Value;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardMode {
    /// A failed guard yields 0.
    ReturnZero,
    /// A failed guard aborts evaluation.
    StrictError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub fuel: u64,
    pub memo: bool,
    pub guard_mode: GuardMode,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            fuel: 1_000_000,
            memo: true,
            guard_mode: GuardMode::ReturnZero,
        }
    }
}

impl EvalConfig {
    pub fn with_fuel(fuel: u64) -> Self {
        EvalConfig {
            fuel: fuel.max(1),
            ..Self::default()
        }
    }

    pub fn strict(self) -> Self {
        EvalConfig {
            guard_mode: GuardMode::StrictError,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("unknown oracle `{0}`")]
    UnknownOracle(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("guard violation calling `{name}`")]
    GuardViolation { name: String },
    #[error("{0}")]
    Malformed(String),
}

pub type HostFn = Rc<dyn Fn(&[Value], &[Value]) -> Value>;

/// Host implementations of named oracles.
#[derive(Clone, Default)]
pub struct OracleEnv {
    map: BTreeMap<String, HostFn>,
}

impl OracleEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, f: impl Fn(&[Value], &[Value]) -> Value + 'static) -> Self {
        self.insert(name, f);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, f: impl Fn(&[Value], &[Value]) -> Value + 'static) {
        self.map.insert(name.into(), Rc::new(f));
    }

    pub fn get(&self, name: &str) -> Option<&HostFn> {
        self.map.get(name)
    }
}

impl fmt::Debug for OracleEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.map.keys()).finish()
    }
}
