//! Core data for two-sorted circular proofs: binary naturals, the prefix
//! orders on them, sequents, inference rules and finite proof graphs.

mod graph;
mod order;
mod rule;
mod sequent;
mod validate;
pub mod value;

pub use graph::{Node, NodeId, ProofGraph};
pub use order::{subset_eq, subset_strict, tuple_order, OrderError, TupleOrder, TupleOrderWitness};
pub use rule::Rule;
pub use sequent::{SType, Sequent};
pub use validate::{validate_graph, validate_step, Allowed, StepError};
pub use value::Value;
