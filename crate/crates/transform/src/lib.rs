//! Transformations on proof graphs (minimization, cycle normal form,
//! box promotion, stripping safe inputs, passing parameters to oracle
//! leaves) and the flattening of simultaneous guarded recursion.

mod build;
mod cnf;
mod minimize;
mod params;
mod promote;
mod simul;
mod strip;

pub use build::Builder;
pub use cnf::{close_open_sets, cycle_normal_form, CycleNF};
pub use minimize::{bisimilar, minimize};
pub use params::pass_parameters;
pub use promote::box_promote;
pub use simul::{reduce_simultaneous, rotation_tag, Simultaneous};
pub use strip::strip_safe_inputs;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("not progressing: {0}")]
    NotProgressing(String),
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
