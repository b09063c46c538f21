//! Line-oriented proof documents, s-expression term documents, DOT export
//! and the JSON classification report.

mod dot;
mod error;
mod proof;
mod report;
mod sexp;
mod terms;

pub use dot::{back_edge_count, export_dot};
pub use error::ParseError;
pub use proof::{parse_proof, serialize_proof};
pub use report::Report;
pub use terms::{parse_term, parse_terms, serialize_terms};
