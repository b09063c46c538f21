use serde::{Deserialize, Serialize};

/// Machine-readable result of checking one proof. `progressing` is null
/// when it could not be decided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub valid: bool,
    pub safe: bool,
    pub left_leaning: bool,
    pub progressing: Option<bool>,
    pub class: String,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
