//! Report envelopes and failure classification for the command line tool.
//!
//! Every report is a JSON object
//! `{tool, version, command, config, seeds, result}`; keys are emitted in
//! sorted order so repeated runs are byte-identical.

use serde_json::{json, Value};

use crate::covering::CoveringError;
use crate::extremal::ExtremalError;
use crate::fpforms::FormError;
use crate::increment::IncrementError;
use crate::patterns::PatternError;
use crate::reductions::ReductionError;
use crate::universe::UniverseError;

pub const TOOL: &str = "setdiff";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn envelope(command: &str, config: Value, seeds: &[u64], result: Value) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "config": config,
        "seeds": seeds,
        "result": result,
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("JSON values always serialize");
    text.push('\n');
    text
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// Malformed files or parameters.
    Input,
    /// A module detected a broken guarantee.
    Contract,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { kind: FailureKind::Input, message: message.into() }
    }

    pub fn contract(message: impl Into<String>) -> Self {
        Self { kind: FailureKind::Contract, message: message.into() }
    }

    pub fn other(message: impl Into<String>) -> Self {
        Self { kind: FailureKind::Other, message: message.into() }
    }

    /// Input errors exit with 3, contract violations with 4, anything else
    /// with 1; usage errors (2) come from argument parsing.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            FailureKind::Input => 3,
            FailureKind::Contract => 4,
            FailureKind::Other => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

macro_rules! input_failure {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::input(e.to_string())
            }
        }
    )*};
}

input_failure!(UniverseError, CoveringError, FormError, PatternError, ReductionError, std::io::Error);

impl From<IncrementError> for Failure {
    fn from(e: IncrementError) -> Self {
        match e {
            IncrementError::ContractViolation(_) => Failure::contract(e.to_string()),
            other => Failure::input(other.to_string()),
        }
    }
}

impl From<ExtremalError> for Failure {
    fn from(e: ExtremalError) -> Self {
        match e {
            ExtremalError::Unverified => Failure::contract(e.to_string()),
            other => Failure::input(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::input("x").exit_code(), 3);
        assert_eq!(Failure::contract("x").exit_code(), 4);
        assert_eq!(Failure::from(IncrementError::ContractViolation("x".into())).exit_code(), 4);
        assert_eq!(Failure::from(IncrementError::EmptyFamily).exit_code(), 3);
    }

    #[test]
    fn envelope_keys_are_sorted() {
        let text = render(&envelope("scan", json!({"b": 1, "a": 2}), &[], json!(null)));
        let a = text.find("\"a\"").unwrap();
        let b = text.find("\"b\"").unwrap();
        assert!(a < b);
        assert!(text.find("\"command\"").unwrap() < text.find("\"tool\"").unwrap());
    }
}
