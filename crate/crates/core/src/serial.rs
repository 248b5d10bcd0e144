//! Small helpers for the canonical, line-oriented JSON files.

use std::fmt;

use serde::Serialize;

/// Where a file failed to parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseLocation {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl From<&serde_json::Error> for ParseLocation {
    fn from(e: &serde_json::Error) -> Self {
        ParseLocation {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl fmt::Display for ParseLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} column {}: {}", self.line, self.column, self.message)
    }
}

pub(crate) fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

/// A single-line JSON array.
pub(crate) fn json_row<T: Serialize + ?Sized>(items: &T) -> String {
    serde_json::to_string(items).expect("array serialization cannot fail")
}
