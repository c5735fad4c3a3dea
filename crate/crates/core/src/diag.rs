//! Diagnostic records and the stable code catalog.
//!
//! Every code maps to exactly one severity. Codes are part of the public
//! contract: tools consuming `--diag=json` output match on them.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};

/// Maximum number of characters kept in [`Diagnostic::payload_excerpt`].
pub const EXCERPT_LEN: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Stable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    /// Malformed continuation line.
    E001,
    /// Unknown OpenACC construct.
    E002,
    /// Clause not allowed on an OpenACC construct.
    E003,
    /// Malformed OpenACC clause arguments.
    E004,
    /// Unknown OpenMP construct.
    E005,
    /// Clause not allowed on an OpenMP construct.
    E006,
    /// Malformed OpenMP clause arguments.
    E007,
    /// Fixed-form Fortran sentinel.
    E008,
    /// `kernels` under the strict policy.
    E101,
    /// `vector_length` with dropping disabled.
    E102,
    /// Unbalanced `end` directive or unclosed construct.
    E103,
    /// A single clause does not fit the wrap width.
    E301,
    /// `kernels` translated as `target teams`.
    W101,
    /// `vector_length` dropped.
    W102,
    /// Orphaned `loop gang` translated as teams-level worksharing.
    W103,
    /// `schedule` clause injected.
    I201,
}

impl Code {
    pub const ALL: [Code; 16] = [
        Code::E001,
        Code::E002,
        Code::E003,
        Code::E004,
        Code::E005,
        Code::E006,
        Code::E007,
        Code::E008,
        Code::E101,
        Code::E102,
        Code::E103,
        Code::E301,
        Code::W101,
        Code::W102,
        Code::W103,
        Code::I201,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::E001 => "E001",
            Code::E002 => "E002",
            Code::E003 => "E003",
            Code::E004 => "E004",
            Code::E005 => "E005",
            Code::E006 => "E006",
            Code::E007 => "E007",
            Code::E008 => "E008",
            Code::E101 => "E101",
            Code::E102 => "E102",
            Code::E103 => "E103",
            Code::E301 => "E301",
            Code::W101 => "W101",
            Code::W102 => "W102",
            Code::W103 => "W103",
            Code::I201 => "I201",
        }
    }

    pub fn severity(self) -> Severity {
        match self.as_str().as_bytes()[0] {
            b'E' => Severity::Error,
            b'W' => Severity::Warning,
            _ => Severity::Info,
        }
    }

    /// Short kebab-case name of the condition.
    pub fn title(self) -> &'static str {
        match self {
            Code::E001 => "malformed-continuation",
            Code::E002 => "unknown-acc-construct",
            Code::E003 => "unknown-acc-clause",
            Code::E004 => "malformed-acc-clause",
            Code::E005 => "unknown-omp-construct",
            Code::E006 => "unknown-omp-clause",
            Code::E007 => "malformed-omp-clause",
            Code::E008 => "fixed-form-unsupported",
            Code::E101 => "kernels-strict",
            Code::E102 => "vector-length-strict",
            Code::E103 => "unbalanced-end",
            Code::E301 => "clause-too-wide",
            Code::W101 => "kernels-fallback",
            Code::W102 => "vector-length-dropped",
            Code::W103 => "loop-gang-ambiguous",
            Code::I201 => "schedule-injected",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// A located diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub file: PathBuf,
    pub line: usize,
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    #[serde(rename = "excerpt")]
    pub payload_excerpt: String,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>, file: &Path, line: usize, payload: &str) -> Self {
        Diagnostic {
            file: file.to_path_buf(),
            line,
            severity: code.severity(),
            code,
            message: message.into(),
            payload_excerpt: excerpt(payload),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}[{}]: {}",
            self.file.display(),
            self.line,
            self.severity,
            self.code,
            self.message
        )?;
        if !self.payload_excerpt.is_empty() {
            write!(f, "\n    | {}", self.payload_excerpt)?;
        }
        Ok(())
    }
}

fn excerpt(payload: &str) -> String {
    payload.chars().take(EXCERPT_LEN).collect()
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

pub fn has_warnings(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Warning)
}
