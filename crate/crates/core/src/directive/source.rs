use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

/// Host language of a source file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// Free-form Fortran (`!$acc`, `!$omp`).
    FortranFree,
    /// C (`#pragma acc`, `#pragma omp`).
    C,
}

impl Dialect {
    /// Infers the dialect from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "f90" | "f95" | "f03" | "f08" => Some(Dialect::FortranFree),
            "c" | "h" => Some(Dialect::C),
            _ => None,
        }
    }

    /// Default wrap width for emitted directives.
    pub fn default_wrap_width(self) -> usize {
        match self {
            Dialect::FortranFree => 132,
            Dialect::C => 120,
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::FortranFree => "fortran",
            Dialect::C => "c",
        })
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fortran" | "fortran-free" | "f90" => Ok(Dialect::FortranFree),
            "c" => Ok(Dialect::C),
            other => Err(format!("unknown dialect `{other}` (expected `fortran` or `c`)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NewlineStyle {
    Lf,
    CrLf,
}

impl NewlineStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            NewlineStyle::Lf => "\n",
            NewlineStyle::CrLf => "\r\n",
        }
    }
}

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("{}: cannot infer dialect from extension; pass it explicitly", .0.display())]
    UnknownDialect(PathBuf),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A source file split into physical lines.
///
/// Lines carry no terminator. A file is `CrLf` only if every line break is
/// `\r\n`; otherwise it is `Lf` and any stray `\r` stays in the line text.
/// Either way [`SourceUnit::to_text`] reproduces the input bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub path: PathBuf,
    pub dialect: Dialect,
    pub lines: Vec<String>,
    pub newline_style: NewlineStyle,
    pub trailing_newline: bool,
}

impl SourceUnit {
    /// Builds a unit from text. `dialect` overrides extension-based inference.
    pub fn from_text(path: impl Into<PathBuf>, text: &str, dialect: Option<Dialect>) -> Result<Self, SourceError> {
        let path = path.into();
        let dialect = match dialect.or_else(|| Dialect::from_path(&path)) {
            Some(d) => d,
            None => return Err(SourceError::UnknownDialect(path)),
        };

        let mut lines: Vec<String> = if text.is_empty() {
            Vec::new()
        } else {
            text.split('\n').map(str::to_owned).collect()
        };
        let trailing_newline = lines.last().is_some_and(|l| l.is_empty()) && !text.is_empty();
        if trailing_newline {
            lines.pop();
        }

        let breaks = if trailing_newline {
            lines.len()
        } else {
            lines.len().saturating_sub(1)
        };
        let crlf = breaks > 0 && lines[..breaks].iter().all(|l| l.ends_with('\r'));
        let newline_style = if crlf {
            for l in &mut lines[..breaks] {
                l.pop();
            }
            NewlineStyle::CrLf
        } else {
            NewlineStyle::Lf
        };

        Ok(SourceUnit {
            path,
            dialect,
            lines,
            newline_style,
            trailing_newline,
        })
    }

    pub fn read(path: impl AsRef<Path>, dialect: Option<Dialect>) -> Result<Self, SourceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| SourceError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(path, &text, dialect)
    }

    /// Joins lines back into text.
    pub fn to_text(&self) -> String {
        join_lines(&self.lines, self.newline_style, self.trailing_newline)
    }
}

pub(crate) fn join_lines(lines: &[String], style: NewlineStyle, trailing: bool) -> String {
    let mut out = lines.join(style.as_str());
    if trailing {
        out.push_str(style.as_str());
    }
    out
}
