//! Line-level directive scanner.
//!
//! Directives are recognized by prefix only: the sentinel must be the first
//! non-whitespace text on a physical line. Host code is never tokenized.

use std::fmt;

use super::source::{Dialect, SourceUnit};
use crate::diag::{Code, Diagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sentinel {
    AccFortran,
    AccC,
    OmpFortran,
    OmpC,
}

impl Sentinel {
    pub fn as_str(self) -> &'static str {
        match self {
            Sentinel::AccFortran => "!$acc",
            Sentinel::AccC => "#pragma acc",
            Sentinel::OmpFortran => "!$omp",
            Sentinel::OmpC => "#pragma omp",
        }
    }

    pub fn is_acc(self) -> bool {
        matches!(self, Sentinel::AccFortran | Sentinel::AccC)
    }

    pub fn is_omp(self) -> bool {
        !self.is_acc()
    }

    pub fn omp(dialect: Dialect) -> Self {
        match dialect {
            Dialect::FortranFree => Sentinel::OmpFortran,
            Dialect::C => Sentinel::OmpC,
        }
    }

    pub fn acc(dialect: Dialect) -> Self {
        match dialect {
            Dialect::FortranFree => Sentinel::AccFortran,
            Dialect::C => Sentinel::AccC,
        }
    }
}

impl fmt::Display for Sentinel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One directive occurrence, continuation lines joined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectiveLine {
    /// 1-based line of the first physical line.
    pub start_line: usize,
    pub line_span: usize,
    pub sentinel: Sentinel,
    /// Directive text after the sentinel, continuations joined by single spaces.
    pub payload: String,
    /// Leading whitespace (and BOM, if any) of the first physical line.
    pub indent: String,
    /// The physical lines exactly as they appear in the unit.
    pub raw: Vec<String>,
}

impl DirectiveLine {
    /// 0-based index range of the covered physical lines.
    pub fn line_range(&self) -> std::ops::Range<usize> {
        self.start_line - 1..self.start_line - 1 + self.line_span
    }
}

fn is_lead(c: char) -> bool {
    c.is_whitespace() || c == '\u{feff}'
}

fn split_indent(line: &str) -> (&str, &str) {
    let at = line.find(|c: char| !is_lead(c)).unwrap_or(line.len());
    line.split_at(at)
}

fn strip_prefix_ci<'a>(s: &'a str, prefix: &str) -> Option<&'a str> {
    if s.len() >= prefix.len() && s.as_bytes()[..prefix.len()].eq_ignore_ascii_case(prefix.as_bytes()) {
        Some(&s[prefix.len()..])
    } else {
        None
    }
}

fn ends_word(rest: &str, extra: char) -> bool {
    match rest.chars().next() {
        None => true,
        Some(c) => c.is_whitespace() || c == extra,
    }
}

/// Matches a Fortran sentinel at the start of `body` (indent already removed).
fn fortran_sentinel(body: &str) -> Option<(Sentinel, &str)> {
    let rest = body.strip_prefix("!$")?;
    for (word, sentinel) in [("acc", Sentinel::AccFortran), ("omp", Sentinel::OmpFortran)] {
        if let Some(after) = strip_prefix_ci(rest, word) {
            if ends_word(after, '&') {
                return Some((sentinel, after));
            }
        }
    }
    None
}

fn c_sentinel(body: &str) -> Option<(Sentinel, &str)> {
    let rest = body.strip_prefix('#')?.trim_start();
    let rest = rest.strip_prefix("pragma")?;
    if !rest.starts_with(|c: char| c.is_whitespace()) {
        return None;
    }
    let rest = rest.trim_start();
    for (word, sentinel) in [("acc", Sentinel::AccC), ("omp", Sentinel::OmpC)] {
        if let Some(after) = rest.strip_prefix(word) {
            if ends_word(after, '\\') {
                return Some((sentinel, after));
            }
        }
    }
    None
}

/// Fixed-form sentinels live in column 1: `c$acc`, `C$omp`, `*$acc`.
fn is_fixed_form_sentinel(line: &str) -> bool {
    let mut chars = line.chars();
    match chars.next() {
        Some('c' | 'C' | '*') => {}
        _ => return false,
    }
    let rest = chars.as_str();
    let Some(rest) = rest.strip_prefix('$') else {
        return false;
    };
    ["acc", "omp"]
        .iter()
        .any(|w| strip_prefix_ci(rest, w).is_some_and(|after| ends_word(after, '&')))
}

/// Classifies a single physical line. Returns the sentinel, indent and the
/// text following the sentinel.
pub fn match_sentinel(line: &str, dialect: Dialect) -> Option<(Sentinel, &str, &str)> {
    let (indent, body) = split_indent(line);
    let (sentinel, rest) = match dialect {
        Dialect::FortranFree => fortran_sentinel(body)?,
        Dialect::C => c_sentinel(body)?,
    };
    Some((sentinel, indent, rest))
}

/// Returns every directive occurrence of the unit's dialect, in source order.
pub fn scan_directives(unit: &SourceUnit) -> Result<Vec<DirectiveLine>, Vec<Diagnostic>> {
    let (found, errors) = scan_all(unit);
    if errors.is_empty() {
        Ok(found)
    } else {
        Err(errors)
    }
}

/// Like [`scan_directives`], but keeps the well-formed directives alongside
/// the errors.
pub(crate) fn scan_all(unit: &SourceUnit) -> (Vec<DirectiveLine>, Vec<Diagnostic>) {
    let mut found = Vec::new();
    let mut errors = Vec::new();
    let lines = &unit.lines;
    let mut idx = 0;

    while idx < lines.len() {
        let line = &lines[idx];
        if unit.dialect == Dialect::FortranFree && is_fixed_form_sentinel(line) {
            errors.push(Diagnostic::new(
                Code::E008,
                "fixed-form directive sentinel is not supported; convert the file to free form",
                &unit.path,
                idx + 1,
                line.trim(),
            ));
            idx += 1;
            continue;
        }
        let Some((sentinel, indent, rest)) = match_sentinel(line, unit.dialect) else {
            idx += 1;
            continue;
        };

        let start = idx;
        let mut segments = Vec::new();
        let mut segment = rest;
        let mut broken = false;
        loop {
            let (text, continues) = match unit.dialect {
                Dialect::FortranFree => {
                    let t = segment.trim();
                    let t = if idx > start {
                        t.strip_prefix('&').unwrap_or(t)
                    } else {
                        t
                    };
                    match t.strip_suffix('&') {
                        Some(head) => (head, true),
                        None => (t, false),
                    }
                }
                Dialect::C => {
                    let t = segment.trim_end();
                    match t.strip_suffix('\\') {
                        Some(head) => (head, true),
                        None => (t, false),
                    }
                }
            };
            segments.push(text.trim());
            if !continues {
                break;
            }
            idx += 1;
            let next = match lines.get(idx) {
                Some(n) => n,
                None => {
                    errors.push(Diagnostic::new(
                        Code::E001,
                        "continuation at end of file",
                        &unit.path,
                        idx,
                        lines[idx - 1].trim(),
                    ));
                    broken = true;
                    break;
                }
            };
            match unit.dialect {
                Dialect::FortranFree => match fortran_sentinel(split_indent(next).1) {
                    Some((s, after)) if s == sentinel => segment = after,
                    _ => {
                        errors.push(Diagnostic::new(
                            Code::E001,
                            format!("line ends with `&` but the next line does not start with `{sentinel}`"),
                            &unit.path,
                            idx,
                            lines[idx - 1].trim(),
                        ));
                        broken = true;
                        break;
                    }
                },
                Dialect::C => segment = next,
            }
        }

        if broken {
            // Fortran: `idx` already points at the offending line, which is
            // rescanned on its own.
            if unit.dialect == Dialect::C {
                idx += 1;
            }
        } else {
            let payload = segments
                .iter()
                .filter(|s| !s.is_empty())
                .copied()
                .collect::<Vec<_>>()
                .join(" ");
            found.push(DirectiveLine {
                start_line: start + 1,
                line_span: idx - start + 1,
                sentinel,
                payload,
                indent: indent.to_owned(),
                raw: lines[start..=idx].to_vec(),
            });
            idx += 1;
        }
    }

    (found, errors)
}
