//! Canonical directive text with width-bounded continuation.

use thiserror::Error;

use crate::diag::Code;
use crate::directive::{AccDirective, Dialect, OmpDirective, Sentinel};

pub const MIN_WRAP_WIDTH: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("wrap width {0} is below the minimum of {MIN_WRAP_WIDTH}")]
    WidthTooSmall(usize),
    #[error("`{unit}` does not fit in {width} columns")]
    TooWide { unit: String, width: usize },
}

impl EmitError {
    pub fn code(&self) -> Code {
        Code::E301
    }
}

/// Spells `d` in `dialect`, splitting at keyword and clause boundaries so that
/// no line exceeds `wrap_width` characters.
pub fn emit_omp(d: &OmpDirective, dialect: Dialect, indent: &str, wrap_width: usize) -> Result<Vec<String>, EmitError> {
    let mut units: Vec<String> = d.kind.keywords(dialect).into_iter().map(str::to_owned).collect();
    units.extend(d.clauses.iter().map(ToString::to_string));
    layout(Sentinel::omp(dialect), &units, dialect, indent, wrap_width)
}

/// OpenACC counterpart of [`emit_omp`].
pub fn emit_acc(d: &AccDirective, dialect: Dialect, indent: &str, wrap_width: usize) -> Result<Vec<String>, EmitError> {
    let mut units: Vec<String> = d.kind.keywords().iter().map(|w| (*w).to_owned()).collect();
    units.extend(d.clauses.iter().map(ToString::to_string));
    layout(Sentinel::acc(dialect), &units, dialect, indent, wrap_width)
}

fn columns(s: &str) -> usize {
    s.chars().count()
}

fn layout(
    sentinel: Sentinel,
    units: &[String],
    dialect: Dialect,
    indent: &str,
    width: usize,
) -> Result<Vec<String>, EmitError> {
    if width < MIN_WRAP_WIDTH {
        return Err(EmitError::WidthTooSmall(width));
    }
    let plain_indent = indent.trim_start_matches('\u{feff}');
    let (suffix, cont_head) = match dialect {
        Dialect::FortranFree => (" &", format!("{plain_indent}{sentinel}")),
        Dialect::C => (" \\", format!("{plain_indent}   ")),
    };
    let too_wide = |unit: &str| EmitError::TooWide {
        unit: unit.to_owned(),
        width,
    };

    let mut lines = Vec::new();
    let mut current = format!("{indent}{sentinel}");
    let mut has_unit = false;
    for (i, unit) in units.iter().enumerate() {
        let reserve = if i + 1 == units.len() { 0 } else { suffix.len() };
        let fits = |line: &str| columns(line) + 1 + columns(unit) + reserve <= width;
        if !fits(&current) {
            if !has_unit {
                return Err(too_wide(unit));
            }
            lines.push(format!("{current}{suffix}"));
            current = cont_head.clone();
            if !fits(&current) {
                return Err(too_wide(unit));
            }
        }
        current.push(' ');
        current.push_str(unit);
        has_unit = true;
    }
    lines.push(current);
    Ok(lines)
}
