//! Whole-unit translation.

use crate::diag::{self, Code, Diagnostic};
use crate::directive::scan::scan_all;
use crate::directive::{parse_acc, parse_omp, DirectiveLine, OmpDirective, SourceUnit};
use crate::mapping::{map_directive, ConstructStack, MappingConfig};

use super::emit::emit_omp;

/// A directive of a unit after mapping.
#[derive(Debug, Clone)]
pub(crate) struct MappedDirective {
    pub line: DirectiveLine,
    /// `None` when mapping failed, or for OpenMP lines that were not parsed.
    pub omp: Option<OmpDirective>,
    pub translated: bool,
}

/// Scans and maps every directive of `unit`. Existing OpenMP lines are parsed
/// only when `parse_existing` is set; otherwise they pass through untouched.
pub(crate) fn map_unit(
    unit: &SourceUnit,
    config: &MappingConfig,
    parse_existing: bool,
) -> (Vec<MappedDirective>, Vec<Diagnostic>) {
    let (lines, mut diags) = scan_all(unit);
    let mut stack = ConstructStack::new();
    let mut mapped = Vec::with_capacity(lines.len());

    for line in lines {
        let at = line.start_line;
        if line.sentinel.is_acc() {
            let omp = match parse_acc(&line.payload, unit.dialect) {
                Ok(acc) => {
                    let (omp, findings) = map_directive(&acc, &mut stack, config, unit.dialect, at);
                    diags.extend(findings.into_iter().map(|f| f.locate(&unit.path, at, &line.payload)));
                    omp
                }
                Err(e) => {
                    diags.push(Diagnostic::new(e.code, e.message, &unit.path, at, &line.payload));
                    None
                }
            };
            mapped.push(MappedDirective {
                line,
                omp,
                translated: true,
            });
        } else {
            let omp = if parse_existing {
                match parse_omp(&line.payload, unit.dialect) {
                    Ok(d) => Some(d),
                    Err(e) => {
                        diags.push(Diagnostic::new(e.code, e.message, &unit.path, at, &line.payload));
                        None
                    }
                }
            } else {
                None
            };
            mapped.push(MappedDirective {
                line,
                omp,
                translated: false,
            });
        }
    }

    for open in stack.finish() {
        let what = open.acc.keywords().join(" ");
        diags.push(Diagnostic::new(
            Code::E103,
            format!("`{what}` is never closed"),
            &unit.path,
            open.line,
            &what,
        ));
    }
    diags.sort_by_key(|d| d.line);
    (mapped, diags)
}

/// One replaced directive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub directive: DirectiveLine,
    pub replacement: Vec<String>,
}

/// The edits translating one unit, sorted by line and non-overlapping.
#[derive(Debug, Clone)]
pub struct RewritePlan {
    pub unit: SourceUnit,
    pub edits: Vec<Edit>,
    pub diagnostics: Vec<Diagnostic>,
}

impl RewritePlan {
    pub fn build(unit: &SourceUnit, config: &MappingConfig) -> Self {
        let (mapped, mut diagnostics) = map_unit(unit, config, false);
        let width = unit.dialect.default_wrap_width();
        let mut edits = Vec::new();
        for m in mapped.into_iter().filter(|m| m.translated) {
            let Some(omp) = m.omp else { continue };
            match emit_omp(&omp, unit.dialect, &m.line.indent, width) {
                Ok(mut replacement) => {
                    // Keep a stray carriage return of mixed-newline files.
                    if m.line.raw.last().is_some_and(|l| l.ends_with('\r')) {
                        replacement.iter_mut().for_each(|l| l.push('\r'));
                    }
                    edits.push(Edit {
                        directive: m.line,
                        replacement,
                    });
                }
                Err(e) => diagnostics.push(Diagnostic::new(
                    e.code(),
                    e.to_string(),
                    &unit.path,
                    m.line.start_line,
                    &m.line.payload,
                )),
            }
        }
        diagnostics.sort_by_key(|d| d.line);
        RewritePlan {
            unit: unit.clone(),
            edits,
            diagnostics,
        }
    }

    pub fn has_errors(&self) -> bool {
        diag::has_errors(&self.diagnostics)
    }

    /// Output lines with every edit applied.
    pub fn output_lines(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.unit.lines.len());
        let mut next = 0;
        for edit in &self.edits {
            let range = edit.directive.line_range();
            out.extend_from_slice(&self.unit.lines[next..range.start]);
            out.extend(edit.replacement.iter().cloned());
            next = range.end;
        }
        out.extend_from_slice(&self.unit.lines[next..]);
        out
    }

    pub fn render(&self) -> String {
        crate::directive::source::join_lines(
            &self.output_lines(),
            self.unit.newline_style,
            self.unit.trailing_newline,
        )
    }
}

/// Result of translating one unit. `output` is withheld when any error was
/// reported, or any warning under `fail_on_warning`.
#[derive(Debug, Clone)]
pub struct Translation {
    pub output: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Translation {
    pub fn has_errors(&self) -> bool {
        diag::has_errors(&self.diagnostics)
    }
}

/// Replaces every OpenACC directive with its OpenMP mapping. OpenMP lines and
/// host code pass through byte for byte.
pub fn translate_unit(unit: &SourceUnit, config: &MappingConfig) -> Translation {
    let plan = RewritePlan::build(unit, config);
    let failed = plan.has_errors() || (config.fail_on_warning && diag::has_warnings(&plan.diagnostics));
    Translation {
        output: (!failed).then(|| plan.render()),
        diagnostics: plan.diagnostics,
    }
}
