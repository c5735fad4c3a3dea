//! Directive-level equivalence of an OpenACC/OpenMP file pair.
//!
//! Both sides are reduced to their OpenMP directive sequence (OpenACC lines
//! are translated first), then compared position by position. A directive is
//! normalized to its construct kind plus the multiset of its clauses with
//! whitespace removed. Variable order is significant only inside `map`.

use std::fmt;

use serde::Serialize;

use crate::diag::{self, Diagnostic};
use crate::directive::{Clause, ClauseArgs, Dialect, OmpDirective, OmpKind, SourceUnit};
use crate::mapping::MappingConfig;

use super::translate::map_unit;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizedDirective {
    pub construct: String,
    #[serde(skip)]
    pub kind: OmpKind,
    /// Sorted canonical clause spellings.
    pub clauses: Vec<String>,
}

fn normalize_clause(c: &Clause) -> String {
    let mut c = c.clone();
    match &mut c.args {
        Some(ClauseArgs::VarList(vars)) | Some(ClauseArgs::Reduction { vars, .. }) => vars.sort(),
        _ => {}
    }
    c.to_string().chars().filter(|ch| !ch.is_whitespace()).collect()
}

pub fn normalize(d: &OmpDirective) -> NormalizedDirective {
    let mut clauses: Vec<String> = d.clauses.iter().map(normalize_clause).collect();
    clauses.sort();
    NormalizedDirective {
        construct: d.kind.keywords(Dialect::FortranFree).join(" "),
        kind: d.kind,
        clauses,
    }
}

/// Elements of sorted `a` missing from sorted `b`, as multisets.
fn multiset_minus(a: &[String], b: &[String]) -> Vec<String> {
    let mut rest = b.to_vec();
    a.iter()
        .filter(|x| match rest.iter().position(|y| y == *x) {
            Some(i) => {
                rest.remove(i);
                false
            }
            None => true,
        })
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PositionStatus {
    Match,
    Mismatch {
        kind_differs: bool,
        /// Clauses present only on the translated OpenACC side.
        only_translated: Vec<String>,
        /// Clauses present only on the reference OpenMP side.
        only_reference: Vec<String>,
    },
    MissingTranslated,
    MissingReference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositionReport {
    pub index: usize,
    pub translated_line: Option<usize>,
    pub reference_line: Option<usize>,
    pub translated: Option<NormalizedDirective>,
    pub reference: Option<NormalizedDirective>,
    #[serde(flatten)]
    pub status: PositionStatus,
}

impl PositionReport {
    pub fn is_match(&self) -> bool {
        self.status == PositionStatus::Match
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub positions: Vec<PositionReport>,
}

impl EquivalenceReport {
    pub fn is_match(&self) -> bool {
        self.positions.iter().all(PositionReport::is_match)
    }

    pub fn mismatches(&self) -> usize {
        self.positions.iter().filter(|p| !p.is_match()).count()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |l: Option<usize>| l.map_or_else(|| "-".to_owned(), |l| l.to_string());
        for p in &self.positions {
            let construct = p
                .translated
                .as_ref()
                .or(p.reference.as_ref())
                .map_or("", |d| d.construct.as_str());
            write!(
                f,
                "{:>3}  {:>5} | {:<5}  ",
                p.index + 1,
                line(p.translated_line),
                line(p.reference_line)
            )?;
            match &p.status {
                PositionStatus::Match => writeln!(f, "match     {construct}")?,
                PositionStatus::Mismatch {
                    kind_differs,
                    only_translated,
                    only_reference,
                } => {
                    write!(f, "MISMATCH  {construct}")?;
                    if *kind_differs {
                        let other = p.reference.as_ref().map_or("", |d| d.construct.as_str());
                        write!(f, " vs {other}")?;
                    }
                    if !only_translated.is_empty() {
                        write!(f, "; only translated: {}", only_translated.join(" "))?;
                    }
                    if !only_reference.is_empty() {
                        write!(f, "; only reference: {}", only_reference.join(" "))?;
                    }
                    writeln!(f)?;
                }
                PositionStatus::MissingTranslated => writeln!(f, "MISSING   (no translated directive)")?,
                PositionStatus::MissingReference => writeln!(f, "MISSING   (no reference directive)")?,
            }
        }
        write!(
            f,
            "verdict: {} ({} positions, {} mismatches)",
            if self.is_match() { "MATCH" } else { "MISMATCH" },
            self.positions.len(),
            self.mismatches()
        )
    }
}

/// OpenMP directive sequence of a unit, OpenACC lines translated.
fn sequence(unit: &SourceUnit, config: &MappingConfig) -> Result<Vec<(usize, NormalizedDirective)>, Vec<Diagnostic>> {
    let (mapped, diags) = map_unit(unit, config, true);
    if diag::has_errors(&diags) {
        return Err(diags.into_iter().filter(Diagnostic::is_error).collect());
    }
    Ok(mapped
        .into_iter()
        .filter_map(|m| m.omp.map(|d| (m.line.start_line, normalize(&d))))
        .collect())
}

/// Compares the translation of `acc_unit` with `omp_unit`, directive by
/// directive. Host code is ignored.
pub fn verify_pair(
    acc_unit: &SourceUnit,
    omp_unit: &SourceUnit,
    config: &MappingConfig,
) -> Result<EquivalenceReport, Vec<Diagnostic>> {
    let left = sequence(acc_unit, config);
    let right = sequence(omp_unit, config);
    let (left, right) = match (left, right) {
        (Ok(l), Ok(r)) => (l, r),
        (l, r) => {
            let mut errors = l.err().unwrap_or_default();
            errors.extend(r.err().unwrap_or_default());
            return Err(errors);
        }
    };

    let n = left.len().max(right.len());
    let positions = (0..n)
        .map(|index| {
            let l = left.get(index);
            let r = right.get(index);
            let status = match (l, r) {
                (Some((_, a)), Some((_, b))) if a == b => PositionStatus::Match,
                (Some((_, a)), Some((_, b))) => PositionStatus::Mismatch {
                    kind_differs: a.kind != b.kind,
                    only_translated: multiset_minus(&a.clauses, &b.clauses),
                    only_reference: multiset_minus(&b.clauses, &a.clauses),
                },
                (None, _) => PositionStatus::MissingTranslated,
                (_, None) => PositionStatus::MissingReference,
            };
            PositionReport {
                index,
                translated_line: l.map(|x| x.0),
                reference_line: r.map(|x| x.0),
                translated: l.map(|x| x.1.clone()),
                reference: r.map(|x| x.1.clone()),
                status,
            }
        })
        .collect();
    Ok(EquivalenceReport { positions })
}
