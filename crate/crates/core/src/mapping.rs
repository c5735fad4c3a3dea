//! OpenACC to OpenMP directive mapping.
//!
//! The rule set is fixed and one-to-one:
//!
//! | OpenACC                              | OpenMP                                        |
//! |--------------------------------------|-----------------------------------------------|
//! | `parallel`                           | `target teams`                                |
//! | `parallel loop [gang worker vector]` | `target teams distribute parallel do simd`    |
//! | `data`                               | `target data`                                 |
//! | `loop` / `loop gang`                 | `teams distribute`                            |
//! | `loop worker` / `loop vector`        | `parallel simd`                               |
//! | `kernels`                            | no counterpart (error, or `target teams`)     |
//! | `copyin` `copyout` `copy` `create`   | `map(to:)` `map(from:)` `map(tofrom:)` `map(alloc:)` |
//! | `num_gangs` / `num_workers`          | `num_teams` / `num_threads`                   |
//! | `vector_length`                      | no counterpart (dropped with a warning)       |
//! | `reduction` `collapse` `private` `firstprivate` | unchanged                          |
//!
//! OpenMP `schedule` has no OpenACC source; it can be injected on combined
//! loop constructs through [`MappingConfig::inject_schedule`].

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::diag::{Code, Diagnostic};
use crate::directive::{AccDirective, AccKind, Clause, ClauseArgs, Dialect, MapKind, OmpDirective, OmpKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelsPolicy {
    /// `kernels` is an error.
    #[default]
    Strict,
    /// Translate `kernels` like `parallel`, with a warning.
    TargetTeams,
}

impl FromStr for KernelsPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(KernelsPolicy::Strict),
            "target-teams" => Ok(KernelsPolicy::TargetTeams),
            other => Err(format!(
                "unknown kernels policy `{other}` (expected `strict` or `target-teams`)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Static,
    Dynamic,
    Guided,
}

impl ScheduleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleKind::Static => "static",
            ScheduleKind::Dynamic => "dynamic",
            ScheduleKind::Guided => "guided",
        }
    }
}

/// A `schedule(kind,chunk)` clause appended to combined loop constructs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleInjection {
    kind: ScheduleKind,
    chunk: String,
}

impl ScheduleInjection {
    pub fn new(kind: ScheduleKind, chunk: impl Into<String>) -> Result<Self, String> {
        let chunk = chunk.into().trim().to_owned();
        if chunk.is_empty() {
            return Err("schedule chunk must be a nonempty expression".to_owned());
        }
        if chunk.contains(['(', ')', ',', '\n']) {
            return Err(format!("schedule chunk `{chunk}` must be a simple expression"));
        }
        Ok(ScheduleInjection { kind, chunk })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn chunk(&self) -> &str {
        &self.chunk
    }

    pub fn clause(&self) -> Clause {
        Clause::schedule(self.kind.as_str(), Some(&self.chunk))
    }
}

impl FromStr for ScheduleInjection {
    type Err = String;

    /// Parses `kind,chunk`, e.g. `static,1`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, chunk) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `kind,chunk`, got `{s}`"))?;
        let kind = match kind.trim().to_ascii_lowercase().as_str() {
            "static" => ScheduleKind::Static,
            "dynamic" => ScheduleKind::Dynamic,
            "guided" => ScheduleKind::Guided,
            other => return Err(format!("unknown schedule kind `{other}`")),
        };
        ScheduleInjection::new(kind, chunk)
    }
}

impl fmt::Display for ScheduleInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.kind.as_str(), self.chunk)
    }
}

/// Translation policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingConfig {
    pub kernels_policy: KernelsPolicy,
    pub inject_schedule: Option<ScheduleInjection>,
    /// Drop `vector_length` with a warning; when off it is an error.
    pub drop_vector_length: bool,
    pub fail_on_warning: bool,
}

impl Default for MappingConfig {
    fn default() -> Self {
        MappingConfig {
            kernels_policy: KernelsPolicy::Strict,
            inject_schedule: None,
            drop_vector_length: true,
            fail_on_warning: false,
        }
    }
}

impl MappingConfig {
    pub fn with_schedule(mut self, schedule: ScheduleInjection) -> Self {
        self.inject_schedule = Some(schedule);
        self
    }
}

/// An unlocated diagnostic produced by the mapper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub code: Code,
    pub message: String,
}

impl Finding {
    fn new(code: Code, message: impl Into<String>) -> Self {
        Finding {
            code,
            message: message.into(),
        }
    }

    pub fn locate(self, file: &Path, line: usize, payload: &str) -> Diagnostic {
        Diagnostic::new(self.code, self.message, file, line, payload)
    }

    pub fn is_error(&self) -> bool {
        self.code.severity() == crate::diag::Severity::Error
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpenConstruct {
    pub acc: AccKind,
    pub omp: OmpKind,
    pub line: usize,
}

/// Open OpenACC regions of a Fortran unit.
///
/// End directives name only the base construct (`end parallel` closes a
/// `parallel loop`), so the opener is remembered to emit the full OpenMP end
/// form. Combined loop constructs may omit their end directive; they are
/// closed implicitly when another opener or a non-matching end arrives.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstructStack {
    open: Vec<OpenConstruct>,
}

fn is_combined_loop(kind: AccKind) -> bool {
    matches!(kind, AccKind::ParallelLoop | AccKind::KernelsLoop)
}

fn closes(end: AccKind, opener: AccKind) -> bool {
    matches!(
        (end, opener),
        (AccKind::EndParallel, AccKind::Parallel | AccKind::ParallelLoop)
            | (AccKind::EndKernels, AccKind::Kernels | AccKind::KernelsLoop)
            | (AccKind::EndData, AccKind::Data)
    )
}

impl ConstructStack {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn top(&self) -> Option<&OpenConstruct> {
        self.open.last()
    }

    fn drop_implicit(&mut self, end: Option<AccKind>) {
        while let Some(top) = self.open.last() {
            let implicit = is_combined_loop(top.acc) && end.is_none_or(|e| !closes(e, top.acc));
            if !implicit {
                break;
            }
            self.open.pop();
        }
    }

    pub fn push(&mut self, entry: OpenConstruct) {
        debug_assert!(entry.acc.is_opener());
        self.drop_implicit(None);
        self.open.push(entry);
    }

    /// Pops the opener matched by `end` and returns it.
    pub fn close(&mut self, end: AccKind) -> Result<OpenConstruct, Option<OpenConstruct>> {
        self.drop_implicit(Some(end));
        match self.open.last() {
            Some(top) if closes(end, top.acc) => Ok(self.open.pop().unwrap()),
            other => Err(other.copied()),
        }
    }

    /// Ends the unit. Returns constructs left open that require an end directive.
    pub fn finish(&mut self) -> Vec<OpenConstruct> {
        self.drop_implicit(None);
        std::mem::take(&mut self.open)
    }
}

fn renamed(c: &Clause, name: &str) -> Clause {
    Clause {
        name: name.to_owned(),
        args: c.args.clone(),
    }
}

fn to_map(c: &Clause, kind: MapKind) -> Clause {
    match &c.args {
        Some(ClauseArgs::VarList(vars)) => Clause::map(kind, vars.iter().cloned()),
        _ => unreachable!("data clauses always carry a variable list"),
    }
}

/// Maps one OpenACC clause onto clauses for `target`.
///
/// Clauses produced here that `target` does not accept are reported as E003.
pub fn map_clause(c: &Clause, target: OmpKind, config: &MappingConfig) -> (Vec<Clause>, Vec<Finding>) {
    let (mapped, findings) = map_clause_by_rule(c, config);
    if let Some(bad) = mapped
        .iter()
        .find(|m| !target.allowed_clauses().contains(&m.name.as_str()))
    {
        let construct = target.keywords(Dialect::FortranFree).join(" ");
        return (
            vec![],
            vec![Finding::new(
                Code::E003,
                format!("`{c}` maps to `{bad}`, which `{construct}` does not accept"),
            )],
        );
    }
    (mapped, findings)
}

fn map_clause_by_rule(c: &Clause, config: &MappingConfig) -> (Vec<Clause>, Vec<Finding>) {
    match c.name.as_str() {
        "copyin" => (vec![to_map(c, MapKind::To)], vec![]),
        "copyout" => (vec![to_map(c, MapKind::From)], vec![]),
        "copy" => (vec![to_map(c, MapKind::ToFrom)], vec![]),
        "create" => (vec![to_map(c, MapKind::Alloc)], vec![]),
        "num_gangs" => (vec![renamed(c, "num_teams")], vec![]),
        "num_workers" => (vec![renamed(c, "num_threads")], vec![]),
        "reduction" | "collapse" | "private" | "firstprivate" => (vec![c.clone()], vec![]),
        "gang" | "worker" | "vector" => (vec![], vec![]),
        "vector_length" if config.drop_vector_length => (
            vec![],
            vec![Finding::new(
                Code::W102,
                format!("`{c}` has no OpenMP counterpart and was dropped"),
            )],
        ),
        "vector_length" => (
            vec![],
            vec![Finding::new(Code::E102, format!("`{c}` has no OpenMP counterpart"))],
        ),
        other => (
            vec![],
            vec![Finding::new(
                Code::E003,
                format!("no OpenMP mapping for clause `{other}`"),
            )],
        ),
    }
}

fn map_clauses(d: &AccDirective, target: OmpKind, config: &MappingConfig) -> (Vec<Clause>, Vec<Finding>) {
    let mut clauses = Vec::new();
    let mut findings = Vec::new();
    for c in &d.clauses {
        let (mapped, notes) = map_clause(c, target, config);
        clauses.extend(mapped);
        findings.extend(notes);
    }
    if target == OmpKind::TargetTeamsDistributeParallelLoopSimd {
        if let Some(schedule) = &config.inject_schedule {
            let clause = schedule.clause();
            findings.push(Finding::new(Code::I201, format!("injected `{clause}`")));
            clauses.push(clause);
        }
    }
    (clauses, findings)
}

/// Maps one OpenACC directive, updating `stack`.
///
/// Returns either a directive or at least one error finding. `line` is the
/// directive's source line, recorded for regions it opens.
pub fn map_directive(
    d: &AccDirective,
    stack: &mut ConstructStack,
    config: &MappingConfig,
    dialect: Dialect,
    line: usize,
) -> (Option<OmpDirective>, Vec<Finding>) {
    let mut findings = Vec::new();

    if d.kind.is_end() {
        return match stack.close(d.kind) {
            Ok(open) => {
                let end = open.omp.end_form().expect("openers map to region constructs");
                (Some(OmpDirective::new(end, vec![])), findings)
            }
            Err(top) => {
                let what = d.kind.keywords().join(" ");
                let message = match top {
                    Some(t) => format!(
                        "`{what}` does not match `{}` opened at line {}",
                        t.acc.keywords().join(" "),
                        t.line
                    ),
                    None => format!("`{what}` without an open construct"),
                };
                findings.push(Finding::new(Code::E103, message));
                (None, findings)
            }
        };
    }

    let target = match d.kind {
        AccKind::Parallel => OmpKind::TargetTeams,
        AccKind::ParallelLoop => OmpKind::TargetTeamsDistributeParallelLoopSimd,
        AccKind::Data => OmpKind::TargetData,
        AccKind::Kernels | AccKind::KernelsLoop => {
            let target = if d.kind == AccKind::Kernels {
                OmpKind::TargetTeams
            } else {
                OmpKind::TargetTeamsDistributeParallelLoopSimd
            };
            match config.kernels_policy {
                KernelsPolicy::Strict => findings.push(Finding::new(
                    Code::E101,
                    "`kernels` has no explicit OpenMP counterpart; rewrite as `parallel` or use --kernels=target-teams",
                )),
                KernelsPolicy::TargetTeams => findings.push(Finding::new(
                    Code::W101,
                    "`kernels` translated as `target teams`; the compiler no longer chooses the parallelization",
                )),
            }
            target
        }
        AccKind::Loop => {
            if d.has_clause("gang") {
                findings.push(Finding::new(
                    Code::W103,
                    "orphaned `loop gang` translated as `teams distribute`; check the team-level partitioning",
                ));
                OmpKind::TeamsDistribute
            } else if d.has_clause("worker") || d.has_clause("vector") {
                OmpKind::ParallelSimd
            } else {
                OmpKind::TeamsDistribute
            }
        }
        AccKind::EndParallel | AccKind::EndKernels | AccKind::EndData => unreachable!(),
    };

    if d.kind.is_opener() && dialect == Dialect::FortranFree {
        stack.push(OpenConstruct {
            acc: d.kind,
            omp: target,
            line,
        });
    }

    let (clauses, notes) = map_clauses(d, target, config);
    findings.extend(notes);
    if findings.iter().any(Finding::is_error) {
        (None, findings)
    } else {
        (Some(OmpDirective::new(target, clauses)), findings)
    }
}
