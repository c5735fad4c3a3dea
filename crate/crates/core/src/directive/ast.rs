//! Directive syntax trees for both models.
//!
//! Construct kinds are dialect-neutral: the combined OpenMP loop construct is
//! one kind whether it is spelled `do` (Fortran) or `for` (C).

use std::fmt;
use std::str::FromStr;

use super::source::Dialect;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionOp {
    Add,
    Mul,
    Max,
    Min,
    Iand,
    Ior,
    Ieor,
    And,
    Or,
}

impl ReductionOp {
    pub const ALL: [ReductionOp; 9] = [
        ReductionOp::Add,
        ReductionOp::Mul,
        ReductionOp::Max,
        ReductionOp::Min,
        ReductionOp::Iand,
        ReductionOp::Ior,
        ReductionOp::Ieor,
        ReductionOp::And,
        ReductionOp::Or,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReductionOp::Add => "+",
            ReductionOp::Mul => "*",
            ReductionOp::Max => "max",
            ReductionOp::Min => "min",
            ReductionOp::Iand => "iand",
            ReductionOp::Ior => "ior",
            ReductionOp::Ieor => "ieor",
            ReductionOp::And => ".and.",
            ReductionOp::Or => ".or.",
        }
    }
}

impl FromStr for ReductionOp {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let s = s.to_ascii_lowercase();
        ReductionOp::ALL.into_iter().find(|op| op.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapKind {
    To,
    From,
    ToFrom,
    Alloc,
}

impl MapKind {
    pub const ALL: [MapKind; 4] = [MapKind::To, MapKind::From, MapKind::ToFrom, MapKind::Alloc];

    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::To => "to",
            MapKind::From => "from",
            MapKind::ToFrom => "tofrom",
            MapKind::Alloc => "alloc",
        }
    }
}

impl FromStr for MapKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let s = s.to_ascii_lowercase();
        MapKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

/// Parenthesized clause arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClauseArgs {
    VarList(Vec<String>),
    Reduction {
        op: ReductionOp,
        vars: Vec<String>,
    },
    /// Verbatim expression text; never evaluated.
    IntExpr(String),
    MapList {
        kind: MapKind,
        vars: Vec<String>,
    },
    Schedule {
        kind: String,
        chunk: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    /// Lowercase clause keyword.
    pub name: String,
    pub args: Option<ClauseArgs>,
}

impl Clause {
    pub fn bare(name: &str) -> Self {
        Clause {
            name: name.to_owned(),
            args: None,
        }
    }

    pub fn vars<S: Into<String>>(name: &str, vars: impl IntoIterator<Item = S>) -> Self {
        Clause {
            name: name.to_owned(),
            args: Some(ClauseArgs::VarList(vars.into_iter().map(Into::into).collect())),
        }
    }

    pub fn expr(name: &str, expr: impl Into<String>) -> Self {
        Clause {
            name: name.to_owned(),
            args: Some(ClauseArgs::IntExpr(expr.into())),
        }
    }

    pub fn reduction<S: Into<String>>(op: ReductionOp, vars: impl IntoIterator<Item = S>) -> Self {
        Clause {
            name: "reduction".to_owned(),
            args: Some(ClauseArgs::Reduction {
                op,
                vars: vars.into_iter().map(Into::into).collect(),
            }),
        }
    }

    pub fn map<S: Into<String>>(kind: MapKind, vars: impl IntoIterator<Item = S>) -> Self {
        Clause {
            name: "map".to_owned(),
            args: Some(ClauseArgs::MapList {
                kind,
                vars: vars.into_iter().map(Into::into).collect(),
            }),
        }
    }

    pub fn schedule(kind: &str, chunk: Option<&str>) -> Self {
        Clause {
            name: "schedule".to_owned(),
            args: Some(ClauseArgs::Schedule {
                kind: kind.to_owned(),
                chunk: chunk.map(str::to_owned),
            }),
        }
    }

    /// Variables named by the clause, if it carries a list.
    pub fn var_list(&self) -> Option<&[String]> {
        match &self.args {
            Some(ClauseArgs::VarList(v))
            | Some(ClauseArgs::Reduction { vars: v, .. })
            | Some(ClauseArgs::MapList { vars: v, .. }) => Some(v),
            _ => None,
        }
    }
}

/// Canonical spelling: `name` or `name(args)` with no interior spaces
/// beyond those inside verbatim expressions.
impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        match &self.args {
            None => Ok(()),
            Some(ClauseArgs::VarList(vars)) => write!(f, "({})", vars.join(",")),
            Some(ClauseArgs::Reduction { op, vars }) => {
                write!(f, "({}:{})", op.as_str(), vars.join(","))
            }
            Some(ClauseArgs::IntExpr(e)) => write!(f, "({e})"),
            Some(ClauseArgs::MapList { kind, vars }) => {
                write!(f, "({}:{})", kind.as_str(), vars.join(","))
            }
            Some(ClauseArgs::Schedule { kind, chunk: Some(c) }) => write!(f, "({kind},{c})"),
            Some(ClauseArgs::Schedule { kind, chunk: None }) => write!(f, "({kind})"),
        }
    }
}

/// Argument shape a clause keyword expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ArgShape {
    None,
    VarList,
    Reduction,
    Expr,
    Map,
    Schedule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccKind {
    Parallel,
    ParallelLoop,
    Kernels,
    KernelsLoop,
    Loop,
    Data,
    EndParallel,
    EndKernels,
    EndData,
}

const ACC_COMPUTE_CLAUSES: &[&str] = &[
    "reduction",
    "private",
    "firstprivate",
    "num_gangs",
    "num_workers",
    "vector_length",
    "copyin",
    "copyout",
    "copy",
    "create",
];

const ACC_COMBINED_CLAUSES: &[&str] = &[
    "gang",
    "worker",
    "vector",
    "collapse",
    "reduction",
    "private",
    "firstprivate",
    "num_gangs",
    "num_workers",
    "vector_length",
    "copyin",
    "copyout",
    "copy",
    "create",
];

const ACC_LOOP_CLAUSES: &[&str] = &["gang", "worker", "vector", "collapse", "reduction", "private"];

const ACC_DATA_CLAUSES: &[&str] = &["copyin", "copyout", "copy", "create"];

impl AccKind {
    pub const ALL: [AccKind; 9] = [
        AccKind::Parallel,
        AccKind::ParallelLoop,
        AccKind::Kernels,
        AccKind::KernelsLoop,
        AccKind::Loop,
        AccKind::Data,
        AccKind::EndParallel,
        AccKind::EndKernels,
        AccKind::EndData,
    ];

    pub fn keywords(self) -> &'static [&'static str] {
        match self {
            AccKind::Parallel => &["parallel"],
            AccKind::ParallelLoop => &["parallel", "loop"],
            AccKind::Kernels => &["kernels"],
            AccKind::KernelsLoop => &["kernels", "loop"],
            AccKind::Loop => &["loop"],
            AccKind::Data => &["data"],
            AccKind::EndParallel => &["end", "parallel"],
            AccKind::EndKernels => &["end", "kernels"],
            AccKind::EndData => &["end", "data"],
        }
    }

    pub fn is_end(self) -> bool {
        matches!(self, AccKind::EndParallel | AccKind::EndKernels | AccKind::EndData)
    }

    /// Constructs whose region is tracked on the construct stack.
    pub fn is_opener(self) -> bool {
        matches!(
            self,
            AccKind::Parallel | AccKind::ParallelLoop | AccKind::Kernels | AccKind::KernelsLoop | AccKind::Data
        )
    }

    /// End directives exist only in Fortran.
    pub fn valid_in(self, dialect: Dialect) -> bool {
        dialect == Dialect::FortranFree || !self.is_end()
    }

    pub fn allowed_clauses(self) -> &'static [&'static str] {
        match self {
            AccKind::Parallel | AccKind::Kernels => ACC_COMPUTE_CLAUSES,
            AccKind::ParallelLoop | AccKind::KernelsLoop => ACC_COMBINED_CLAUSES,
            AccKind::Loop => ACC_LOOP_CLAUSES,
            AccKind::Data => ACC_DATA_CLAUSES,
            AccKind::EndParallel | AccKind::EndKernels | AccKind::EndData => &[],
        }
    }

    pub(crate) fn clause_shape(name: &str) -> Option<ArgShape> {
        Some(match name {
            "gang" | "worker" | "vector" => ArgShape::None,
            "collapse" | "num_gangs" | "num_workers" | "vector_length" => ArgShape::Expr,
            "reduction" => ArgShape::Reduction,
            "private" | "firstprivate" | "copyin" | "copyout" | "copy" | "create" => ArgShape::VarList,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AccDirective {
    pub kind: AccKind,
    pub clauses: Vec<Clause>,
}

impl AccDirective {
    pub fn new(kind: AccKind, clauses: Vec<Clause>) -> Self {
        AccDirective { kind, clauses }
    }

    pub fn has_clause(&self, name: &str) -> bool {
        self.clauses.iter().any(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmpKind {
    TargetTeams,
    TargetTeamsDistributeParallelLoopSimd,
    TeamsDistribute,
    ParallelSimd,
    TargetData,
    EndTargetTeams,
    EndTargetTeamsDistributeParallelLoopSimd,
    EndTargetData,
}

/// Placeholder for the dialect's loop keyword in [`OmpKind::keyword_pattern`].
pub(crate) const LOOP_WORD: &str = "<loop>";

const OMP_TARGET_TEAMS_CLAUSES: &[&str] = &[
    "map",
    "num_teams",
    "num_threads",
    "reduction",
    "private",
    "firstprivate",
];

const OMP_COMBINED_CLAUSES: &[&str] = &[
    "map",
    "num_teams",
    "num_threads",
    "collapse",
    "schedule",
    "reduction",
    "private",
    "firstprivate",
];

const OMP_TEAMS_DISTRIBUTE_CLAUSES: &[&str] = &["num_teams", "collapse", "reduction", "private", "firstprivate"];

const OMP_PARALLEL_SIMD_CLAUSES: &[&str] = &["num_threads", "collapse", "reduction", "private", "firstprivate"];

impl OmpKind {
    pub const ALL: [OmpKind; 8] = [
        OmpKind::TargetTeams,
        OmpKind::TargetTeamsDistributeParallelLoopSimd,
        OmpKind::TeamsDistribute,
        OmpKind::ParallelSimd,
        OmpKind::TargetData,
        OmpKind::EndTargetTeams,
        OmpKind::EndTargetTeamsDistributeParallelLoopSimd,
        OmpKind::EndTargetData,
    ];

    pub(crate) fn keyword_pattern(self) -> &'static [&'static str] {
        match self {
            OmpKind::TargetTeams => &["target", "teams"],
            OmpKind::TargetTeamsDistributeParallelLoopSimd => {
                &["target", "teams", "distribute", "parallel", LOOP_WORD, "simd"]
            }
            OmpKind::TeamsDistribute => &["teams", "distribute"],
            OmpKind::ParallelSimd => &["parallel", "simd"],
            OmpKind::TargetData => &["target", "data"],
            OmpKind::EndTargetTeams => &["end", "target", "teams"],
            OmpKind::EndTargetTeamsDistributeParallelLoopSimd => {
                &["end", "target", "teams", "distribute", "parallel", LOOP_WORD, "simd"]
            }
            OmpKind::EndTargetData => &["end", "target", "data"],
        }
    }

    /// Construct keywords as spelled in `dialect`.
    pub fn keywords(self, dialect: Dialect) -> Vec<&'static str> {
        let loop_word = loop_keyword(dialect);
        self.keyword_pattern()
            .iter()
            .map(|w| if *w == LOOP_WORD { loop_word } else { w })
            .collect()
    }

    pub fn is_end(self) -> bool {
        matches!(
            self,
            OmpKind::EndTargetTeams | OmpKind::EndTargetTeamsDistributeParallelLoopSimd | OmpKind::EndTargetData
        )
    }

    pub fn valid_in(self, dialect: Dialect) -> bool {
        dialect == Dialect::FortranFree || !self.is_end()
    }

    /// The end form closing a region opened by `self`, if any.
    pub fn end_form(self) -> Option<OmpKind> {
        match self {
            OmpKind::TargetTeams => Some(OmpKind::EndTargetTeams),
            OmpKind::TargetTeamsDistributeParallelLoopSimd => Some(OmpKind::EndTargetTeamsDistributeParallelLoopSimd),
            OmpKind::TargetData => Some(OmpKind::EndTargetData),
            _ => None,
        }
    }

    pub fn allowed_clauses(self) -> &'static [&'static str] {
        match self {
            OmpKind::TargetTeams => OMP_TARGET_TEAMS_CLAUSES,
            OmpKind::TargetTeamsDistributeParallelLoopSimd => OMP_COMBINED_CLAUSES,
            OmpKind::TeamsDistribute => OMP_TEAMS_DISTRIBUTE_CLAUSES,
            OmpKind::ParallelSimd => OMP_PARALLEL_SIMD_CLAUSES,
            OmpKind::TargetData => &["map"],
            _ => &[],
        }
    }

    pub(crate) fn clause_shape(name: &str) -> Option<ArgShape> {
        Some(match name {
            "collapse" | "num_teams" | "num_threads" => ArgShape::Expr,
            "reduction" => ArgShape::Reduction,
            "private" | "firstprivate" => ArgShape::VarList,
            "map" => ArgShape::Map,
            "schedule" => ArgShape::Schedule,
            _ => return None,
        })
    }
}

pub fn loop_keyword(dialect: Dialect) -> &'static str {
    match dialect {
        Dialect::FortranFree => "do",
        Dialect::C => "for",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmpDirective {
    pub kind: OmpKind,
    pub clauses: Vec<Clause>,
}

impl OmpDirective {
    pub fn new(kind: OmpKind, clauses: Vec<Clause>) -> Self {
        OmpDirective { kind, clauses }
    }
}
