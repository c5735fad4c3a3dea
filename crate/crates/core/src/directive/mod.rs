//! Directive data model, scanner and parsers.

pub mod ast;
pub mod parse;
pub mod scan;
pub mod source;

pub use ast::{AccDirective, AccKind, Clause, ClauseArgs, MapKind, OmpDirective, OmpKind, ReductionOp};
pub use parse::{parse_acc, parse_omp, ParseError};
pub use scan::{scan_directives, DirectiveLine, Sentinel};
pub use source::{Dialect, NewlineStyle, SourceError, SourceUnit};
