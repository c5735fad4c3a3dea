//! OpenACC to OpenMP target-offload translator.
//!
//! The pipeline is: [`directive::scan_directives`] finds directive lines,
//! [`directive::parse_acc`] builds syntax trees, [`mapping::map_directive`]
//! applies the one-to-one rule set, and [`rewrite::translate_unit`] splices
//! the emitted OpenMP text back into the file. [`rewrite::verify_pair`]
//! compares a translated file against a hand-written OpenMP version.
//!
//! [`lab`] holds the Jacobi/Laplace mini-application used as test corpus,
//! a reference solver and the peak-FLOPS formula. Its numeric code is generic
//! over [`lab::Scalar`]; the aliases below fix the precision.

pub mod cli;
pub mod diag;
pub mod directive;
pub mod lab;
pub mod mapping;
pub mod rewrite;

pub use diag::{Code, Diagnostic, Severity};
pub use directive::{Dialect, SourceUnit};
pub use mapping::MappingConfig;
pub use rewrite::{translate_unit, verify_pair};

pub type JacobiParams64 = lab::JacobiParams<f64>;
pub type JacobiField64 = lab::JacobiField<f64>;
pub type PeakSpec64 = lab::PeakSpec<f64>;
pub type JacobiParams32 = lab::JacobiParams<f32>;
pub type JacobiField32 = lab::JacobiField<f32>;
pub type PeakSpec32 = lab::PeakSpec<f32>;
