//! Emission, whole-file translation and pair verification.

pub mod emit;
pub mod translate;
pub mod verify;

pub use emit::{emit_acc, emit_omp, EmitError, MIN_WRAP_WIDTH};
pub use translate::{translate_unit, Edit, RewritePlan, Translation};
pub use verify::{normalize, verify_pair, EquivalenceReport, NormalizedDirective, PositionReport, PositionStatus};
