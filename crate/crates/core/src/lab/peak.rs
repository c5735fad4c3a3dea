//! Theoretical peak arithmetic rate: clock x cores x FLOP per cycle.

use super::{LabError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakSpec<T> {
    /// Cycles per second.
    pub clock_hz: T,
    pub cores: u64,
    /// FLOP per core per cycle.
    pub flop_per_cycle: T,
}

impl<T: Scalar> PeakSpec<T> {
    pub fn new(clock_hz: T, cores: u64, flop_per_cycle: T) -> Result<Self, LabError> {
        let spec = PeakSpec {
            clock_hz,
            cores,
            flop_per_cycle,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let positive = |x: T| x > T::zero() && x.is_finite();
        if !positive(self.clock_hz) {
            return Err(LabError::NonPositive("clock"));
        }
        if self.cores == 0 {
            return Err(LabError::NonPositive("cores"));
        }
        if !positive(self.flop_per_cycle) {
            return Err(LabError::NonPositive("FLOP per cycle"));
        }
        Ok(())
    }
}

/// FLOP per second.
pub fn peak_flops<T: Scalar>(s: &PeakSpec<T>) -> Result<T, LabError> {
    s.validate()?;
    let cores = T::from_u64(s.cores).ok_or(LabError::NonPositive("cores"))?;
    Ok(s.clock_hz * cores * s.flop_per_cycle)
}
