//! Jacobi iteration for the 2D Laplace equation on a uniform grid.
//!
//! Each sweep replaces every interior point with the average of its four
//! neighbors, then measures the largest update and copies the new values
//! back. Iteration stops once the largest update is at most the tolerance, or
//! after `max_iter` sweeps.

use super::{LabError, Scalar};

/// Boundary and initial values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Top edge (`j = ny`) held at 1, the other edges and the interior at 0.
    #[default]
    UnitTopEdge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiParams<T> {
    /// Grid points along x, boundary included.
    pub nx: usize,
    /// Grid points along y, boundary included.
    pub ny: usize,
    /// Convergence threshold on the largest update of a sweep.
    pub tolerance: T,
    pub max_iter: usize,
    pub boundary: Boundary,
}

impl<T: Scalar> JacobiParams<T> {
    pub fn new(nx: usize, ny: usize, tolerance: T, max_iter: usize) -> Result<Self, LabError> {
        let p = JacobiParams {
            nx,
            ny,
            tolerance,
            max_iter,
            boundary: Boundary::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        if self.nx < 3 || self.ny < 3 {
            return Err(LabError::GridTooSmall {
                nx: self.nx,
                ny: self.ny,
            });
        }
        if !(self.tolerance > T::zero() && self.tolerance.is_finite()) {
            return Err(LabError::BadTolerance);
        }
        if self.max_iter == 0 {
            return Err(LabError::BadMaxIter);
        }
        Ok(())
    }
}

/// Solution field stored column-major, `values[i + j * nx]` for point `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiField<T> {
    nx: usize,
    ny: usize,
    values: Vec<T>,
    /// Sweeps performed.
    pub iter: usize,
    /// Largest update of the last sweep.
    pub max_err: T,
}

impl<T: Scalar> JacobiField<T> {
    /// The field before the first sweep.
    pub fn initial(nx: usize, ny: usize, boundary: Boundary) -> Self {
        let mut values = vec![T::zero(); nx * ny];
        match boundary {
            Boundary::UnitTopEdge => {
                for i in 0..nx {
                    values[i + (ny - 1) * nx] = T::one();
                }
            }
        }
        JacobiField {
            nx,
            ny,
            values,
            iter: 0,
            max_err: T::infinity(),
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Value at 0-based point `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i + j * self.nx]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1
    }

    pub fn converged(&self, tolerance: T) -> bool {
        self.max_err <= tolerance
    }

    /// Largest violation of the five-point average over the interior.
    pub fn residual(&self) -> T {
        let quarter = T::lit(0.25);
        let mut worst = T::zero();
        for j in 1..self.ny - 1 {
            for i in 1..self.nx - 1 {
                let avg = quarter * (self.get(i + 1, j) + self.get(i - 1, j) + self.get(i, j + 1) + self.get(i, j - 1));
                worst = worst.max((self.get(i, j) - avg).abs());
            }
        }
        worst
    }
}

/// Runs Jacobi sweeps from the initial field of `p` until convergence or the
/// iteration cap. Not converging is not an error; check
/// [`JacobiField::converged`].
pub fn jacobi_solve<T: Scalar>(p: &JacobiParams<T>) -> Result<JacobiField<T>, LabError> {
    p.validate()?;
    let (nx, ny) = (p.nx, p.ny);
    let mut field = JacobiField::initial(nx, ny, p.boundary);
    let f = &mut field.values;
    let mut f_k = f.clone();
    let quarter = T::lit(0.25);
    let mut max_err = T::infinity();
    let mut iter = 0;

    while max_err > p.tolerance && iter < p.max_iter {
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let df_x = f[i + 1 + j * nx] + f[i - 1 + j * nx];
                let df_y = f[i + (j + 1) * nx] + f[i + (j - 1) * nx];
                f_k[i + j * nx] = quarter * (df_x + df_y);
            }
        }
        max_err = T::zero();
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let k = i + j * nx;
                max_err = (f_k[k] - f[k]).abs().max(max_err);
                f[k] = f_k[k];
            }
        }
        iter += 1;
    }

    field.iter = iter;
    field.max_err = max_err;
    Ok(field)
}
