//! Generator for the Laplace mini-application in its five flavors.
//!
//! All variants share the same host code; they differ only in the directive
//! lines placed around the solver loop.

use std::fmt;
use std::str::FromStr;

use super::{JacobiParams, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Serial,
    AccNoData,
    AccData,
    OmpNoData,
    OmpData,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Serial,
        Variant::AccNoData,
        Variant::AccData,
        Variant::OmpNoData,
        Variant::OmpData,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Serial => "serial",
            Variant::AccNoData => "acc-no-data",
            Variant::AccData => "acc-data",
            Variant::OmpNoData => "omp-no-data",
            Variant::OmpData => "omp-data",
        }
    }

    /// Suggested file name.
    pub fn file_name(self) -> &'static str {
        match self {
            Variant::Serial => "laplace_serial.f90",
            Variant::AccNoData => "laplace_acc_nodata.f90",
            Variant::AccData => "laplace_acc.f90",
            Variant::OmpNoData => "laplace_omp_nodata.f90",
            Variant::OmpData => "laplace_omp.f90",
        }
    }

    fn description(self) -> &'static str {
        match self {
            Variant::Serial => "serial",
            Variant::AccNoData => "OpenACC without data locality",
            Variant::AccData => "OpenACC with data locality",
            Variant::OmpNoData => "OpenMP offload without data directives",
            Variant::OmpData => "OpenMP offload with data directives",
        }
    }

    /// Directive lines at the six insertion points: data region open, first
    /// loop open/close, second loop open/close, data region close.
    fn directives(self) -> [Option<&'static str>; 6] {
        const OMP_LOOP: &str = "!$omp target teams distribute parallel do simd";
        const OMP_END: &str = "!$omp end target teams distribute parallel do simd";
        match self {
            Variant::Serial => [None; 6],
            Variant::AccNoData => [
                None,
                Some("!$acc parallel loop gang worker vector"),
                Some("!$acc end parallel"),
                Some("!$acc parallel loop"),
                Some("!$acc end parallel"),
                None,
            ],
            Variant::AccData => [
                Some("!$acc data copyin(f) copyout(f_k)"),
                Some("!$acc parallel loop gang worker vector collapse(2)"),
                Some("!$acc end parallel"),
                Some("!$acc parallel loop collapse(2) reduction(max:max_err)"),
                Some("!$acc end parallel"),
                Some("!$acc end data"),
            ],
            Variant::OmpNoData => [
                None,
                Some("!$omp target teams distribute parallel do simd map(to:f) map(from:f_k)"),
                Some(OMP_END),
                Some(OMP_LOOP),
                Some(OMP_END),
                None,
            ],
            Variant::OmpData => [
                Some("!$omp target data map(to:f) map(from:f_k)"),
                Some("!$omp target teams distribute parallel do simd collapse(2) schedule(static,1)"),
                Some(OMP_END),
                Some("!$omp target teams distribute parallel do simd collapse(2) schedule(static,1) reduction(max:max_err)"),
                Some(OMP_END),
                Some("!$omp end target data"),
            ],
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown variant `{s}`"))
    }
}

/// Number of generated header comment lines; the only lines besides the
/// directives that differ between variants.
pub const HEADER_LINES: usize = 2;

/// Double-precision Fortran literal, e.g. `1.0d-3`.
fn fortran_real(x: f64) -> String {
    let s = format!("{x:e}");
    let (mantissa, exponent) = s.split_once('e').unwrap_or((&s, "0"));
    if mantissa.contains('.') {
        format!("{mantissa}d{exponent}")
    } else {
        format!("{mantissa}.0d{exponent}")
    }
}

/// Emits a complete free-form Fortran program for `variant`.
pub fn generate_variant<T: Scalar>(variant: Variant, p: &JacobiParams<T>) -> String {
    let tolerance = fortran_real(p.tolerance.to_f64().unwrap_or(f64::NAN));
    let [data_open, loop1_open, loop1_close, loop2_open, loop2_close, data_close] = variant.directives();

    let mut out: Vec<String> = vec![
        format!(
            "! {}: Jacobi solver for the 2D Laplace equation ({})",
            variant.file_name(),
            variant.description()
        ),
        format!(
            "! generated by acc2omp {}: variant={} nx={} ny={} tolerance={} max_iter={}",
            env!("CARGO_PKG_VERSION"),
            variant,
            p.nx,
            p.ny,
            tolerance,
            p.max_iter
        ),
        "program laplace".into(),
        "   implicit none".into(),
        format!("   integer, parameter :: nx = {}, ny = {}", p.nx, p.ny),
        format!("   integer, parameter :: max_iter = {}", p.max_iter),
        format!("   double precision, parameter :: error = {tolerance}"),
        "   double precision, allocatable :: f(:,:), f_k(:,:)".into(),
        "   double precision :: df_x, df_y, max_err".into(),
        "   integer :: i, j, iter".into(),
        String::new(),
        "   allocate(f(nx,ny), f_k(nx,ny))".into(),
        "   f = 0.0d0".into(),
        "   f(:,ny) = 1.0d0".into(),
        "   f_k = f".into(),
        "   max_err = huge(1.0d0)".into(),
        "   iter = 1".into(),
        String::new(),
    ];
    let directive = |d: Option<&str>, out: &mut Vec<String>| out.extend(d.map(str::to_owned));

    directive(data_open, &mut out);
    out.push("do while (max_err.gt.error.and.iter.le.max_iter)".into());
    directive(loop1_open, &mut out);
    out.extend(
        [
            "   do j=2,ny-1",
            "      do i=2,nx-1",
            "         df_x = f(i+1,j) + f(i-1,j)",
            "         df_y = f(i,j+1) + f(i,j-1)",
            "         f_k(i,j) = 0.25*(df_x + df_y)",
            "      enddo",
            "    enddo",
        ]
        .map(String::from),
    );
    directive(loop1_close, &mut out);
    out.extend(["    max_err=0.", ""].map(String::from));
    directive(loop2_open, &mut out);
    out.extend(
        [
            "    do j=2,ny-1",
            "       do i=2,nx-1",
            "          max_err = max(dabs(f_k(i,j) - f(i,j)),max_err)",
            "          f(i,j) = f_k(i,j)",
            "       enddo",
            "    enddo",
        ]
        .map(String::from),
    );
    directive(loop2_close, &mut out);
    out.extend(["    iter = iter +1", "enddo"].map(String::from));
    directive(data_close, &mut out);
    out.extend(
        [
            "",
            "   print '(a,i0,a,es12.5)', 'iterations: ', iter - 1, '  max_err: ', max_err",
            "   deallocate(f, f_k)",
            "end program laplace",
        ]
        .map(String::from),
    );

    let mut text = out.join("\n");
    text.push('\n');
    text
}
