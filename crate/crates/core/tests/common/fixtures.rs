use acc2omp::directive::SourceUnit;
use acc2omp::lab::{generate_variant, JacobiParams, Variant};
use acc2omp::mapping::MappingConfig;

pub fn params() -> JacobiParams<f64> {
    JacobiParams::new(8192, 8192, 1e-3, 10_000).unwrap()
}

pub fn variant_text(v: Variant) -> String {
    generate_variant(v, &params())
}

pub fn variant_unit(v: Variant) -> SourceUnit {
    SourceUnit::from_text(v.file_name(), &variant_text(v), None).unwrap()
}

pub fn golden_config() -> MappingConfig {
    MappingConfig::default().with_schedule("static,1".parse().unwrap())
}

pub const KERNELS_DEMO: &str = "\
program kernels_demo
   integer :: i
   double precision :: a(100)
!$acc kernels
   do i = 1, 100
      a(i) = 2.0d0 * i
   enddo
!$acc end kernels
end program kernels_demo
";

/// A parse error in the middle of an otherwise translatable file.
pub const BROKEN_MID_FILE: &str = "\
program broken
!$acc data copyin(a) copyout(b)
!$acc parallel loop collapse(2)
   do j = 1, n
      do i = 1, n
         b(i,j) = a(i,j)
      enddo
   enddo
!$acc end parallel
!$acc update host(b)
!$acc end data
end program broken
";

pub const VECTOR_LENGTH_DEMO: &str = "\
program vl
!$acc parallel loop gang vector vector_length(128)
   do i = 1, n
      a(i) = 0.0d0
   enddo
end program vl
";

pub const CONTINUED: &str = "\
subroutine sweep(f, f_k, nx, ny)
   !$acc parallel loop &
   !$acc collapse(2) private(df_x, &
   !$acc&   df_y)
   do j = 2, ny - 1
      do i = 2, nx - 1
         f_k(i,j) = 0.25d0 * (f(i+1,j) + f(i-1,j) + f(i,j+1) + f(i,j-1))
      enddo
   enddo
   !$acc end parallel loop
end subroutine sweep";

pub const SAXPY_C: &str = "\
void saxpy(int n, float a, const float *x, float *y)
{
    #pragma acc parallel loop copyin(x[0:n]) \\
        copy(y[0:n]) num_gangs(80)
    for (int i = 0; i < n; ++i)
        y[i] = a * x[i] + y[i];
}
";

/// Hand-written files covering continuations, C, CRLF, a BOM and a missing
/// final newline.
pub fn hand_fixtures() -> Vec<(&'static str, String)> {
    let acc_data = variant_text(Variant::AccData);
    vec![
        ("continued.f90", CONTINUED.to_owned()),
        ("saxpy.c", SAXPY_C.to_owned()),
        ("crlf.f90", acc_data.replace('\n', "\r\n")),
        ("bom.f90", format!("\u{feff}{acc_data}")),
        ("vector_length.f90", VECTOR_LENGTH_DEMO.to_owned()),
        ("kernels_demo.f90", KERNELS_DEMO.to_owned()),
        ("broken.f90", BROKEN_MID_FILE.to_owned()),
    ]
}

/// Every generated variant plus the hand fixtures.
pub fn corpus() -> Vec<SourceUnit> {
    let mut units: Vec<SourceUnit> = Variant::ALL.into_iter().map(variant_unit).collect();
    units.extend(
        hand_fixtures()
            .into_iter()
            .map(|(name, text)| SourceUnit::from_text(name, &text, None).unwrap()),
    );
    units
}
