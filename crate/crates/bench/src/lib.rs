//! Fixtures shared by the benchmarks.

use num_complex::Complex64;
use symwh::gravity::MonodromySpec;

pub fn eps_reference() -> (MonodromySpec, f64, f64) {
    (MonodromySpec::aiii_eps(Complex64::new(1.0, 0.0)), 4.0, 3.0)
}

pub fn cs_reference() -> (MonodromySpec, f64, f64) {
    let spec = MonodromySpec::aiii_cs(Complex64::new(2f64.sqrt(), 0.0), Complex64::new(1.0, 0.0)).unwrap();
    (spec, 3.0, 5.0)
}
