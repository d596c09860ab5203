//! Shared numeric thresholds and comparison helpers.
//!
//! Coefficient comparisons throughout the crate use the mixed criterion
//! `|delta| <= atol + rtol * |reference|`. The defaults budget for
//! double-precision accumulation over at most `N^2` multiply-adds at the
//! default truncation order.

use num_complex::Complex64;

/// Absolute floor for coefficient comparisons.
pub const COEFF_ATOL: f64 = 1e-14;

/// Relative slack for coefficient comparisons.
pub const COEFF_RTOL: f64 = 1e-12;

/// Threshold below which a constant term counts as a vanishing denominator.
pub const DENOMINATOR_EPS: f64 = 1e-15;

/// Mixed absolute/relative closeness test for reals.
pub fn close(value: f64, reference: f64, atol: f64, rtol: f64) -> bool {
    (value - reference).abs() <= atol + rtol * reference.abs()
}

/// Mixed absolute/relative closeness test for complex values.
pub fn close_c(value: Complex64, reference: Complex64, atol: f64, rtol: f64) -> bool {
    (value - reference).norm() <= atol + rtol * reference.norm()
}

/// Coefficient comparison at the crate-default tolerances.
pub fn coeff_close(value: Complex64, reference: Complex64) -> bool {
    close_c(value, reference, COEFF_ATOL, COEFF_RTOL)
}

/// Relative error with an absolute fallback near zero references.
pub fn rel_err(value: f64, reference: f64) -> f64 {
    let denom = reference.abs();
    if denom < 1e-300 {
        value.abs()
    } else {
        (value - reference).abs() / denom
    }
}
