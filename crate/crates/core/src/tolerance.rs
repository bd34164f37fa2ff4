//! Numerical tolerances shared by the checks in this crate.

/// Relative agreement required between two routes to the same index value
/// (edge sum vs. class counts, closed form vs. construction or enumeration).
pub const CLOSED_FORM_REL: f64 = 1e-9;

/// Absolute slack when deciding whether an enumerated graph ties the minimum.
pub const MINIMUM_SLACK: f64 = 1e-9;

/// A descent step must improve the index by more than this.
pub const DESCENT_EPS: f64 = 1e-9;

/// Violation threshold for grid certification of monotonicity properties.
pub const PROPERTY_EPS: f64 = 1e-12;

/// `|a - b| <= rel * max(|a|, |b|, 1)`.
pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
