//! Deterministic decimal formatting for CSV output.

/// Significant digits kept in every CSV number.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds `v` to 9 significant digits and prints the shortest decimal that
/// reads back to the rounded value. Plain notation is used for magnitudes in
/// `[1e-5, 1e15)`, scientific notation (`1.5e-20`) elsewhere.
pub fn sig9(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .expect("formatted float parses");
    let mag = rounded.abs();
    if (1e-5..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}
