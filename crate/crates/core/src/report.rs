//! Shared rendering helpers for machine-readable reports.

/// Formats a float as a decimal string with 20 significant digits.
///
/// Output is plain decimal for ordinary magnitudes and falls back to
/// scientific notation when the exponent gets extreme.
pub fn decimal20(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i64;
    let decimals = 19 - exp;
    if (0..=32).contains(&decimals) {
        format!("{:.*}", decimals as usize, x)
    } else {
        format!("{:.19e}", x)
    }
}
