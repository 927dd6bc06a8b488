//! Twelve-significant-digit rendering shared by the CSV and JSON reports.

const DIGITS: i32 = 12;

/// `x` with 12 significant digits, in fixed notation for moderate
/// magnitudes and scientific notation otherwise.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..DIGITS).contains(&exponent) {
        let decimals = (DIGITS - 1 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.prec$e}", prec = (DIGITS - 1) as usize)
    }
}

/// The value a reader recovers from [`format_sig`].
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().expect("formatted float parses")
}
