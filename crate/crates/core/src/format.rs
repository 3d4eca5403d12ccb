//! Decimal formatting for CSV output.

/// Shortest round-trip decimal representation of `v`, rounded first to at most
/// `sig` significant digits.
pub fn fmt_sig(v: f64, sig: usize) -> String {
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
    let sig = sig.clamp(1, 17);
    let rounded: f64 = format!("{:.*e}", sig - 1, v)
        .parse()
        .expect("valid float literal");
    format!("{rounded}")
}

/// Nine significant digits, used by surfaces and tables.
pub fn fmt9(v: f64) -> String {
    fmt_sig(v, 9)
}
