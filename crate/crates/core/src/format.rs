//! Locale-independent number formatting for reports and CSV output.

/// Format `v` with `digits` significant digits in plain decimal notation,
/// switching to exponent notation for very large or very small magnitudes.
pub fn sig(v: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{:.*e}", digits - 1, v);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Rounding may carry into a new digit (9.999995 -> 10.00000).
    let carried = s
        .trim_start_matches('-')
        .replace('.', "")
        .trim_start_matches('0')
        .len()
        > digits;
    if carried && decimals > 0 {
        return format!("{:.*}", decimals - 1, v);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig(0.254475, 6), "0.254475");
        assert_eq!(sig(-1.541849, 6), "-1.54185");
        assert_eq!(sig(1.5, 6), "1.50000");
        assert_eq!(sig(0.0908, 4), "0.09080");
        assert_eq!(sig(0.0, 6), "0");
        assert_eq!(sig(1234567.0, 3), "1234567");
        assert_eq!(sig(9.999996, 6), "10.0000");
        assert_eq!(sig(1e-9, 3), "1.00e-9");
        assert_eq!(sig(f64::INFINITY, 6), "inf");
    }
}
