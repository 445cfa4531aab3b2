//! Decimal formatting with a fixed number of significant digits.

/// Formats `v` with exactly `digits` significant digits.
///
/// Plain positional notation is used for decimal exponents in `[-5, digits)`,
/// scientific notation (`1.2345e-7`) otherwise. With 17 digits every finite
/// `f64` round-trips through `str::parse`.
pub fn sig(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (_, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        sci
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, v)
    }
}

/// 17 significant digits: the machine-readable format.
pub fn exact(v: f64) -> String {
    sig(v, 17)
}
