//! Fixed-precision float formatting shared by every report writer.

/// Formats `x` with 17 significant digits, enough to round-trip any `f64`.
///
/// Infinities print as `inf` / `-inf` so that the output can be read back by
/// the same parsers that accept exponent strings.
pub fn sig17(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.0, 1.0, -2.5, 1.0 / 3.0, 6.02e23, f64::MIN_POSITIVE] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(sig17(f64::INFINITY), "inf");
        assert_eq!(sig17(1.0), "1.0000000000000000e0");
    }
}
