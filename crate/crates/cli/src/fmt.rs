//! Number formatting shared by all reports: six decimal places, scientific
//! notation once a magnitude drops below 1e-4 (report values span fifty
//! orders of magnitude), and `inf` spelled out so JSON and CSV stay lossless.

/// Canonical rendering of a reported value.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if a == 0.0 || a >= 1e-4 {
        format!("{v:.6}")
    } else {
        format!("{v:.6e}")
    }
}

/// Rendering for leakage quantities computed through posterior ratios, where
/// values at rounding scale are exact zeros by the support-floor convention.
pub fn fmt_leakage(v: f64) -> String {
    if v.is_finite() && v.abs() < 1e-12 {
        fmt_float(0.0)
    } else {
        fmt_float(v)
    }
}

/// JSON value that survives infinities (serde maps them to null otherwise).
pub fn json_float(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v.is_nan() {
        serde_json::Value::String("nan".into())
    } else if v > 0.0 {
        serde_json::Value::String("inf".into())
    } else {
        serde_json::Value::String("-inf".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_span_magnitudes() {
        assert_eq!(fmt_float(0.0), "0.000000");
        assert_eq!(fmt_float(1.0986122886681098), "1.098612");
        assert_eq!(fmt_float(0.06893623813510887), "0.068936");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!(fmt_float(1.5e-52), "1.500000e-52");
        assert_eq!(fmt_float(-2.5e-5), "-2.500000e-5");
        assert_eq!(fmt_leakage(2.2e-16), "0.000000");
        assert_eq!(fmt_leakage(1e-3), "0.001000");
    }

    #[test]
    fn json_floats_keep_infinities() {
        assert_eq!(json_float(f64::INFINITY), serde_json::json!("inf"));
        assert_eq!(json_float(1.5), serde_json::json!(1.5));
    }
}
