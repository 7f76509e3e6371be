//! Number formatting shared by the CSV and JSON emitters.

/// Scientific notation with 17 significant digits, enough to round-trip
/// any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.5, -0.5, 1.0 / 3.0, 2f64.sqrt() / 2.0, 1e-300, 6.02e23, 0.0] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }
}
