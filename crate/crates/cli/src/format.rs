//! Plain-decimal formatting at 15 significant digits, the fixed precision of
//! every CSV this tool emits. Formatting is a pure function of the f64 bits,
//! which is what makes sweep outputs byte-reproducible.

/// Formats a value with 15 significant digits as a plain decimal string
/// (never exponent notation), trimming trailing fractional zeros. Zero is
/// `"0"` regardless of sign.
pub fn format_sig15(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if value.is_nan() {
        return "NaN".to_string();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf" } else { "-inf" }.to_string();
    }

    // 15 significant digits: one leading digit plus 14 after the point.
    let scientific = format!("{:.14e}", value.abs());
    let (mantissa, exponent) = scientific
        .split_once('e')
        .expect("{:.14e} always contains an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 15, "mantissa carries 15 digits");

    let mut out = String::new();
    if value < 0.0 {
        out.push('-');
    }
    if exponent >= 14 {
        out.push_str(&digits);
        for _ in 0..(exponent - 14) {
            out.push('0');
        }
    } else if exponent >= 0 {
        let split = (exponent + 1) as usize;
        out.push_str(&digits[..split]);
        let fraction = digits[split..].trim_end_matches('0');
        if !fraction.is_empty() {
            out.push('.');
            out.push_str(fraction);
        }
    } else {
        out.push_str("0.");
        for _ in 0..(-exponent - 1) {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_and_halves() {
        assert_eq!(format_sig15(0.0), "0");
        assert_eq!(format_sig15(-0.0), "0");
        assert_eq!(format_sig15(1.0), "1");
        assert_eq!(format_sig15(2.0), "2");
        assert_eq!(format_sig15(0.5), "0.5");
        assert_eq!(format_sig15(-1.5), "-1.5");
    }

    #[test]
    fn fifteen_digits_no_more() {
        assert_eq!(format_sig15(2.0 / 3.0), "0.666666666666667");
        assert_eq!(format_sig15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(format_sig15(0.270426041486378), "0.270426041486378");
        assert_eq!(format_sig15(3.622943563232716), "3.62294356323272");
    }

    #[test]
    fn small_and_large_magnitudes_stay_plain() {
        assert_eq!(format_sig15(0.000325520833333333), "0.000325520833333333");
        assert_eq!(format_sig15(1e-9), "0.000000001");
        assert_eq!(format_sig15(1e16), "10000000000000000");
        assert_eq!(format_sig15(123456789.0), "123456789");
    }

    #[test]
    fn negatives_keep_their_sign_except_zero() {
        assert_eq!(format_sig15(-0.25), "-0.25");
        assert_eq!(format_sig15(-1e-3), "-0.001");
    }

    #[test]
    fn non_finite_values_have_stable_spellings() {
        assert_eq!(format_sig15(f64::INFINITY), "inf");
        assert_eq!(format_sig15(f64::NEG_INFINITY), "-inf");
    }
}
