//! Deterministic text rendering for report values.

use num::BigRational;

/// Renders a rational in lowest terms as `p/q`, or as a bare integer when
/// the reduced denominator is 1 (`0`, `1`, `1/4`, `30199/1000000`).
pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

/// Renders `value` in plain decimal with exactly `digits` significant
/// digits, round-half-even. Stable across platforms: the shortest-digit
/// conversion this rounds is exact.
pub fn format_significant(value: f64, digits: usize) -> String {
    assert!(digits >= 1, "need at least one significant digit");
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return if digits == 1 {
            "0".to_string()
        } else {
            format!("0.{}", "0".repeat(digits - 1))
        };
    }
    // {:e} rounds half-even to the requested mantissa length.
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exponent) = sci.split_once('e').expect("{:e} always has an exponent");
    let exponent: i32 = exponent.parse().expect("{:e} exponent is an integer");
    let negative = mantissa.starts_with('-');
    let mantissa: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    debug_assert_eq!(mantissa.len(), digits);

    // value = ±0.mantissa * 10^point, where point digits sit left of the dot.
    let point = exponent + 1;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', point.unsigned_abs() as usize));
        out.push_str(&mantissa);
    } else if point as usize >= mantissa.len() {
        out.push_str(&mantissa);
        out.extend(std::iter::repeat_n('0', point as usize - mantissa.len()));
    } else {
        out.push_str(&mantissa[..point as usize]);
        out.push('.');
        out.push_str(&mantissa[point as usize..]);
    }
    out
}
