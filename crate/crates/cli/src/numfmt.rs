//! Numbers rounded to 12 significant digits, printed without trailing zeros.

use ncx_core::IntervalSet;

pub const SIG_DIGITS: usize = 12;

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if neg { "-" } else { "" };
    if !(-4..SIG_DIGITS as i32).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        let frac = if tail.is_empty() { String::new() } else { format!(".{tail}") };
        return format!("{sign}{head}{frac}e{exp}");
    }
    if exp < 0 {
        return format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize));
    }
    let int_len = exp as usize + 1;
    if digits.len() <= int_len {
        format!("{sign}{digits}{}", "0".repeat(int_len - digits.len()))
    } else {
        format!("{sign}{}.{}", &digits[..int_len], &digits[int_len..])
    }
}

pub fn fmt_flag(b: bool) -> String {
    if b { "1" } else { "0" }.into()
}

/// `[a,b]`, `(-inf,b]`, `[a,inf)` or `empty`.
pub fn fmt_set(s: &IntervalSet) -> String {
    if s.is_empty() {
        return "empty".into();
    }
    let open = if s.unbounded_below() { '(' } else { '[' };
    let close = if s.unbounded_above() { ')' } else { ']' };
    format!("{open}{},{}{close}", fmt_num(s.lo()), fmt_num(s.hi()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_num(-0.25), "-0.25");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_num(123456.0), "123456");
        assert_eq!(fmt_num(1e-7), "1e-7");
        assert_eq!(fmt_num(-2.5e20), "-2.5e20");
        assert_eq!(fmt_num(0.000123), "0.000123");
        assert_eq!(fmt_num(1.9073e-6), "1.9073e-6");
        assert_eq!(fmt_num(0.99999999999999), "1");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn sets() {
        assert_eq!(fmt_set(&IntervalSet::new(f64::NEG_INFINITY, -0.25)), "(-inf,-0.25]");
        assert_eq!(fmt_set(&IntervalSet::new(-2.0, 2.0)), "[-2,2]");
        assert_eq!(fmt_set(&IntervalSet::EMPTY), "empty");
    }
}
