//! Decimal rendering with a fixed number of significant digits, in the
//! style of C's `%.*g`.

/// Significant digits in machine formats; enough for any `f64` to round-trip.
pub const MACHINE_DIGITS: usize = 17;
/// Significant digits in human-readable output.
pub const HUMAN_DIGITS: usize = 10;

/// `x` with exactly `digits` significant digits. Fixed notation is used
/// for decimal exponents in `[-5, digits)`, scientific otherwise.
pub fn significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("`e` formatting always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{mantissa}e{exp}")
    }
}

/// 17 significant digits.
pub fn machine(x: f64) -> String {
    significant(x, MACHINE_DIGITS)
}

/// 10 significant digits with trailing zeros trimmed (one decimal kept).
pub fn human(x: f64) -> String {
    let s = significant(x, HUMAN_DIGITS);
    let (body, exp) = match s.split_once('e') {
        Some((b, e)) => (b.to_string(), Some(e.to_string())),
        None => (s, None),
    };
    let body = if body.contains('.') {
        let trimmed = body.trim_end_matches('0');
        if trimmed.ends_with('.') {
            format!("{trimmed}0")
        } else {
            trimmed.to_string()
        }
    } else {
        body
    };
    match exp {
        Some(e) => format!("{body}e{e}"),
        None => body,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_digits() {
        assert_eq!(machine(0.5), "0.50000000000000000");
        assert_eq!(machine(1.0), "1.0000000000000000");
        assert_eq!(machine(1e-7), "9.9999999999999995e-8");
        assert_eq!(machine(9.5367431640625e-7), "9.5367431640625000e-7");
        assert_eq!(machine(0.000244140625), "0.00024414062500000000");
        assert_eq!(machine(-0.0), "-0.0000000000000000");
        assert_eq!(machine(123456.0), "123456.00000000000");
        assert_eq!(machine(1e20), "1.0000000000000000e20");
    }

    #[test]
    fn human_digits() {
        assert_eq!(human(6.0), "6.0");
        assert_eq!(human(std::f64::consts::FRAC_2_SQRT_PI), "1.128379167");
        assert_eq!(human(3.2e-12), "3.2e-12");
        assert_eq!(human(24.0), "24.0");
        assert_eq!(human(std::f64::consts::FRAC_1_SQRT_2), "0.7071067812");
    }

    #[test]
    fn machine_round_trips() {
        let mut x = 0.1f64;
        for _ in 0..2000 {
            for v in [x, -x, 1.0 / x] {
                let s = machine(v);
                assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
            }
            x = x * 1.37 + 1e-3;
        }
        for v in [f64::MIN_POSITIVE, f64::MAX, 5e-324, 0.0] {
            assert_eq!(machine(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
