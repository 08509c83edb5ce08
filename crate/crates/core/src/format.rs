//! Fixed-width decimal formatting for CSV artifacts.

/// Formats `x` as a positional decimal with 17 significant digits.
///
/// `0.44721359549995793`, `-1.0000000000000000`, `123.45678901234568`. The
/// output parses back to the identical `f64`.
pub fn sig17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let mut out = String::with_capacity(digits.len() + 8);
    out.push_str(sign);
    if exp >= 0 {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.extend(std::iter::repeat_n('0', int_len - digits.len()));
            out.push_str(".0");
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&digits);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(sig17(0.5), "0.50000000000000000");
        assert_eq!(sig17(-1.0), "-1.0000000000000000");
        assert_eq!(sig17(0.0), "0.0000000000000000");
        assert_eq!(sig17(1.0 / 5f64.sqrt()), "0.44721359549995793");
        assert_eq!(sig17(1e-3), "0.0010000000000000000");
    }

    proptest! {
        #[test]
        fn parses_back_exactly(x in -1e6f64..1e6) {
            prop_assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
    }
}
