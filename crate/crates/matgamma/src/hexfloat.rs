//! Exact text encoding of `f64` as C99 hexadecimal floating literals.

/// Formats `x` as `[-]0x1.<hex>p<exp>` (or `0x0.<hex>p-1022` when subnormal).
/// Non-finite values become `inf`, `-inf` and `nan`.
pub fn format(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, e) = if exp == 0 { (0, -1022) } else { (1, exp - 1023) };
    let digits = format!("{frac:013x}");
    let digits = digits.trim_end_matches('0');
    let dot = if digits.is_empty() { String::new() } else { format!(".{digits}") };
    format!("{sign}0x{lead}{dot}p{e:+}")
}

/// Parses the output of [`format`] and, more generally, any hexadecimal
/// literal whose significand fits in 53 bits after normalisation.
pub fn parse(s: &str) -> Option<f64> {
    let s = s.trim();
    match s {
        "nan" => return Some(f64::NAN),
        "inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let body = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X"))?;
    let (mant, exp) = body.split_once(['p', 'P'])?;
    let exp: i32 = exp.parse().ok()?;
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let mut m: u64 = 0;
    let mut shift: i32 = 0;
    for (i, ch) in int_part.chars().chain(frac_part.chars()).enumerate() {
        let d = ch.to_digit(16)? as u64;
        if m >> 56 != 0 {
            // Only zero digits may follow once 60 bits are in use.
            if d != 0 {
                return None;
            }
            if i < int_part.len() {
                shift += 4;
            }
            continue;
        }
        m = (m << 4) | d;
        if i >= int_part.len() {
            shift -= 4;
        }
    }
    if m == 0 {
        return Some(if neg { -0.0 } else { 0.0 });
    }
    // m * 2^(exp + shift); scale in two steps to reach subnormals exactly.
    let bits = 64 - m.leading_zeros() as i32;
    if bits > 53 {
        let drop = bits - 53;
        if m & ((1u64 << drop) - 1) != 0 {
            return None;
        }
        m >>= drop;
        shift += drop;
    }
    let total = exp + shift;
    let v = (m as f64) * 2f64.powi(total / 2) * 2f64.powi(total - total / 2);
    let v = if neg { -v } else { v };
    (v.is_finite() && (v != 0.0)).then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let samples = [
            0.0,
            -0.0,
            1.0,
            -2.5,
            0.1,
            f64::MAX,
            f64::MIN_POSITIVE,
            f64::from_bits(1),
            f64::from_bits(0x000f_ffff_ffff_ffff),
            core::f64::consts::PI,
            1e-300,
        ];
        for x in samples {
            let s = format(x);
            let y = parse(&s).unwrap_or_else(|| panic!("parse {s}"));
            assert_eq!(x.to_bits(), y.to_bits(), "{x} -> {s}");
        }
    }

    #[test]
    fn known_spellings() {
        assert_eq!(format(1.0), "0x1p+0");
        assert_eq!(format(0.5), "0x1p-1");
        assert_eq!(format(-3.0), "-0x1.8p+1");
        assert_eq!(parse("0x1.8p1"), Some(3.0));
        assert_eq!(parse("0x10p-4"), Some(1.0));
        assert_eq!(parse("1.0"), None);
    }
}
