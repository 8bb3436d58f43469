//! Directed bounds built from round-to-nearest arithmetic.
//!
//! Every `*_up` function returns a value no smaller than the exact result of
//! the operation on its (exact) floating-point inputs, and every `*_down`
//! function returns a value no larger. Elementary functions from `libm` are
//! trusted to within two units in the last place.

/// Unit roundoff of binary64.
pub const U: f64 = f64::EPSILON / 2.0;
/// Smallest positive subnormal.
pub const ETA: f64 = f64::from_bits(1);

#[inline]
pub fn up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
pub fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        return a;
    }
    if a == 0.0 {
        return b;
    }
    up(a + b)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        return a;
    }
    if a == 0.0 {
        return b;
    }
    down(a + b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        return a;
    }
    if a == 0.0 {
        return -b;
    }
    up(a - b)
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        return a;
    }
    if a == 0.0 {
        return -b;
    }
    down(a - b)
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    if (a == 0.0 && b.is_finite()) || (b == 0.0 && a.is_finite()) {
        return 0.0;
    }
    let p = a * b;
    if p == 0.0 && a != 0.0 && b != 0.0 {
        return if (a > 0.0) == (b > 0.0) { ETA } else { -0.0 };
    }
    up(p)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    if (a == 0.0 && b.is_finite()) || (b == 0.0 && a.is_finite()) {
        return 0.0;
    }
    let p = a * b;
    if p == 0.0 && a != 0.0 && b != 0.0 {
        return if (a > 0.0) == (b > 0.0) { 0.0 } else { -ETA };
    }
    down(p)
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 && b != 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q == 0.0 && a != 0.0 {
        return if (a > 0.0) == (b > 0.0) { ETA } else { -0.0 };
    }
    up(q)
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 && b != 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q == 0.0 && a != 0.0 {
        return if (a > 0.0) == (b > 0.0) { 0.0 } else { -ETA };
    }
    down(q)
}

#[inline]
pub fn sqrt_up(x: f64) -> f64 {
    up(libm::sqrt(x))
}

#[inline]
pub fn sqrt_down(x: f64) -> f64 {
    down(libm::sqrt(x)).max(0.0)
}

/// Upper bound on `|re + i im|`.
#[inline]
pub fn hypot_up(re: f64, im: f64) -> f64 {
    if im == 0.0 {
        return re.abs();
    }
    if re == 0.0 {
        return im.abs();
    }
    up(up(libm::hypot(re, im)))
}

/// Lower bound on `|re + i im|`.
#[inline]
pub fn hypot_down(re: f64, im: f64) -> f64 {
    if im == 0.0 {
        return re.abs();
    }
    if re == 0.0 {
        return im.abs();
    }
    down(down(libm::hypot(re, im))).max(0.0)
}

#[inline]
pub fn exp_up(x: f64) -> f64 {
    up(up(libm::exp(x)))
}

#[inline]
pub fn exp_down(x: f64) -> f64 {
    down(down(libm::exp(x))).max(0.0)
}

#[inline]
pub fn expm1_up(x: f64) -> f64 {
    up(up(libm::expm1(x)))
}

#[inline]
pub fn ln_up(x: f64) -> f64 {
    up(up(libm::log(x)))
}

#[inline]
pub fn ln_down(x: f64) -> f64 {
    down(down(libm::log(x)))
}

/// Upper bound on `-ln(1 - t)` for `0 <= t < 1`.
#[inline]
pub fn neg_ln1m_up(t: f64) -> f64 {
    up(up(-libm::log1p(-t)))
}

/// `gamma_k = k u / (1 - k u)`, rounded upward.
pub fn gamma_n(k: usize) -> f64 {
    let ku = mul_up(k as f64, U);
    div_up(ku, sub_down(1.0, ku))
}

/// Factor `f` such that `f * fl(s)` bounds the exact sum of `k` nonnegative
/// terms whose float sum was `fl(s)`.
pub fn sum_factor(k: usize) -> f64 {
    add_up(1.0, mul_up(2.0, gamma_n(k + 1)))
}

/// Upper bound on the exact sum of nonnegative terms.
pub fn sum_up(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    let mut k = 0usize;
    for t in terms {
        s += t;
        k += 1;
    }
    if k <= 1 || s == 0.0 {
        return s;
    }
    up(mul_up(s, sum_factor(k)) + (k as f64) * ETA)
}

/// Error-free sum: `a + b = s + e` exactly (barring overflow).
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free product: `a * b = p + e` exactly unless `p` is tiny.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_add_brackets_exact() {
        let (a, b) = (0.1, 0.2);
        assert!(add_down(a, b) < a + b && a + b < add_up(a, b));
    }

    #[test]
    fn underflowing_product_keeps_sign_bounds() {
        let t = 1e-200;
        assert!(mul_up(t, t) > 0.0);
        assert_eq!(mul_down(t, t), 0.0);
        assert!(mul_down(t, -t) < 0.0);
    }

    #[test]
    fn sum_up_dominates_terms() {
        let terms = [1.0, 1e-17, 1e-17, 1e-17];
        assert!(sum_up(terms) > 1.0);
    }

    #[test]
    fn hypot_bounds_bracket() {
        let (lo, hi) = (hypot_down(3.0, 4.0), hypot_up(3.0, 4.0));
        assert!(lo <= 5.0 && 5.0 <= hi);
    }
}
