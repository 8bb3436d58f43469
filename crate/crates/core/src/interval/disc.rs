use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::round::{
    add_up, div_up, exp_up, expm1_up, hypot_down, hypot_up, mul_down, mul_up, neg_ln1m_up, sub_down, two_prod, two_sum,
    up, ETA, U,
};
use crate::C64;

/// Closed complex disc `{z : |z - mid| <= rad}`.
///
/// A disc whose midpoint or radius is not finite is *invalid*; arithmetic
/// propagates invalidity and the fallible operations report it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disc {
    mid: C64,
    rad: f64,
}

impl Disc {
    pub const ZERO: Disc = Disc { mid: C64::new(0.0, 0.0), rad: 0.0 };
    pub const ONE: Disc = Disc { mid: C64::new(1.0, 0.0), rad: 0.0 };

    pub fn new(mid: C64, rad: f64) -> Result<Disc> {
        let d = Disc { mid, rad };
        if !(rad >= 0.0) {
            return Err(Error::Precondition("disc radius must be nonnegative"));
        }
        d.checked()
    }

    /// Builds a disc without validation. Invalid input yields an invalid disc.
    pub fn from_parts(mid: C64, rad: f64) -> Disc {
        Disc { mid, rad }
    }

    pub fn point(z: C64) -> Disc {
        Disc { mid: z, rad: 0.0 }
    }

    pub fn real(x: f64) -> Disc {
        Disc::point(C64::new(x, 0.0))
    }

    /// Disc around `x` covering one unit in the last place on either side.
    pub fn real_ulp(x: f64) -> Disc {
        Disc { mid: C64::new(x, 0.0), rad: (x.abs().next_up() - x.abs()) }
    }

    pub fn mid(&self) -> C64 {
        self.mid
    }

    pub fn rad(&self) -> f64 {
        self.rad
    }

    pub fn is_valid(&self) -> bool {
        self.mid.re.is_finite() && self.mid.im.is_finite() && self.rad.is_finite() && self.rad >= 0.0
    }

    pub fn checked(self) -> Result<Disc> {
        if self.is_valid() {
            Ok(self)
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Upper bound on `|z|` over the disc.
    pub fn mag(&self) -> f64 {
        add_up(hypot_up(self.mid.re, self.mid.im), self.rad)
    }

    /// Lower bound on `|z|` over the disc (zero if the disc may contain 0).
    pub fn mig(&self) -> f64 {
        sub_down(hypot_down(self.mid.re, self.mid.im), self.rad).max(0.0)
    }

    /// Lower bound on the real parts of the disc.
    pub fn re_lower(&self) -> f64 {
        sub_down(self.mid.re, self.rad)
    }

    /// Upper bound on the real parts of the disc.
    pub fn re_upper(&self) -> f64 {
        add_up(self.mid.re, self.rad)
    }

    /// Upper bound on `|z - mid|` for a float point `z`.
    fn dist_up(&self, z: C64) -> f64 {
        let widen = |d: f64| if d == 0.0 { 0.0 } else { up(d.abs() * (1.0 + 2.0 * U)) };
        hypot_up(widen(z.re - self.mid.re), widen(z.im - self.mid.im))
    }

    /// Lower bound on `|z - mid|` for a float point `z`.
    fn dist_down(&self, z: C64) -> f64 {
        let dr = ((z.re - self.mid.re).abs() * (1.0 - 2.0 * U)).next_down().max(0.0);
        let di = ((z.im - self.mid.im).abs() * (1.0 - 2.0 * U)).next_down().max(0.0);
        hypot_down(dr, di)
    }

    /// True if `z` certainly lies in the disc.
    pub fn contains(&self, z: C64) -> bool {
        self.is_valid() && self.dist_up(z) <= self.rad
    }

    /// True if `other` is certainly a subset of `self`.
    pub fn contains_disc(&self, other: &Disc) -> bool {
        self.is_valid() && other.is_valid() && add_up(self.dist_up(other.mid), other.rad) <= self.rad
    }

    /// False only if the two discs are certainly disjoint.
    pub fn intersects(&self, other: &Disc) -> bool {
        self.dist_down(other.mid) <= add_up(self.rad, other.rad)
    }

    /// Enlarges the radius by `extra` (rounded upward).
    pub fn inflate(self, extra: f64) -> Disc {
        Disc { mid: self.mid, rad: add_up(self.rad, extra) }
    }

    pub fn add_real(self, x: f64) -> Disc {
        self + Disc::real(x)
    }

    pub fn scale(self, x: f64) -> Disc {
        self * Disc::real(x)
    }

    pub fn powi(self, n: u32) -> Disc {
        let mut acc = Disc::ONE;
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// Enclosure of `1/z` over the disc.
    pub fn recip(self) -> Result<Disc> {
        let c = self.checked()?.mid;
        let m = hypot_down(c.re, c.im);
        let gap = sub_down(m, self.rad);
        if !(gap > 0.0) {
            return Err(Error::DivisionByZero);
        }
        let (mid, err) = if c.im == 0.0 {
            let q = 1.0 / c.re;
            (C64::new(q, 0.0), add_up(mul_up(U, q.abs()), ETA))
        } else {
            let q = scaled_recip(c);
            (q, add_up(mul_up(8.0 * U, hypot_up(q.re, q.im)), 2.0 * ETA))
        };
        let rad = if self.rad == 0.0 { 0.0 } else { div_up(self.rad, mul_down(m, gap)) };
        Disc { mid, rad: add_up(rad, err) }.checked()
    }

    #[allow(clippy::should_implement_trait)] // fallible, unlike `Div`
    pub fn div(self, rhs: Disc) -> Result<Disc> {
        (self * rhs.recip()?).checked()
    }

    /// Enclosure of `exp(z)` over the disc.
    pub fn exp(self) -> Result<Disc> {
        let c = self.checked()?.mid;
        let e = libm::exp(c.re);
        let mid = C64::new(e * libm::cos(c.im), e * libm::sin(c.im));
        let e_up = exp_up(c.re);
        let rel = if c.im == 0.0 { 2.0 * U } else { 8.0 * U };
        let err = add_up(mul_up(rel, e_up), 2.0 * ETA);
        let rad = if self.rad == 0.0 { 0.0 } else { mul_up(e_up, expm1_up(self.rad)) };
        Disc { mid, rad: add_up(rad, err) }.checked()
    }

    /// Enclosure of the principal logarithm over the disc.
    pub fn ln(self) -> Result<Disc> {
        let c = self.checked()?.mid;
        let r = self.rad;
        let meets_cut = if c.re > 0.0 { hypot_down(c.re, c.im) <= r } else { c.im.abs() <= r };
        if meets_cut {
            return Err(Error::BranchCut);
        }
        let abs = libm::hypot(c.re, c.im);
        let mid = C64::new(libm::log(abs), libm::atan2(c.im, c.re));
        let err = mul_up(4.0 * U, add_up(1.0, hypot_up(mid.re, mid.im)));
        let rad = if r == 0.0 {
            0.0
        } else {
            let t = div_up(r, hypot_down(c.re, c.im));
            if !(t < 1.0) {
                return Err(Error::BranchCut);
            }
            neg_ln1m_up(t)
        };
        Disc { mid, rad: add_up(rad, err) }.checked()
    }

    /// Enclosure of the principal square root.
    pub fn sqrt(self) -> Result<Disc> {
        let c = self.checked()?.mid;
        if self.rad == 0.0 && c.im == 0.0 && c.re >= 0.0 {
            let s = libm::sqrt(c.re);
            return Disc { mid: C64::new(s, 0.0), rad: mul_up(U, s) }.checked();
        }
        self.ln()?.scale(0.5).exp()
    }

    /// Enclosure of `base^expo = exp(expo * log(base))` (principal branch).
    pub fn pow(self, expo: Disc) -> Result<Disc> {
        (expo * self.ln()?).exp()
    }

    pub fn pi() -> Disc {
        Disc::real_ulp(core::f64::consts::PI)
    }

    pub fn e() -> Disc {
        Disc::real_ulp(core::f64::consts::E)
    }
}

/// `1/c` evaluated on a power-of-two rescaling of `c`.
fn scaled_recip(c: C64) -> C64 {
    let s = c.re.abs().max(c.im.abs());
    let (_, e) = libm::frexp(s);
    let down = libm::ldexp(1.0, -e);
    let (re, im) = (c.re * down, c.im * down);
    let d = re * re + im * im;
    let q = C64::new(re / d, -im / d);
    C64::new(q.re * down, q.im * down)
}

impl Add for Disc {
    type Output = Disc;
    fn add(self, rhs: Disc) -> Disc {
        let (re, ere) = two_sum(self.mid.re, rhs.mid.re);
        let (im, eim) = two_sum(self.mid.im, rhs.mid.im);
        let err = hypot_up(ere, eim);
        Disc { mid: C64::new(re, im), rad: add_up(add_up(self.rad, rhs.rad), err) }
    }
}

impl Sub for Disc {
    type Output = Disc;
    fn sub(self, rhs: Disc) -> Disc {
        self + (-rhs)
    }
}

impl Neg for Disc {
    type Output = Disc;
    fn neg(self) -> Disc {
        Disc { mid: -self.mid, rad: self.rad }
    }
}

impl Mul for Disc {
    type Output = Disc;
    fn mul(self, rhs: Disc) -> Disc {
        let (a, b) = (self.mid, rhs.mid);
        let (mid, err) = if a.im == 0.0 && b.im == 0.0 {
            let (p, e) = two_prod(a.re, b.re);
            (C64::new(p, 0.0), add_up(e.abs(), ETA))
        } else {
            let (p1, e1) = two_prod(a.re, b.re);
            let (p2, e2) = two_prod(a.im, b.im);
            let (p3, e3) = two_prod(a.re, b.im);
            let (p4, e4) = two_prod(a.im, b.re);
            let (re, e5) = two_sum(p1, -p2);
            let (im, e6) = two_sum(p3, p4);
            let err_re = add_up(add_up(e1.abs(), e2.abs()), e5.abs());
            let err_im = add_up(add_up(e3.abs(), e4.abs()), e6.abs());
            (C64::new(re, im), add_up(hypot_up(err_re, err_im), 4.0 * ETA))
        };
        let mut rad = err;
        if self.rad != 0.0 || rhs.rad != 0.0 {
            let (ma, mb) = (hypot_up(a.re, a.im), hypot_up(b.re, b.im));
            let spread = add_up(add_up(mul_up(ma, rhs.rad), mul_up(self.rad, mb)), mul_up(self.rad, rhs.rad));
            rad = add_up(rad, spread);
        }
        Disc { mid, rad }
    }
}
