use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::interval::Disc;
use crate::round::{add_up, div_up, mul_down, mul_up, sub_down, ETA, U};
use crate::C64;

/// Closed real interval in midpoint-radius form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealInterval {
    mid: f64,
    rad: f64,
}

impl RealInterval {
    pub fn new(mid: f64, rad: f64) -> Result<Self> {
        if !(rad >= 0.0) || !mid.is_finite() || !rad.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(RealInterval { mid, rad })
    }

    pub fn point(x: f64) -> Self {
        RealInterval { mid: x, rad: 0.0 }
    }

    pub fn mid(&self) -> f64 {
        self.mid
    }

    pub fn rad(&self) -> f64 {
        self.rad
    }

    pub fn lower(&self) -> f64 {
        sub_down(self.mid, self.rad)
    }

    pub fn upper(&self) -> f64 {
        add_up(self.mid, self.rad)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    pub fn is_valid(&self) -> bool {
        self.mid.is_finite() && self.rad.is_finite() && self.rad >= 0.0
    }

    pub fn recip(self) -> Result<Self> {
        let m = self.mid.abs();
        let gap = sub_down(m, self.rad);
        if !(gap > 0.0) {
            return Err(Error::DivisionByZero);
        }
        let mid = 1.0 / self.mid;
        let err = add_up(mul_up(U, mid.abs()), ETA);
        let rad = if self.rad == 0.0 { 0.0 } else { div_up(self.rad, mul_down(m, gap)) };
        RealInterval::new(mid, add_up(rad, err))
    }

    pub fn to_disc(self) -> Disc {
        Disc::from_parts(C64::new(self.mid, 0.0), self.rad)
    }
}

impl Add for RealInterval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mid = self.mid + rhs.mid;
        RealInterval { mid, rad: add_up(add_up(self.rad, rhs.rad), mul_up(U, mid.abs())) }
    }
}

impl Sub for RealInterval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for RealInterval {
    type Output = Self;
    fn neg(self) -> Self {
        RealInterval { mid: -self.mid, rad: self.rad }
    }
}

impl Mul for RealInterval {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mid = self.mid * rhs.mid;
        let spread =
            add_up(add_up(mul_up(self.mid.abs(), rhs.rad), mul_up(self.rad, rhs.mid.abs())), mul_up(self.rad, rhs.rad));
        RealInterval { mid, rad: add_up(spread, add_up(mul_up(U, mid.abs()), ETA)) }
    }
}
