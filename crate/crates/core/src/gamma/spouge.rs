use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::Disc;
use crate::round::{add_down, div_up, exp_down, ln_down, mul_down, mul_up, sqrt_up, sub_down, up};

/// Smallest Spouge parameter tried by [`choose_a`].
pub const MIN_A: f64 = 3.5;
/// Largest Spouge parameter tried by [`choose_a`].
pub const MAX_A: f64 = 30.5;

/// Spouge parameter `a` together with enclosures of its coefficients
/// `c_0 = 1, c_1, ..., c_{ceil(a)-1}`.
#[derive(Clone, Debug)]
pub struct SpougeContext {
    a: f64,
    coeffs: Vec<Disc>,
}

impl SpougeContext {
    pub fn new(a: f64) -> Result<Self> {
        if !(a >= 3.0) || !a.is_finite() || a > 200.0 {
            return Err(Error::Precondition("Spouge parameter must lie in [3, 200]"));
        }
        let count = libm::ceil(a) as usize - 1;
        let inv_sqrt_2pi = Disc::pi().scale(2.0).sqrt()?.recip()?;
        let mut coeffs = Vec::with_capacity(count + 1);
        coeffs.push(Disc::ONE);
        let mut fact = Disc::ONE;
        let a_disc = Disc::real(a);
        for k in 1..=count {
            if k > 1 {
                fact = fact.scale((k - 1) as f64);
            }
            let inv_fact = fact.recip()?;
            let base = a_disc.add_real(-(k as f64));
            let power = base.powi(k as u32 - 1) * base.sqrt()?;
            let growth = base.exp()?;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let ck = (inv_sqrt_2pi * inv_fact * power * growth).scale(sign);
            coeffs.push(ck.checked()?);
        }
        Ok(SpougeContext { a, coeffs })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn coeffs(&self) -> &[Disc] {
        &self.coeffs
    }

    /// `H^(j)(z)/j!` for `j = 0..=order`.
    pub fn h_jet(&self, z: Disc, order: usize) -> Result<Vec<Disc>> {
        let mut h = vec![Disc::ZERO; order + 1];
        h[0] = self.coeffs[0];
        for (k, ck) in self.coeffs.iter().enumerate().skip(1) {
            let w = z.add_real((k - 1) as f64).recip().map_err(pole)?;
            let mut pw = w;
            for (j, hj) in h.iter_mut().enumerate() {
                let term = *ck * pw;
                *hj = if j % 2 == 0 { *hj + term } else { *hj - term };
                pw = pw * w;
            }
        }
        for d in &h {
            d.checked()?;
        }
        Ok(h)
    }

    /// `P^(j)(z)/j!` for `j = 0..=order`, where `P = K'/K`.
    pub fn p_jet(&self, z: Disc, order: usize) -> Result<Vec<Disc>> {
        let v = z.add_real(self.a - 1.0);
        let w = v.recip().map_err(pole)?;
        let half = Disc::real(self.a - 0.5);
        let mut p = Vec::with_capacity(order + 1);
        p.push(v.ln()? - half * w);
        let mut wj = w;
        for j in 1..=order {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let term = wj.div(Disc::real(j as f64))? + half * wj * w;
            p.push(term.scale(sign));
            wj = wj * w;
        }
        Ok(p)
    }

    /// `K^(j)(z)/j!` for `j = 0..=order`.
    pub fn k_jet(&self, z: Disc, order: usize) -> Result<Vec<Disc>> {
        let v = z.add_real(self.a - 1.0);
        let sqrt_2pi = Disc::pi().scale(2.0).sqrt()?;
        let expo = z.add_real(-0.5) * v.ln()? - v;
        let mut k = Vec::with_capacity(order + 1);
        k.push((sqrt_2pi * expo.exp()?).checked()?);
        if order == 0 {
            return Ok(k);
        }
        let p = self.p_jet(z, order)?;
        for m in 0..order {
            let mut acc = Disc::ZERO;
            for j in 0..=m {
                acc = acc + k[j] * p[m - j];
            }
            k.push(acc.div(Disc::real((m + 1) as f64))?.checked()?);
        }
        Ok(k)
    }

    /// Upper bound on `xi_m(z) / m!`, the truncation error of `H^(m)/m!`.
    pub fn xi_over_factorial(&self, z: Disc, m: usize) -> Result<f64> {
        let x = add_down(z.re_lower(), sub_down(self.a, 1.0));
        if !(x > 0.0) {
            return Err(Error::Precondition("Re(z) - rad(z) - 1 + a must be positive"));
        }
        let pi_lo = core::f64::consts::PI.next_down();
        let e_hi = core::f64::consts::E.next_up();
        let num = sqrt_up(div_up(mul_up(self.a, e_hi), pi_lo));
        let mut den = 1.0;
        for _ in 0..=m {
            den = mul_down(den, x);
        }
        let two_pi_lo = mul_down(2.0, pi_lo);
        let expo = self.a + 0.5;
        let scale = if expo == libm::floor(expo) && expo <= 400.0 {
            let mut s = 1.0;
            for _ in 0..expo as u32 {
                s = mul_down(s, two_pi_lo);
            }
            s
        } else {
            exp_down(mul_down(expo, ln_down(two_pi_lo)))
        };
        let bound = div_up(num, mul_down(den, scale));
        if !bound.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(bound)
    }
}

fn pole(e: Error) -> Error {
    match e {
        Error::DivisionByZero => Error::Pole,
        other => other,
    }
}

/// Upper bound on `xi_m(z)` for the Spouge parameter `a`.
pub fn xi_bound(m: usize, z: Disc, a: f64) -> Result<f64> {
    let ctx = SpougeContext::new(a)?;
    let mut fact = 1.0;
    for i in 2..=m {
        fact = mul_up(fact, i as f64);
    }
    Ok(up(fact * ctx.xi_over_factorial(z, m)?))
}

/// Encloses `Gamma^(k)(z)/k!` for `k = 0..=order` with a fixed Spouge
/// parameter.
pub fn gamma_jet_with(ctx: &SpougeContext, z: Disc, order: usize) -> Result<Vec<Disc>> {
    let z = z.checked()?;
    let h = ctx.h_jet(z, order)?;
    let k = ctx.k_jet(z, order)?;
    let mut xi = Vec::with_capacity(order + 1);
    for m in 0..=order {
        xi.push(ctx.xi_over_factorial(z, m)?);
    }
    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut acc = Disc::ZERO;
        for j in 0..=m {
            acc = acc + k[j] * h[m - j].inflate(xi[m - j]);
        }
        out.push(acc.checked()?);
    }
    Ok(out)
}

/// Picks the Spouge parameter for `z`: starting from `a = 7/2`, increase `a`
/// by one until the rounding radius of `H(z)` exceeds the truncation bound.
/// If that never happens up to [`MAX_A`], the parameter with the smallest
/// combined error is returned.
pub fn choose_a(z: Disc) -> Result<SpougeContext> {
    let z = z.checked()?;
    if !(z.re_lower() > -2.5) {
        return Err(Error::Precondition("Re(z) - rad(z) must exceed -5/2"));
    }
    let mut a = MIN_A;
    let mut best: Option<(f64, SpougeContext)> = None;
    while a <= MAX_A {
        let ctx = SpougeContext::new(a)?;
        let h0 = ctx.h_jet(z, 0)?[0];
        let xi0 = ctx.xi_over_factorial(z, 0)?;
        if h0.rad() > xi0 {
            return Ok(ctx);
        }
        let total = h0.rad() + xi0;
        if best.as_ref().is_none_or(|(t, _)| total < *t) {
            best = Some((total, ctx));
        }
        a += 1.0;
    }
    best.map(|(_, ctx)| ctx).ok_or(Error::Precondition("no admissible Spouge parameter"))
}
