//! Verified Taylor coefficients of the scalar gamma function.

mod jet;
mod spouge;

pub use jet::{jet_mul, jet_recip};
pub use spouge::{choose_a, gamma_jet_with, xi_bound, SpougeContext, MAX_A, MIN_A};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::Disc;
use crate::round::sub_down;

/// Encloses `Gamma^(k)(z)/k!` for `k = 0..=order` over the disc `z`.
///
/// Uses the Spouge expansion directly when `Re(z) - rad(z) > -5/2` and the
/// shifted recurrence `Gamma(z) = Gamma(z + m) / (z (z + 1) ... (z + m - 1))`
/// otherwise.
pub fn gamma_jet(z: Disc, order: usize) -> Result<Vec<Disc>> {
    let z = z.checked()?;
    if z.re_lower() > -2.5 {
        let ctx = choose_a(z)?;
        gamma_jet_with(&ctx, z, order)
    } else {
        gamma_jet_reduced(z, order)
    }
}

/// Encloses `Gamma(z)` over the disc `z`.
pub fn gamma(z: Disc) -> Result<Disc> {
    Ok(gamma_jet(z, 0)?[0])
}

/// Shift count used by [`gamma_jet_reduced`]: `-2 - floor(Re(z) - rad(z))`.
pub fn reduction_shift(z: Disc) -> i64 {
    let x = sub_down(z.mid().re, z.rad());
    -2 - libm::floor(x) as i64
}

/// Jet of `Gamma` via `Gamma(z) = Gamma(z + m) / prod_{i<m} (z + i)` with the
/// shift from [`reduction_shift`].
pub fn gamma_jet_reduced(z: Disc, order: usize) -> Result<Vec<Disc>> {
    let z = z.checked()?;
    let m = reduction_shift(z);
    if m <= 0 {
        let ctx = choose_a(z)?;
        return gamma_jet_with(&ctx, z, order);
    }
    if m > 1_000_000 {
        return Err(Error::Precondition("argument too far left of the origin"));
    }
    let mut poly = alloc::vec![Disc::ZERO; order + 1];
    poly[0] = Disc::ONE;
    for i in 0..m {
        let factor = z.add_real(i as f64);
        if factor.mig() == 0.0 {
            return Err(Error::Pole);
        }
        let linear = [factor, Disc::ONE];
        poly = jet_mul(&poly, &linear, order);
    }
    let shifted = z.add_real(m as f64);
    let ctx = choose_a(shifted)?;
    let g = gamma_jet_with(&ctx, shifted, order)?;
    let inv = jet_recip(&poly, order).map_err(|e| match e {
        Error::DivisionByZero => Error::Pole,
        other => other,
    })?;
    let out = jet_mul(&g, &inv, order);
    for d in &out {
        d.checked()?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn gamma_of_small_integers() {
        for (x, fact) in [(1.0, 1.0), (2.0, 1.0), (3.0, 2.0), (5.0, 24.0), (7.0, 720.0)] {
            let g = gamma(Disc::real(x)).unwrap();
            assert!(g.contains(C64::new(fact, 0.0)), "Gamma({x}) = {g:?}");
            assert!(g.rad() <= 1e-9 * fact);
        }
    }

    #[test]
    fn reduction_handles_far_left_arguments() {
        // Gamma(-3.5) = 16 sqrt(pi) / 105
        let g = gamma(Disc::real(-3.5)).unwrap();
        let expect = 16.0 * libm::sqrt(core::f64::consts::PI) / 105.0;
        assert!((g.mid().re - expect).abs() <= g.rad() + 1e-15);
        assert!(g.rad() < 1e-12);
    }

    #[test]
    fn pole_is_reported() {
        let z = Disc::new(C64::new(-3.0, 0.0), 0.01).unwrap();
        assert_eq!(gamma(z), Err(Error::Pole));
    }

    #[test]
    fn shift_rule() {
        assert_eq!(reduction_shift(Disc::real(-2.4)), 1);
        assert_eq!(reduction_shift(Disc::real(-7.2)), 6);
        assert_eq!(reduction_shift(Disc::real(1.0)), -3);
    }
}
