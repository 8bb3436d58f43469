//! Perturbation bounds around `Gamma(lambda I + M)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gamma::gamma_jet;
use crate::interval::{Disc, IntervalMatrix, NormKind};
use crate::round::{add_down, add_up, div_up, exp_up, mul_down, mul_up, sub_down, sub_up, sum_up};
use crate::{CMat, RMat, C64};

/// Upper bound on `cosh(1) - 1`.
fn cosh1_minus_one_up() -> f64 {
    let s = add_up(exp_up(1.0), exp_up(-1.0));
    sub_up(mul_up(0.5, s), 1.0)
}

/// Upward evaluation of
/// `omega(alpha) = (2 alpha + 1) / (alpha^2 (alpha + 1)^2) + (cosh 1 - 1) / (alpha + 2)^2`,
/// which dominates `-gamma'(alpha)` (derivative of the lower incomplete gamma
/// function in its first argument, taken at `x = 1`).
///
/// `omega` decreases on `(0, inf)`, so evaluating it at a lower bound of the
/// true argument stays an upper bound.
pub fn omega(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Precondition("omega needs a positive finite argument"));
    }
    let a1 = add_down(alpha, 1.0);
    let a2 = add_down(alpha, 2.0);
    let num = add_up(mul_up(2.0, alpha), 1.0);
    let den = mul_down(mul_down(alpha, alpha), mul_down(a1, a1));
    let tail = div_up(cosh1_minus_one_up(), mul_down(a2, a2));
    Ok(add_up(div_up(num, den), tail))
}

/// Upper bound on `Gamma'(x)` over `x` in `[lo, hi]`, `lo > -5/2`.
pub fn gamma_prime_upper(lo: f64, hi: f64) -> Result<f64> {
    let mid = 0.5 * lo + 0.5 * hi;
    let rad = f64::max(sub_up(hi, mid), sub_up(mid, lo));
    let jet = gamma_jet(Disc::new(C64::new(mid, 0.0), rad)?, 1)?;
    let d = jet[1];
    Ok(add_up(d.mid().re, d.rad()))
}

/// Upper bounds on `||R||_p` and `||M + R||_p` for `p` in {1, infinity}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockNorms {
    pub r_one: f64,
    pub r_inf: f64,
    pub mr_one: f64,
    pub mr_inf: f64,
}

impl BlockNorms {
    pub fn new(sizes: &[usize], radius: &RMat) -> Self {
        let p = radius.nrows();
        let sup = superdiagonal_mask(sizes);
        let row = |i: usize, with_m: bool| {
            let extra = if with_m && sup[i] { 1.0 } else { 0.0 };
            sum_up((0..p).map(|j| radius[(i, j)]).chain([extra]))
        };
        let col = |j: usize, with_m: bool| {
            let extra = if with_m && j > 0 && sup[j - 1] { 1.0 } else { 0.0 };
            sum_up((0..p).map(|i| radius[(i, j)]).chain([extra]))
        };
        let max = |f: &dyn Fn(usize) -> f64| (0..p).map(f).fold(0.0, f64::max);
        BlockNorms {
            r_one: max(&|j| col(j, false)),
            r_inf: max(&|i| row(i, false)),
            mr_one: max(&|j| col(j, true)),
            mr_inf: max(&|i| row(i, true)),
        }
    }

    pub fn r(&self, p: NormKind) -> f64 {
        match p {
            NormKind::One => self.r_one,
            NormKind::Inf => self.r_inf,
        }
    }

    pub fn mr(&self, p: NormKind) -> f64 {
        match p {
            NormKind::One => self.mr_one,
            NormKind::Inf => self.mr_inf,
        }
    }
}

/// `sup[i]` is true when `M[(i, i + 1)] = 1`.
pub(crate) fn superdiagonal_mask(sizes: &[usize]) -> Vec<bool> {
    let mut mask = Vec::with_capacity(sizes.iter().sum());
    for &s in sizes {
        mask.extend((0..s).map(|t| t + 1 < s));
    }
    mask
}

/// Bounds `delta_1` and `delta_inf` on `||Gamma(lambda I + M + Q) - Gamma(lambda I + M)||_p`
/// for all `|Q| <= R`. A bound is `None` when `Re(lambda) - ||M + R||_p > 0`
/// could not be verified for that `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbationDelta {
    pub delta_1: Option<f64>,
    pub delta_inf: Option<f64>,
}

impl PerturbationDelta {
    /// The smaller of the available bounds.
    pub fn delta(&self) -> Option<f64> {
        match (self.delta_1, self.delta_inf) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// One `delta_p`. `r_norm` bounds `||R||_p` and `shift_norm` bounds
/// `||M + R||_p` (equal to `r_norm` for spectral blocks).
pub fn delta_p(lambda_re: f64, r_norm: f64, shift_norm: f64) -> Result<f64> {
    let lo = sub_down(lambda_re, shift_norm);
    if !(lo > 0.0) {
        return Err(Error::Precondition("Re(lambda) - norm must be positive"));
    }
    if r_norm == 0.0 {
        return Ok(0.0);
    }
    let hi_lo = add_down(lambda_re, shift_norm);
    let hi_hi = add_up(lambda_re, shift_norm);
    let g1 = gamma_prime_upper(hi_lo, hi_hi)?;
    let sum = add_up(add_up(g1, omega(hi_lo)?), omega(lo)?);
    let d = mul_up(r_norm, sum.max(0.0));
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFinite)
    }
}

/// Perturbation bound for a spectral block (`M = 0`).
pub fn delta_spectral(lambda: C64, radius: &RMat) -> PerturbationDelta {
    delta_jordan(lambda, &alloc::vec![1; radius.nrows()], radius)
}

/// Perturbation bound for `lambda I + M` with Jordan block sizes `sizes`.
pub fn delta_jordan(lambda: C64, sizes: &[usize], radius: &RMat) -> PerturbationDelta {
    let norms = BlockNorms::new(sizes, radius);
    let one = delta_p(lambda.re, norms.r_one, norms.mr_one).ok();
    let inf = delta_p(lambda.re, norms.r_inf, norms.mr_inf).ok();
    PerturbationDelta { delta_1: one, delta_inf: inf }
}

/// Enclosure of `Gamma(lambda I + M)`: block diagonal upper triangular
/// Toeplitz matrices whose first rows are `Gamma^(k)(lambda) / k!`.
pub fn gamma_block_center(lambda: C64, sizes: &[usize]) -> Result<IntervalMatrix> {
    let order = sizes.iter().copied().max().unwrap_or(1).saturating_sub(1);
    let jet = gamma_jet(Disc::point(lambda), order)?;
    Ok(toeplitz_blocks(&jet, sizes))
}

/// Block diagonal matrix of upper triangular Toeplitz blocks with first row
/// `coeffs[..size]`. Every copy of a coefficient carries its own radius.
pub(crate) fn toeplitz_blocks(coeffs: &[Disc], sizes: &[usize]) -> IntervalMatrix {
    let p: usize = sizes.iter().sum();
    let mut mid = CMat::zeros(p, p);
    let mut rad = RMat::zeros(p, p);
    let mut at = 0;
    for &s in sizes {
        for i in 0..s {
            for k in 0..s - i {
                if let Some(c) = coeffs.get(k) {
                    mid[(at + i, at + i + k)] = c.mid();
                    rad[(at + i, at + i + k)] = c.rad();
                }
            }
        }
        at += s;
    }
    IntervalMatrix::from_parts(mid, rad)
}

/// Encloses `Gamma(lambda I + M + Q)` for all `|Q| <= R` as the center plus
/// the smaller available perturbation bound on every entry.
pub fn enclose_direct(lambda: C64, sizes: &[usize], radius: &RMat) -> Result<IntervalMatrix> {
    let delta = delta_jordan(lambda, sizes, radius)
        .delta()
        .ok_or(Error::Precondition("perturbation bound needs Re(lambda) - norm > 0"))?;
    let center = gamma_block_center(lambda, sizes)?;
    let p = radius.nrows();
    center.inflate(&RMat::from_element(p, p, delta)).checked()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn omega_at_one() {
        let w = omega(1.0).unwrap();
        let exact = 0.75 + (libm::cosh(1.0) - 1.0) / 9.0;
        assert!(w >= exact && w - exact < 1e-14);
        // -gamma'(1) = 0.7965996...
        assert!(w > 0.796_599_6);
        assert!(omega(10.0).unwrap() < w);
        assert!(omega(0.0).is_err());
    }

    #[test]
    fn zero_radius_gives_zero_delta() {
        let d = delta_spectral(C64::new(3.0, 0.0), &RMat::zeros(2, 2));
        assert_eq!(d.delta(), Some(0.0));
    }

    #[test]
    fn delta_formula_at_three() {
        let r = RMat::from_element(2, 2, 0.05);
        let d = delta_spectral(C64::new(3.0, 0.0), &r).delta_inf.unwrap();
        // Gamma'(3.1) = 2.1130700...
        let expect = 0.1 * (2.113_070_0 + omega(3.1).unwrap() + omega(2.9).unwrap());
        assert!((d - expect).abs() < 1e-6, "{d} vs {expect}");
    }

    #[test]
    fn jordan_norms_include_the_shift() {
        let r = RMat::from_element(2, 2, 0.005);
        let n = BlockNorms::new(&[2], &r);
        assert!((n.mr_inf - 1.01).abs() < 1e-12);
        assert!((n.mr_one - 1.01).abs() < 1e-12);
        let spectral = delta_jordan(C64::new(3.0, 0.0), &[1, 1], &r);
        assert_eq!(spectral, delta_spectral(C64::new(3.0, 0.0), &r));
    }

    #[test]
    fn unverifiable_precondition_is_none() {
        let r = RMat::from_element(2, 2, 0.5);
        let d = delta_spectral(C64::new(0.5, 0.0), &r);
        assert_eq!(d.delta(), None);
    }

    #[test]
    fn toeplitz_centers() {
        let c = gamma_block_center(C64::new(1.0, 0.0), &[1]).unwrap();
        assert!(c.get(0, 0).contains(C64::new(1.0, 0.0)));
        let c = gamma_block_center(C64::new(1.0, 0.0), &[2]).unwrap();
        assert!(c.get(0, 1).contains(C64::new(-EULER, 0.0)));
        assert!(c.get(1, 1).contains(C64::new(1.0, 0.0)));
        assert_eq!(c.mid()[(1, 0)], C64::new(0.0, 0.0));
        let c = gamma_block_center(C64::new(2.0, 0.0), &[2, 1]).unwrap();
        assert!(c.get(0, 1).contains(C64::new(1.0 - EULER, 0.0)));
        assert!(c.get(2, 2).contains(C64::new(1.0, 0.0)));
        assert_eq!(c.mid()[(1, 2)], C64::new(0.0, 0.0));
        assert_eq!(c.get(0, 0), c.get(1, 1));
    }
}
