//! Enclosures of `Gamma` over a single diagonal block `lambda I + M + Q`,
//! `|Q| <= R`.

mod ar;
mod bound;

pub use ar::{
    ar_product_jordan, ar_product_shifts, ar_product_spectral, select_m, ArProduct, Direction, OVERFLOW_LIMIT,
};
pub use bound::{
    delta_jordan, delta_p, delta_spectral, enclose_direct, gamma_block_center, gamma_prime_upper, omega, BlockNorms,
    PerturbationDelta,
};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::interval::{Disc, IntervalMatrix};
use crate::linalg::{Block, VerifiedSolver};
use crate::round::{add_up, sub_down};
use crate::{RMat, C64};

/// `Re(lambda) - ||.||_inf` at or above which the downward reduction is used.
pub const DOWN_THRESHOLD: f64 = 3.0;

/// How a block enclosure was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Scalar,
    Direct,
    Up(usize),
    Down(usize),
}

/// Encloses `Gamma(P)` for every `P` in the block.
pub fn enclose_block_gamma(block: &Block) -> Result<IntervalMatrix> {
    enclose_block_parts(block.lambda, &block.sizes, &block.radius).map(|(g, _)| g)
}

/// [`enclose_block_gamma`] on raw parts, also reporting the route taken.
pub fn enclose_block_parts(lambda: C64, sizes: &[usize], radius: &RMat) -> Result<(IntervalMatrix, Route)> {
    let p = radius.nrows();
    if radius.ncols() != p || sizes.iter().sum::<usize>() != p || p == 0 {
        return Err(Error::Dimension("block sizes do not match the radius"));
    }
    if p == 1 {
        let g = gamma(Disc::new(lambda, radius[(0, 0)])?)?;
        let mut out = IntervalMatrix::zeros(1, 1);
        out.set(0, 0, g);
        return Ok((out, Route::Scalar));
    }
    let norms = BlockNorms::new(sizes, radius);
    let verified = |n: f64| sub_down(lambda.re, n) > 0.0;
    let shift_inf = norms.mr_inf;
    if !verified(norms.mr_one) && !verified(norms.mr_inf) {
        let m = select_m(lambda, shift_inf, Direction::Up);
        let m = usize::try_from(m).map_err(|_| Error::Precondition("invalid shift count"))?;
        return Ok((enclose_up(lambda, sizes, radius, m)?, Route::Up(m)));
    }
    if sub_down(lambda.re, shift_inf) >= DOWN_THRESHOLD {
        let m = select_m(lambda, shift_inf, Direction::Down);
        if m >= 1 {
            let m = m as usize;
            return Ok((enclose_down(lambda, sizes, radius, m)?, Route::Down(m)));
        }
    }
    Ok((enclose_direct(lambda, sizes, radius)?, Route::Direct))
}

/// `lambda + s` rounded to nearest together with a radius matrix whose
/// diagonal also absorbs the rounding error of the shift.
fn shifted(lambda: C64, s: f64, radius: &RMat) -> (C64, RMat) {
    let exact = Disc::point(lambda).add_real(s);
    let mut r = radius.clone();
    for i in 0..r.nrows() {
        r[(i, i)] = add_up(r[(i, i)], exact.rad());
    }
    (exact.mid(), r)
}

/// Splits `0..m` into consecutive stages whose scalar products stay below
/// [`OVERFLOW_LIMIT`].
fn stages(lambda: C64, m: usize) -> Vec<Vec<i64>> {
    let limit = libm::log2(OVERFLOW_LIMIT) - 8.0;
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut current = Vec::new();
    let mut size = 0.0;
    for i in 0..m as i64 {
        let z = lambda + i as f64;
        let bits = libm::log2(libm::hypot(z.re, z.im) + 1.0) + 1.0;
        if !current.is_empty() && size + bits > limit {
            out.push(core::mem::take(&mut current));
            size = 0.0;
        }
        size += bits;
        current.push(i);
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

/// `Gamma(P) = (prod_{i<m} (P + i I))^{-1} Gamma(P + m I)`.
fn enclose_up(lambda: C64, sizes: &[usize], radius: &RMat, m: usize) -> Result<IntervalMatrix> {
    let (top, top_radius) = shifted(lambda, m as f64, radius);
    let mut g = enclose_direct(top, sizes, &top_radius)?;
    for shifts in stages(lambda, m) {
        let product = ar_product_shifts(lambda, sizes, radius, &shifts)?.enclosure();
        let solver = VerifiedSolver::new(&product)
            .map_err(|_| Error::Verification("shifted block product not verifiably nonsingular"))?;
        g = solver.solve(&g)?;
    }
    g.checked()
}

/// `Gamma(P) = prod_{i=1..=m} (P - i I) Gamma(P - m I)`.
fn enclose_down(lambda: C64, sizes: &[usize], radius: &RMat, m: usize) -> Result<IntervalMatrix> {
    let (bottom, bottom_radius) = shifted(lambda, -(m as f64), radius);
    let g = enclose_direct(bottom, sizes, &bottom_radius)?;
    let product = ar_product_jordan(lambda, sizes, radius, m, Direction::Down)?.enclosure();
    product.mul(&g)?.checked()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER: f64 = 0.577_215_664_901_532_9;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn scalar_block() {
        let (g, route) = enclose_block_parts(c(5.0), &[1], &RMat::zeros(1, 1)).unwrap();
        assert_eq!(route, Route::Scalar);
        assert!(g.get(0, 0).contains(c(24.0)));
    }

    #[test]
    fn jordan_block_at_one() {
        let (g, route) = enclose_block_parts(c(1.0), &[2], &RMat::zeros(2, 2)).unwrap();
        assert_eq!(route, Route::Up(2));
        assert!(g.get(0, 0).contains(c(1.0)));
        assert!(g.get(0, 1).contains(c(-EULER)));
        assert!(g.get(1, 0).contains(c(0.0)));
        assert!(g.max_rad() < 1e-10);
    }

    #[test]
    fn far_left_spectral_block_uses_up() {
        let r = RMat::from_element(2, 2, 0.01);
        let (g, route) = enclose_block_parts(c(-3.2), &[1, 1], &r).unwrap();
        assert_eq!(route, Route::Up(5));
        // Q = 0 member: Gamma(-3.2) I.
        let g0 = gamma(Disc::real(-3.2)).unwrap().mid();
        assert!(g.get(0, 0).contains(g0) && g.get(1, 1).contains(g0));
        assert!(g.get(0, 1).contains(c(0.0)));
    }

    #[test]
    fn far_right_block_uses_down() {
        let r = RMat::from_element(3, 3, 1e-10);
        let (g, route) = enclose_block_parts(c(10.6), &[2, 1], &r).unwrap();
        assert_eq!(route, Route::Down(8));
        let direct = enclose_direct(c(10.6), &[2, 1], &r).unwrap();
        assert!(g.intersects(&direct));
        assert!(g.max_rad() < direct.max_rad());
    }

    #[test]
    fn direct_when_moderate() {
        let r = RMat::from_element(2, 2, 1e-8);
        let (_, route) = enclose_block_parts(c(2.5), &[1, 1], &r).unwrap();
        assert_eq!(route, Route::Direct);
    }

    #[test]
    fn pole_inside_shifted_product_fails() {
        let r = RMat::from_element(2, 2, 0.3);
        assert!(enclose_block_parts(c(-2.0), &[1, 1], &r).is_err());
    }

    #[test]
    fn staging_splits_large_products() {
        let s = stages(c(-150.5), 152);
        assert!(s.len() >= 2);
        assert_eq!(s.iter().map(Vec::len).sum::<usize>(), 152);
    }
}
