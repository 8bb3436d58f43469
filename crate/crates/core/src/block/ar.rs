//! Interval products `prod_i <(lambda + s_i) I + M, R>` in `O(m p^2)`.
//!
//! Every factor shares the midpoint structure `(lambda + s) I + M`, so the
//! product midpoint stays a polynomial `sum_l beta_l M^l` in the nilpotent
//! part and the radius obeys a recurrence that needs only row and column
//! maxima of `R` and a row shift for `M R`.

use alloc::vec;
use alloc::vec::Vec;

use crate::block::bound::{superdiagonal_mask, toeplitz_blocks};
use crate::error::{Error, Result};
use crate::interval::{Disc, IntervalMatrix};
use crate::round::{add_up, mul_up, sub_down, sum_factor, ETA};
use crate::{RMat, C64};

/// Absolute floor added to each radius entry per step, far above the
/// underflow error of a product yet negligible against any real radius.
const TINY: f64 = 9.332636185032189e-302; // 2^-1000

/// Magnitude above which a running product is considered to overflow.
pub const OVERFLOW_LIMIT: f64 = 1e300;

/// Which way the argument is shifted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `Gamma(P) = (prod_{i<m} (P + i))^{-1} Gamma(P + m)`.
    Up,
    /// `Gamma(P) = prod_{i=1..=m} (P - i) Gamma(P - m)`.
    Down,
    /// Scalar shift making `Re(lambda) - r + m` land in `[-2, -1)`.
    ScalarUp,
}

/// Shift count for `direction`, where `norm` bounds `||R||_inf` (or
/// `||M + R||_inf` for Jordan blocks, or the scalar radius).
pub fn select_m(lambda: C64, norm: f64, direction: Direction) -> i64 {
    let x = libm::floor(sub_down(lambda.re, norm)) as i64;
    match direction {
        Direction::Up => 1 - x,
        Direction::Down => x - 1,
        Direction::ScalarUp => -2 - x,
    }
}

/// Enclosure `<C, R>` of a structured product; `C = sum_l beta_l M^l`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArProduct {
    /// Enclosures of the polynomial coefficients `beta_0, beta_1, ...`.
    pub beta: Vec<Disc>,
    pub sizes: Vec<usize>,
    /// Radius recurrence result, excluding the radii of `beta`.
    pub radius: RMat,
}

impl ArProduct {
    /// Interval matrix with midpoint `C` and radius `R` plus the radii of
    /// the coefficients on their Toeplitz positions.
    pub fn enclosure(&self) -> IntervalMatrix {
        let center = toeplitz_blocks(&self.beta, &self.sizes);
        center.inflate(&self.radius)
    }
}

/// `prod_{i<m} <(lambda + i) I, R>` (up) or `prod_{i=1..=m} <(lambda - i) I, R>` (down).
pub fn ar_product_spectral(lambda: C64, radius: &RMat, m: usize, direction: Direction) -> Result<ArProduct> {
    ar_product_jordan(lambda, &vec![1; radius.nrows()], radius, m, direction)
}

/// Structured product with nilpotent part `M` built from `sizes`.
pub fn ar_product_jordan(
    lambda: C64,
    sizes: &[usize],
    radius: &RMat,
    m: usize,
    direction: Direction,
) -> Result<ArProduct> {
    let shifts: Vec<i64> = match direction {
        Direction::Up | Direction::ScalarUp => (0..m as i64).collect(),
        Direction::Down => (1..=m as i64).map(|i| -i).collect(),
    };
    ar_product_shifts(lambda, sizes, radius, &shifts)
}

/// Product of `<(lambda + s) I + M, R>` over `shifts`, the first factor
/// rightmost.
pub fn ar_product_shifts(lambda: C64, sizes: &[usize], radius: &RMat, shifts: &[i64]) -> Result<ArProduct> {
    let p = radius.nrows();
    if shifts.is_empty() {
        return Err(Error::Precondition("product needs at least one factor"));
    }
    if sizes.is_empty() || sizes.iter().sum::<usize>() != p || radius.ncols() != p {
        return Err(Error::Dimension("block sizes do not match the radius"));
    }
    let nmax = sizes.iter().copied().max().unwrap_or(1);
    let sup = superdiagonal_mask(sizes);
    let starts: Vec<usize> = sizes
        .iter()
        .scan(0, |at, &s| {
            let here = *at;
            *at += s;
            Some(here)
        })
        .collect();

    // Column maxima of R and, per Jordan block, row maxima of its column slab.
    let col_max = nalgebra::DVector::from_fn(p, |j, _| (0..p).map(|i| radius[(i, j)]).fold(0.0, f64::max));
    let slab_max: Vec<Vec<f64>> = sizes
        .iter()
        .zip(&starts)
        .map(|(&s, &c0)| (0..p).map(|i| (c0..c0 + s).map(|j| radius[(i, j)]).fold(0.0, f64::max)).collect())
        .collect();

    let factor = |s: i64| Disc::point(lambda).add_real(s as f64);
    let mut beta = vec![Disc::ZERO; nmax];
    beta[0] = factor(shifts[0]);
    if nmax > 1 {
        beta[1] = Disc::ONE;
    }
    let mut acc = radius.clone();
    let dot_factor = sum_factor(p);
    let entry_factor = sum_factor(8);
    // A zero radius stays zero: every member equals the midpoint product.
    let exact = radius.iter().all(|&r| r == 0.0);

    for &s in &shifts[1..] {
        let f = factor(s);
        let f_mag = f.mag();
        // Cumulative sums w_t = sum_{l<=t} |beta_l|.
        let mut w = vec![0.0; nmax];
        let mut run = 0.0;
        for (t, b) in beta.iter().enumerate() {
            run = add_up(run, b.mag());
            w[t] = run;
        }
        // Row vector rr * acc, bounded upward.
        // Any summation order is covered by `dot_factor`.
        let shared: Vec<f64> =
            acc.tr_mul(&col_max).iter().map(|&s| add_up(mul_up(s, dot_factor), (p as f64 + 1.0) * ETA)).collect();
        // Each entry is a nearest-rounded sum of five nonnegative terms; the
        // floor `TINY` covers underflow in the two products and `entry_factor`
        // the relative rounding, so the stored value bounds the exact one.
        let mut next = RMat::zeros(p, p);
        if !exact {
            for (blk, (&size, &c0)) in sizes.iter().zip(&starts).enumerate() {
                for (t, &wt) in w.iter().enumerate().take(size) {
                    let j = c0 + t;
                    let sj = shared[j];
                    let slab = &slab_max[blk];
                    for i in 0..p {
                        let shift = if sup[i] { acc[(i + 1, j)] } else { 0.0 };
                        let v = slab[i] * wt + f_mag * acc[(i, j)] + shift + sj;
                        next[(i, j)] = (v + TINY) * entry_factor;
                    }
                }
            }
        }
        acc = next;
        // beta <- f beta + (beta shifted by one).
        let mut nb = vec![Disc::ZERO; nmax];
        for l in 0..nmax {
            let mut v = f * beta[l];
            if l > 0 {
                v = v + beta[l - 1];
            }
            nb[l] = v;
        }
        beta = nb;
        if !(beta[0].mag() <= OVERFLOW_LIMIT) || acc.iter().any(|r| !r.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    Ok(ArProduct { beta, sizes: sizes.to_vec(), radius: acc })
}
