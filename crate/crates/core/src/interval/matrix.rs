use crate::error::{Error, Result};
use crate::interval::dense::{abs_up, cmul_split, split};
use crate::interval::Disc;
use crate::round::{add_up, gamma_n, hypot_down, hypot_up, mul_up, sum_factor, sum_up, ETA, U};
use crate::{CMat, RMat, C64};

/// Matrix of discs stored as a complex midpoint matrix and a nonnegative
/// radius matrix. Entry `(i, j)` encloses every `z` with
/// `|z - mid[(i, j)]| <= rad[(i, j)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    mid: CMat,
    rad: RMat,
}

impl IntervalMatrix {
    pub fn new(mid: CMat, rad: RMat) -> Result<Self> {
        if mid.shape() != rad.shape() {
            return Err(Error::Dimension("midpoint and radius shapes differ"));
        }
        if rad.iter().any(|r| !(*r >= 0.0)) {
            return Err(Error::Precondition("radii must be nonnegative"));
        }
        let m = IntervalMatrix { mid, rad };
        if !m.is_valid() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub(crate) fn from_parts(mid: CMat, rad: RMat) -> Self {
        debug_assert_eq!(mid.shape(), rad.shape());
        IntervalMatrix { mid, rad }
    }

    pub fn point(mid: CMat) -> Self {
        let rad = RMat::zeros(mid.nrows(), mid.ncols());
        IntervalMatrix { mid, rad }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntervalMatrix { mid: CMat::zeros(rows, cols), rad: RMat::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        IntervalMatrix::point(CMat::identity(n, n))
    }

    pub fn mid(&self) -> &CMat {
        &self.mid
    }

    pub fn rad(&self) -> &RMat {
        &self.rad
    }

    pub fn into_parts(self) -> (CMat, RMat) {
        (self.mid, self.rad)
    }

    pub fn nrows(&self) -> usize {
        self.mid.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mid.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.mid.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> Disc {
        Disc::from_parts(self.mid[(i, j)], self.rad[(i, j)])
    }

    pub fn set(&mut self, i: usize, j: usize, d: Disc) {
        self.mid[(i, j)] = d.mid();
        self.rad[(i, j)] = d.rad();
    }

    pub fn is_valid(&self) -> bool {
        self.mid.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            && self.rad.iter().all(|r| r.is_finite() && *r >= 0.0)
    }

    pub fn checked(self) -> Result<Self> {
        if self.is_valid() {
            Ok(self)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn is_point(&self) -> bool {
        self.rad.iter().all(|r| *r == 0.0)
    }

    /// Plain (non-conjugating) transpose.
    pub fn transpose(&self) -> Self {
        IntervalMatrix { mid: self.mid.transpose(), rad: self.rad.transpose() }
    }

    pub fn submatrix(&self, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        let (nr, nc) = (rows.len(), cols.len());
        IntervalMatrix {
            mid: self.mid.view((r0, c0), (nr, nc)).into_owned(),
            rad: self.rad.view((r0, c0), (nr, nc)).into_owned(),
        }
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &IntervalMatrix) {
        let (nr, nc) = block.shape();
        self.mid.view_mut((r0, c0), (nr, nc)).copy_from(&block.mid);
        self.rad.view_mut((r0, c0), (nr, nc)).copy_from(&block.rad);
    }

    /// Adds `extra` to every radius.
    pub fn inflate(&self, extra: &RMat) -> Self {
        IntervalMatrix { mid: self.mid.clone(), rad: self.rad.zip_map(extra, add_up) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension("elementwise operands differ in shape"));
        }
        let mid = self.mid.zip_map(&other.mid, |a, b| a + b * sign);
        let rad = RMat::from_fn(self.nrows(), self.ncols(), |i, j| {
            let s = mid[(i, j)];
            add_up(add_up(self.rad[(i, j)], other.rad[(i, j)]), mul_up(2.0 * U, hypot_up(s.re, s.im)))
        });
        IntervalMatrix { mid, rad }.checked()
    }

    /// Multiplies every entry by the disc `d`.
    pub fn scale(&self, d: Disc) -> Self {
        let mut out = self.clone();
        for j in 0..self.ncols() {
            for i in 0..self.nrows() {
                out.set(i, j, self.get(i, j) * d);
            }
        }
        out
    }

    /// Enclosure of the set of products of members of `self` and `other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.prepare().mul(other)
    }

    /// Caches the split and magnitude of `self` for repeated left products.
    pub fn prepare(&self) -> PreparedLeft {
        let (re, im) = split(&self.mid);
        PreparedLeft {
            re,
            im,
            abs: abs_up(&self.mid),
            rad: if self.is_point() { None } else { Some(self.rad.clone()) },
        }
    }

    /// Upper bound on the infinity norm of every member.
    pub fn norm_inf_up(&self) -> f64 {
        (0..self.nrows())
            .map(|i| {
                sum_up((0..self.ncols()).map(|j| {
                    let z = self.mid[(i, j)];
                    add_up(hypot_up(z.re, z.im), self.rad[(i, j)])
                }))
            })
            .fold(0.0, f64::max)
    }

    /// Upper bound on the one norm of every member.
    pub fn norm_one_up(&self) -> f64 {
        self.transpose().norm_inf_up()
    }

    /// Upper bound on the `p`-norm for `p` in {1, infinity}.
    pub fn norm_up(&self, p: NormKind) -> f64 {
        match p {
            NormKind::One => self.norm_one_up(),
            NormKind::Inf => self.norm_inf_up(),
        }
    }

    /// Lower bound on the infinity norm of every member.
    pub fn norm_inf_down(&self) -> f64 {
        (0..self.nrows())
            .map(|i| {
                let row: f64 = (0..self.ncols())
                    .map(|j| {
                        let z = self.mid[(i, j)];
                        (hypot_down(z.re, z.im) - self.rad[(i, j)]).max(0.0)
                    })
                    .sum();
                (row * (1.0 - mul_up(2.0, gamma_n(self.ncols() + 1)))).next_down().max(0.0)
            })
            .fold(0.0, f64::max)
    }

    /// Upper bound on `max |rad|` row sums, i.e. the infinity norm of `rad`.
    pub fn rad_norm_inf_up(&self) -> f64 {
        (0..self.nrows()).map(|i| sum_up(self.rad.row(i).iter().copied())).fold(0.0, f64::max)
    }

    /// True if every entry of `z` certainly lies in the matching disc.
    pub fn contains_point(&self, z: &CMat) -> bool {
        z.shape() == self.shape()
            && (0..self.nrows()).all(|i| (0..self.ncols()).all(|j| self.get(i, j).contains(z[(i, j)])))
    }

    /// True if every disc of `other` is certainly inside the matching disc.
    pub fn contains(&self, other: &Self) -> bool {
        other.shape() == self.shape()
            && (0..self.nrows()).all(|i| (0..self.ncols()).all(|j| self.get(i, j).contains_disc(&other.get(i, j))))
    }

    /// False only if some pair of matching entries is certainly disjoint.
    pub fn intersects(&self, other: &Self) -> bool {
        other.shape() == self.shape()
            && (0..self.nrows()).all(|i| (0..self.ncols()).all(|j| self.get(i, j).intersects(&other.get(i, j))))
    }

    /// Largest radius.
    pub fn max_rad(&self) -> f64 {
        self.rad.iter().copied().fold(0.0, f64::max)
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diag(blocks: &[IntervalMatrix]) -> Self {
        let n = blocks.iter().map(|b| b.nrows()).sum();
        let mut out = IntervalMatrix::zeros(n, n);
        let mut at = 0;
        for b in blocks {
            out.set_submatrix(at, at, b);
            at += b.nrows();
        }
        out
    }
}

/// Left factor of interval products with its magnitude precomputed.
#[derive(Clone, Debug)]
pub struct PreparedLeft {
    re: RMat,
    im: RMat,
    abs: RMat,
    rad: Option<RMat>,
}

impl PreparedLeft {
    /// Enclosure of `{A B}` for `A` in the prepared matrix and `B` in `other`.
    pub fn mul(&self, other: &IntervalMatrix) -> Result<IntervalMatrix> {
        if self.re.ncols() != other.nrows() {
            return Err(Error::Dimension("inner dimensions of product differ"));
        }
        let k = self.re.ncols();
        let (br, bi) = split(&other.mid);
        let mid = cmul_split(&self.re, &self.im, &br, &bi);
        let bm = abs_up(&other.mid);
        // |fl(AB) - AB| <= sqrt(2) gamma_{k+1} |A||B| entrywise, plus underflow.
        let c = mul_up(2.0, gamma_n(k + 2));
        let f = sum_factor(k);
        let tiny = ((8 * k + 8) as f64) * ETA;
        let other_point = other.is_point();
        let t =
            if other_point { bm.map(|x| mul_up(c, x)) } else { other.rad.zip_map(&bm, |s, b| add_up(s, mul_up(c, b))) };
        let p1 = &self.abs * &t;
        let rad = match &self.rad {
            None => p1.map(|x| add_up(mul_up(x, f), tiny)),
            Some(r) => {
                let u = if other_point { bm } else { bm.zip_map(&other.rad, add_up) };
                let p2 = r * &u;
                p1.zip_map(&p2, |x, y| add_up(mul_up(add_up(x, y), f), tiny))
            }
        };
        IntervalMatrix { mid, rad }.checked()
    }
}

/// Which induced norm a bound refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    One,
    Inf,
}

impl From<CMat> for IntervalMatrix {
    fn from(m: CMat) -> Self {
        IntervalMatrix::point(m)
    }
}

/// Builds a complex matrix from row slices.
pub fn cmat_from_rows(rows: &[&[C64]]) -> CMat {
    let n = rows.len();
    let m = if n == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(n, m, |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_product_is_exact() {
        let a = IntervalMatrix::identity(2);
        let b = IntervalMatrix::point(cmat_from_rows(&[&[c(1.0), c(2.0)], &[c(3.0), c(4.0)]]));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.mid(), b.mid());
        assert!(p.max_rad() < 1e-14);
    }

    #[test]
    fn product_radius_covers_spread() {
        let mut a = IntervalMatrix::identity(2);
        a.set(0, 0, Disc::new(c(1.0), 0.1).unwrap());
        let b = IntervalMatrix::point(cmat_from_rows(&[&[c(1.0), c(0.0)], &[c(0.0), c(1.0)]]));
        let p = a.mul(&b).unwrap();
        assert!(p.rad()[(0, 0)] >= 0.1);
    }

    #[test]
    fn mismatched_product_errors() {
        let a = IntervalMatrix::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn norms_bound_members() {
        let mut a = IntervalMatrix::point(cmat_from_rows(&[&[c(1.0), c(-2.0)], &[c(0.5), c(0.25)]]));
        a.set(1, 1, Disc::new(c(0.25), 0.5).unwrap());
        assert!(a.norm_inf_up() >= 3.0);
        assert!(a.norm_one_up() >= 2.25);
        assert!(a.norm_inf_down() <= 3.0);
    }
}
