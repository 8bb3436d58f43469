//! Tight enclosures of residuals `A X - X T` via compensated dot products.
//!
//! Each entry is accumulated with error-free transformations, so its radius
//! is about `u |result| + gamma_m^2 sum |terms|` instead of the
//! `gamma_m sum |terms|` of a plain floating-point product. This matters when
//! the residual is many orders of magnitude below `|A| |X|`.

use crate::interval::IntervalMatrix;
use crate::round::{add_up, gamma_n, mul_up, sum_up, two_prod, two_sum, ETA, U};
use crate::{CMat, RMat, C64};

/// Compensated accumulator for a real dot product.
#[derive(Clone, Copy, Debug, Default)]
struct Dot2 {
    sum: f64,
    comp: f64,
    mag: f64,
    terms: usize,
}

impl Dot2 {
    #[inline]
    fn add_product(&mut self, a: f64, b: f64) {
        let (p, e) = two_prod(a, b);
        let (s, f) = two_sum(self.sum, p);
        self.sum = s;
        self.comp += e + f;
        self.mag += p.abs();
        self.terms += 1;
    }

    /// Value and an upper bound on its distance to the exact dot product.
    fn finish(self) -> (f64, f64) {
        let value = self.sum + self.comp;
        let m = self.terms.max(1);
        let g = gamma_n(m);
        let mag = sum_up([mul_up(self.mag, add_up(1.0, mul_up(2.0, gamma_n(m)))), (m as f64) * ETA]);
        let err = sum_up([mul_up(2.0 * U, value.abs()), mul_up(mul_up(2.0, mul_up(g, g)), mag), (4 * m) as f64 * ETA]);
        (value, err)
    }
}

/// Enclosure of `A X - X T` where `T` has diagonal `diag` and ones on the
/// superdiagonal positions `j -> j + 1` with `link[j]` set.
pub fn residual_enclosure(a: &CMat, x: &CMat, diag: &[C64], link: &[bool]) -> IntervalMatrix {
    let (n, k) = (a.nrows(), x.ncols());
    let mut mid = CMat::zeros(n, k);
    let mut rad = RMat::zeros(n, k);
    for j in 0..k {
        let dj = diag[j];
        for i in 0..n {
            let (mut re, mut im) = (Dot2::default(), Dot2::default());
            for l in 0..a.ncols() {
                let (p, q) = (a[(i, l)], x[(l, j)]);
                re.add_product(p.re, q.re);
                re.add_product(-p.im, q.im);
                im.add_product(p.re, q.im);
                im.add_product(p.im, q.re);
            }
            let q = x[(i, j)];
            re.add_product(-q.re, dj.re);
            re.add_product(q.im, dj.im);
            im.add_product(-q.re, dj.im);
            im.add_product(-q.im, dj.re);
            if j > 0 && link[j - 1] {
                let q = x[(i, j - 1)];
                re.add_product(-q.re, 1.0);
                im.add_product(-q.im, 1.0);
            }
            let (vr, er) = re.finish();
            let (vi, ei) = im.finish();
            mid[(i, j)] = C64::new(vr, vi);
            rad[(i, j)] = add_up(er, ei);
        }
    }
    IntervalMatrix::from_parts(mid, rad)
}
