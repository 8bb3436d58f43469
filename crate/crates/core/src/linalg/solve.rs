use crate::error::{Error, Result};
use crate::interval::dense::{abs_up, cmul, inverse};
use crate::interval::IntervalMatrix;
use crate::round::{add_up, div_up, mul_up, sub_down, sum_factor, ETA, U};
use crate::{CMat, RMat};

/// Preconditioned enclosure of solutions of `A X = B` for every `A` in a
/// fixed interval matrix.
///
/// Construction certifies `|| |I - R mid(A)| + |R| rad(A) ||_inf < 1` for an
/// approximate inverse `R`, which proves every member of the interval matrix
/// nonsingular.
#[derive(Clone, Debug)]
pub struct VerifiedSolver {
    a: IntervalMatrix,
    approx_inv: CMat,
    contraction: RMat,
    contraction_norm: f64,
}

impl VerifiedSolver {
    pub fn new(a: &IntervalMatrix) -> Result<Self> {
        let (n, m) = a.shape();
        if n != m {
            return Err(Error::Dimension("coefficient matrix must be square"));
        }
        let approx_inv = inverse(a.mid()).ok_or(Error::Verification("matrix is numerically singular"))?;
        if approx_inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Verification("matrix is numerically singular"));
        }
        let r = IntervalMatrix::point(approx_inv.clone());
        let ra = r.mul(&IntervalMatrix::point(a.mid().clone()))?;
        let f = sum_factor(n);
        let abs_r = abs_up(&approx_inv);
        let spread = if a.is_point() {
            RMat::zeros(n, n)
        } else {
            (&abs_r * a.rad()).map(|x| add_up(mul_up(x, f), (n as f64) * ETA))
        };
        let contraction = RMat::from_fn(n, n, |i, j| {
            let z = ra.mid()[(i, j)];
            let d = if i == j { z - crate::C64::new(1.0, 0.0) } else { z };
            let dev = add_up(crate::round::hypot_up(d.re, d.im), ra.rad()[(i, j)]);
            add_up(dev, spread[(i, j)])
        });
        let contraction_norm = row_sum_max_up(&contraction);
        if !(contraction_norm < 1.0) {
            return Err(Error::Verification("contraction test failed"));
        }
        Ok(VerifiedSolver { a: a.clone(), approx_inv, contraction, contraction_norm })
    }

    pub fn contraction_norm(&self) -> f64 {
        self.contraction_norm
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// Encloses `{A^{-1} B : A in self, B in b}`.
    pub fn solve(&self, b: &IntervalMatrix) -> Result<IntervalMatrix> {
        let n = self.dim();
        if b.nrows() != n {
            return Err(Error::Dimension("right-hand side has wrong row count"));
        }
        let am = self.a.mid();
        let mut x = cmul(&self.approx_inv, b.mid());
        let residual = b.mid() - cmul(am, &x);
        x += cmul(&self.approx_inv, &residual);
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let xp = IntervalMatrix::point(x.clone());
        let c = b.sub(&self.a.mul(&xp)?)?;
        let z = IntervalMatrix::point(self.approx_inv.clone()).mul(&c)?;
        let zmag = RMat::from_fn(n, b.ncols(), |i, j| {
            let w = z.mid()[(i, j)];
            add_up(crate::round::hypot_up(w.re, w.im), z.rad()[(i, j)])
        });
        let one_minus = sub_down(1.0, self.contraction_norm);
        let row_sums: alloc::vec::Vec<f64> =
            (0..n).map(|i| crate::round::sum_up(self.contraction.row(i).iter().copied())).collect();
        let f = sum_factor(n);
        let mut eps = zmag.clone();
        for j in 0..b.ncols() {
            let znorm = zmag.column(j).iter().copied().fold(0.0, f64::max);
            let scale = div_up(znorm, one_minus);
            for i in 0..n {
                eps[(i, j)] = add_up(zmag[(i, j)], mul_up(row_sums[i], scale));
            }
        }
        let ge = (&self.contraction * &eps).map(|v| add_up(mul_up(v, f), (n as f64) * ETA));
        let mid = &x + z.mid();
        let rad = RMat::from_fn(n, b.ncols(), |i, j| {
            let m = mid[(i, j)];
            add_up(add_up(z.rad()[(i, j)], ge[(i, j)]), mul_up(2.0 * U, crate::round::hypot_up(m.re, m.im)))
        });
        IntervalMatrix::new(mid, rad)
    }
}

fn row_sum_max_up(m: &RMat) -> f64 {
    (0..m.nrows()).map(|i| crate::round::sum_up(m.row(i).iter().copied())).fold(0.0, f64::max)
}

/// Encloses `{X : A X = B, A in a, B in b}`.
pub fn verified_solve(a: &IntervalMatrix, b: &IntervalMatrix) -> Result<IntervalMatrix> {
    VerifiedSolver::new(a)?.solve(b)
}

/// True if every member of `a` is certainly nonsingular.
pub fn verify_nonsingular(a: &IntervalMatrix) -> bool {
    VerifiedSolver::new(a).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::cmat_from_rows;
    use crate::C64;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn identity_solve_is_tight() {
        let a = IntervalMatrix::identity(3);
        let b = IntervalMatrix::point(CMat::from_fn(3, 2, |i, j| c((i + 2 * j) as f64)));
        let x = verified_solve(&a, &b).unwrap();
        assert!(x.contains_point(b.mid()));
        assert!(x.max_rad() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = IntervalMatrix::point(cmat_from_rows(&[&[c(1.0), c(2.0)], &[c(2.0), c(4.0)]]));
        assert!(!verify_nonsingular(&a));
    }

    #[test]
    fn solution_of_small_system() {
        let a = IntervalMatrix::point(cmat_from_rows(&[&[c(4.0), c(1.0)], &[c(2.0), c(3.0)]]));
        let b = IntervalMatrix::point(cmat_from_rows(&[&[c(1.0)], &[c(2.0)]]));
        let x = verified_solve(&a, &b).unwrap();
        let exact = cmat_from_rows(&[&[c(0.1)], &[c(0.6)]]);
        assert!(x.contains_point(&exact));
    }
}
