//! Complex Schur form and the triangular kernels built on it.

use nalgebra::Schur;

use crate::error::{Error, Result};
use crate::interval::dense::frobenius;
use crate::round::U;
use crate::{CMat, C64};

/// Unitary `Q` and upper triangular `T` with `A = Q T Q^H` (numerically).
pub fn schur(a: &CMat) -> Result<(CMat, CMat)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension("Schur form needs a square matrix"));
    }
    if n == 0 {
        return Ok((CMat::zeros(0, 0), CMat::zeros(0, 0)));
    }
    let s = Schur::try_new(a.clone(), f64::EPSILON, 100 * n.max(10))
        .ok_or(Error::Decomposition("Schur iteration did not converge"))?;
    let (q, mut t) = s.unpack();
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    if t.iter().chain(q.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Decomposition("Schur form is not finite"));
    }
    Ok((q, t))
}

fn small_divisor(d: C64, floor: f64) -> C64 {
    if d.norm() >= floor {
        d
    } else if d == C64::new(0.0, 0.0) {
        C64::new(floor, 0.0)
    } else {
        d * (floor / d.norm())
    }
}

/// Unit-norm eigenvectors of an upper triangular matrix, one per diagonal
/// entry, by back substitution with small divisors perturbed away from zero.
pub fn triangular_eigenvectors(t: &CMat) -> CMat {
    let n = t.nrows();
    let floor = (U * frobenius(t)).max(f64::MIN_POSITIVE);
    let mut v = CMat::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        v[(k, k)] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * v[(j, k)];
            }
            v[(i, k)] = -s / small_divisor(t[(i, i)] - lambda, floor);
        }
        let norm = v.column(k).norm();
        if norm > 0.0 && norm.is_finite() {
            v.column_mut(k).unscale_mut(norm);
        }
    }
    v
}

/// Complex Givens rotation `[c s; -conj(s) c]` mapping `(f, g)` to `(r, 0)`.
fn givens(f: C64, g: C64) -> (f64, C64) {
    if g == C64::new(0.0, 0.0) {
        return (1.0, C64::new(0.0, 0.0));
    }
    if f == C64::new(0.0, 0.0) {
        return (0.0, g.conj() / g.norm());
    }
    let (fa, ga) = (f.norm(), g.norm());
    let norm = libm::hypot(fa, ga);
    (fa / norm, (f / fa) * g.conj() / norm)
}

/// Swaps the diagonal entries at positions `k` and `k + 1` of the Schur form
/// `(q, t)`, keeping `A = Q T Q^H`.
pub fn swap_adjacent(q: &mut CMat, t: &mut CMat, k: usize) {
    let n = t.nrows();
    let (t11, t22) = (t[(k, k)], t[(k + 1, k + 1)]);
    let (c, s) = givens(t[(k, k + 1)], t22 - t11);
    let rot = |x: C64, y: C64| (x * c + y * s, -s.conj() * x + y * c);
    for j in k..n {
        let (a, b) = rot(t[(k, j)], t[(k + 1, j)]);
        t[(k, j)] = a;
        t[(k + 1, j)] = b;
    }
    // Right multiplication by the adjoint rotation.
    let rot_h = |x: C64, y: C64| (x * c + y * s.conj(), -s * x + y * c);
    for i in 0..=k + 1 {
        let (a, b) = rot_h(t[(i, k)], t[(i, k + 1)]);
        t[(i, k)] = a;
        t[(i, k + 1)] = b;
    }
    for i in 0..n {
        let (a, b) = rot_h(q[(i, k)], q[(i, k + 1)]);
        q[(i, k)] = a;
        q[(i, k + 1)] = b;
    }
    t[(k + 1, k)] = C64::new(0.0, 0.0);
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
}

/// Reorders the Schur form so that diagonal entry `order[i]` (an index into
/// the original diagonal) ends at position `i`.
pub fn reorder_schur(q: &mut CMat, t: &mut CMat, order: &[usize]) {
    let mut current: alloc::vec::Vec<usize> = (0..t.nrows()).collect();
    for (target, &want) in order.iter().enumerate() {
        let from = current.iter().position(|&x| x == want).expect("order is a permutation");
        for k in (target..from).rev() {
            swap_adjacent(q, t, k);
            current.swap(k, k + 1);
        }
    }
}

/// Solves `T00 Y - Y Tjj = -T0j` for upper triangular `T00` and `Tjj`.
pub fn sylvester_upper(t00: &CMat, t0j: &CMat, tjj: &CMat) -> CMat {
    let (m, p) = t0j.shape();
    let floor = (U * (frobenius(t00) + frobenius(tjj))).max(f64::MIN_POSITIVE);
    let mut y = CMat::zeros(m, p);
    for k in 0..p {
        for i in (0..m).rev() {
            let mut s = -t0j[(i, k)];
            for l in i + 1..m {
                s -= t00[(i, l)] * y[(l, k)];
            }
            for r in 0..k {
                s += y[(i, r)] * tjj[(r, k)];
            }
            y[(i, k)] = s / small_divisor(t00[(i, i)] - tjj[(k, k)], floor);
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::dense::cmul;

    fn sample() -> CMat {
        CMat::from_fn(5, 5, |i, j| C64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0))
    }

    fn residual(a: &CMat, q: &CMat, t: &CMat) -> f64 {
        frobenius(&(a - cmul(&cmul(q, t), &q.adjoint())))
    }

    #[test]
    fn schur_reconstructs() {
        let a = sample();
        let (q, t) = schur(&a).unwrap();
        assert!(residual(&a, &q, &t) < 1e-12);
    }

    #[test]
    fn reorder_moves_eigenvalues() {
        let a = sample();
        let (mut q, mut t) = schur(&a).unwrap();
        let before: alloc::vec::Vec<C64> = (0..5).map(|i| t[(i, i)]).collect();
        reorder_schur(&mut q, &mut t, &[4, 2, 0, 1, 3]);
        assert!(residual(&a, &q, &t) < 1e-12);
        for (pos, orig) in [4usize, 2, 0, 1, 3].iter().enumerate() {
            assert!((t[(pos, pos)] - before[*orig]).norm() < 1e-10);
        }
    }

    #[test]
    fn eigenvectors_satisfy_definition() {
        let a = sample();
        let (_, t) = schur(&a).unwrap();
        let v = triangular_eigenvectors(&t);
        for k in 0..5 {
            let r = cmul(&t, &v.columns(k, 1).into_owned()) - v.columns(k, 1) * t[(k, k)];
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn sylvester_solution() {
        let (_, t) = schur(&sample()).unwrap();
        let t00 = t.view((0, 0), (3, 3)).into_owned();
        let t0j = t.view((0, 3), (3, 2)).into_owned();
        let tjj = t.view((3, 3), (2, 2)).into_owned();
        let y = sylvester_upper(&t00, &t0j, &tjj);
        let r = cmul(&t00, &y) - cmul(&y, &tjj) + t0j;
        assert!(r.norm() < 1e-12);
    }
}
