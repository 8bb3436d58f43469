//! Numerical Jordan structure of a nearly nilpotent matrix.

use alloc::vec::Vec;

use crate::interval::dense::cmul;
use crate::CMat;

/// Relative tolerance for numerical rank decisions on powers of `N`.
const RANK_TOL: f64 = 1e-8;

/// One-sided Jacobi SVD `m = U diag(s) V^H` with singular values in
/// descending order (thin: `min(rows, cols)` of them). Columns of `U` that
/// belong to zero singular values are zero.
fn sorted_svd(m: &CMat) -> Option<(Vec<f64>, CMat, CMat)> {
    if m.nrows() < m.ncols() {
        let (s, u, v) = sorted_svd(&m.adjoint())?;
        return Some((s, v, u));
    }
    let (rows, cols) = m.shape();
    let mut w = m.clone();
    let mut v = CMat::identity(cols, cols);
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dotc(&w.column(j));
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                // Real rotation of the pair [w_i, w_j e^{-i phi}], gamma = |gamma| e^{i phi}.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = c * t;
                for mat in [&mut w, &mut v] {
                    for r in 0..mat.nrows() {
                        let a = mat[(r, i)];
                        let b = mat[(r, j)] * phase;
                        mat[(r, i)] = a * c - b * sn;
                        mat[(r, j)] = a * sn + b * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|k| w.column(k).norm()).collect();
    if norms.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let mut idx: Vec<usize> = (0..cols).collect();
    idx.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let s: Vec<f64> = idx.iter().map(|&k| norms[k]).collect();
    let u = CMat::from_fn(rows, cols, |r, c| {
        let k = idx[c];
        if norms[k] > 0.0 {
            w[(r, k)] / norms[k]
        } else {
            w[(r, k)] * 0.0
        }
    });
    let v = CMat::from_fn(cols, cols, |r, c| v[(r, idx[c])]);
    Some((s, u, v))
}

fn rank(m: &CMat, tol: f64) -> Option<usize> {
    let (s, _, _) = sorted_svd(m)?;
    Some(s.iter().filter(|&&x| x > tol).count())
}

/// Orthonormal basis (as columns) of the `dim` smallest right singular
/// directions of a square matrix.
fn kernel_basis(m: &CMat, dim: usize) -> Option<CMat> {
    let (_, _, v) = sorted_svd(m)?;
    let p = v.ncols();
    Some(v.columns(p - dim, dim).into_owned())
}

/// Jordan block sizes (descending) of the nearly nilpotent `n`, read off the
/// nullities of its powers. `scale` is a norm estimate of the surrounding
/// matrix; ranks of `N^k` are taken relative to `1e-8 scale^k`.
/// Returns `None` if the nullities stall below the dimension.
pub fn jordan_sizes(n: &CMat, scale: f64) -> Option<Vec<usize>> {
    let p = n.nrows();
    if p == 0 {
        return Some(Vec::new());
    }
    let mut nullities = alloc::vec![0usize];
    let mut power = n.clone();
    for k in 1..=p {
        if k > 1 {
            power = cmul(&power, n);
        }
        let tol = RANK_TOL * libm::pow(scale.max(f64::MIN_POSITIVE), k as f64);
        let d = p - rank(&power, tol)?;
        if d <= *nullities.last().unwrap() {
            return None;
        }
        nullities.push(d);
        if d == p {
            break;
        }
    }
    if *nullities.last().unwrap() != p {
        return None;
    }
    let at_least: Vec<usize> = nullities.windows(2).map(|w| w[1] - w[0]).collect();
    if at_least.windows(2).any(|w| w[1] > w[0]) {
        return None;
    }
    let mut sizes = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let next = at_least.get(k).copied().unwrap_or(0);
        for _ in 0..at_least[k - 1] - next {
            sizes.push(k);
        }
    }
    Some(sizes)
}

/// Columns `[N^{s-1} h, ..., N h, h]` for each chain, longest chains first,
/// so that `N V ~ V M` with `M` the nilpotent Jordan matrix for `sizes`
/// sorted in descending order.
pub fn jordan_chains(n: &CMat, sizes: &[usize]) -> Option<CMat> {
    let p = n.nrows();
    let mut sizes: Vec<usize> = sizes.to_vec();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    if sizes.iter().sum::<usize>() != p || sizes.contains(&0) {
        return None;
    }
    if p == 0 {
        return Some(CMat::zeros(0, 0));
    }
    let smax = sizes[0];
    let mut powers = alloc::vec![CMat::identity(p, p), n.clone()];
    for k in 2..=smax {
        let next = cmul(&powers[k - 1], n);
        powers.push(next);
    }
    let nullity = |k: usize| sizes.iter().map(|&s| s.min(k)).sum::<usize>();
    let mut kernels: Vec<CMat> = alloc::vec![CMat::zeros(p, 0)];
    for (k, power) in powers.iter().enumerate().skip(1) {
        kernels.push(kernel_basis(power, nullity(k))?);
    }
    let mut chains: Vec<(CMat, usize)> = Vec::new();
    for s in (1..=smax).rev() {
        let count = sizes.iter().filter(|&&x| x == s).count();
        if count == 0 {
            continue;
        }
        let mut cols: Vec<CMat> = Vec::new();
        if kernels[s - 1].ncols() > 0 {
            cols.push(kernels[s - 1].clone());
        }
        for (h, len) in &chains {
            cols.push(cmul(&powers[len - s], h));
        }
        let ks = &kernels[s];
        let candidates = if cols.is_empty() {
            ks.clone()
        } else {
            let total: usize = cols.iter().map(|c| c.ncols()).sum();
            let mut span = CMat::zeros(p, total);
            let mut at = 0;
            for c in &cols {
                span.columns_mut(at, c.ncols()).copy_from(c);
                at += c.ncols();
            }
            let (sv, u, _) = sorted_svd(&span)?;
            let keep = sv.iter().filter(|&&x| x > 1e-10 * sv[0].max(f64::MIN_POSITIVE)).count();
            let basis = u.columns(0, keep).into_owned();
            ks - cmul(&basis, &cmul(&basis.adjoint(), ks))
        };
        let (sv, u, _) = sorted_svd(&candidates)?;
        if sv.len() < count || sv[count - 1] < 1e-6 {
            return None;
        }
        for i in 0..count {
            chains.push((u.columns(i, 1).into_owned(), s));
        }
    }
    let mut v = CMat::zeros(p, p);
    let mut at = 0;
    for (h, len) in &chains {
        for i in (0..*len).rev() {
            v.columns_mut(at, 1).copy_from(&cmul(&powers[i], h));
            at += 1;
        }
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn shift(sizes: &[usize]) -> CMat {
        let p: usize = sizes.iter().sum();
        let mut m = CMat::zeros(p, p);
        let mut at = 0;
        for &s in sizes {
            for i in 0..s.saturating_sub(1) {
                m[(at + i, at + i + 1)] = C64::new(1.0, 0.0);
            }
            at += s;
        }
        m
    }

    fn conjugate(m: &CMat) -> CMat {
        let p = m.nrows();
        let x = CMat::from_fn(p, p, |i, j| {
            C64::new(if i == j { 2.0 } else { ((i * 3 + j) % 4) as f64 * 0.25 }, 0.1 * (i as f64 - j as f64))
        });
        let xi = crate::interval::dense::inverse(&x).unwrap();
        cmul(&cmul(&x, m), &xi)
    }

    #[test]
    fn svd_reconstructs_rank_deficient_input() {
        let col = [0.20412414523193145, -0.40824829046386335, -0.20412414523193162];
        let m = CMat::from_fn(3, 2, |i, j| C64::new(col[i] * if j == 0 { 1.0 } else { 1.7320508075688772 }, 0.0));
        let (s, u, v) = sorted_svd(&m).unwrap();
        let d = CMat::from_fn(2, 2, |i, j| C64::new(if i == j { s[i] } else { 0.0 }, 0.0));
        assert!((&u * d * v.adjoint() - &m).norm() < 1e-15);
        assert!((s[0] - 1.0).abs() < 1e-15 && s[1] < 1e-15);
        let z = CMat::from_fn(2, 3, |i, j| C64::new((i + j) as f64, i as f64 - j as f64));
        let (s, u, v) = sorted_svd(&z).unwrap();
        let d = CMat::from_fn(2, 2, |i, j| C64::new(if i == j { s[i] } else { 0.0 }, 0.0));
        assert!((&u * d * v.adjoint() - &z).norm() < 1e-14);
    }

    #[test]
    fn sizes_of_conjugated_nilpotent() {
        let n = conjugate(&shift(&[3, 2, 1]));
        assert_eq!(jordan_sizes(&n, 4.0), Some(alloc::vec![3, 2, 1]));
    }

    #[test]
    fn nonnilpotent_is_rejected() {
        let n = CMat::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]));
        assert_eq!(jordan_sizes(&n, 1.0), None);
    }

    #[test]
    fn chains_satisfy_jordan_relation() {
        let sizes = [3, 2, 1];
        let n = conjugate(&shift(&sizes));
        let v = jordan_chains(&n, &sizes).unwrap();
        let r = cmul(&n, &v) - cmul(&v, &shift(&sizes));
        assert!(r.norm() < 1e-10, "{}", r.norm());
        assert!(crate::interval::dense::inverse(&v).is_some());
    }
}
