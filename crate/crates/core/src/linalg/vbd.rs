//! Verified block diagonalization.
//!
//! Given a numerical basis `X` whose column groups approximately span
//! invariant subspaces of `A`, the verifier encloses `G = X^{-1} A X` and, for
//! each group `J`, solves the Riccati equation for the complementary
//! coordinates `Y` of an exact invariant subspace `X_J + X_{J'} Y` by an
//! interval fixed-point iteration. The result encloses basis blocks `W_j` and
//! coefficient blocks `P_j` with `A W_j = W_j P_j`, and `P_j` is written as
//! `lambda_j I + M_j + Q_j` with `|Q_j| <= R_j` and `M_j` the nilpotent Jordan
//! matrix of the group.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::interval::dense::{cmul, frobenius, inverse, norm_inf};
use crate::interval::{residual_enclosure, Disc, IntervalMatrix, NormKind};
use crate::linalg::cluster::{cluster_eigs, jordan_clusters};
use crate::linalg::jordan::{jordan_chains, jordan_sizes};
use crate::linalg::schur::{reorder_schur, schur, sylvester_upper, triangular_eigenvectors};
use crate::linalg::solve::VerifiedSolver;
use crate::round::{add_up, div_up, exp_up, hypot_up, ln_up, mul_up, U};
use crate::{CMat, RMat, C64};

/// Tuning knobs for the decompositions.
#[derive(Clone, Debug)]
pub struct VbdOptions {
    /// Multiplier on residual radii when clustering eigenvalues.
    pub kappa: f64,
    /// How many times clustering is retried with doubled `kappa`.
    pub retries: usize,
    /// Largest Jordan block searched for when no hint is given.
    pub max_jordan_block: usize,
    /// Iteration cap of the interval fixed-point solve.
    pub max_iterations: usize,
}

impl Default for VbdOptions {
    fn default() -> Self {
        VbdOptions { kappa: 10.0, retries: 3, max_jordan_block: 8, max_iterations: 15 }
    }
}

/// Contiguous column range of the basis with its Jordan block sizes (all ones
/// for a spectral group).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub range: Range<usize>,
    pub sizes: Vec<usize>,
}

impl Group {
    pub fn spectral(range: Range<usize>) -> Self {
        let p = range.len();
        Group { range, sizes: vec![1; p] }
    }
}

/// One verified diagonal block `P_j` in `<lambda I + M, R>`.
#[derive(Clone, Debug)]
pub struct Block {
    pub lambda: C64,
    pub sizes: Vec<usize>,
    pub radius: RMat,
    /// Every eigenvalue of `P_j` lies in the disc `<lambda, spectrum_radius>`.
    pub spectrum_radius: f64,
    /// First column of the block inside `W`.
    pub offset: usize,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.radius.nrows()
    }

    pub fn is_spectral(&self) -> bool {
        self.sizes.iter().all(|&s| s == 1)
    }

    pub fn max_jordan_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(1)
    }

    /// Nilpotent part `M`.
    pub fn structure(&self) -> CMat {
        nilpotent(&self.sizes)
    }

    pub fn spectrum_disc(&self) -> Disc {
        Disc::from_parts(self.lambda, self.spectrum_radius)
    }

    /// Interval matrix `<lambda I + M, R>`.
    pub fn enclosure(&self) -> IntervalMatrix {
        let p = self.dim();
        let mut mid = self.structure();
        for i in 0..p {
            mid[(i, i)] = self.lambda;
        }
        IntervalMatrix::from_parts(mid, self.radius.clone())
    }
}

/// Nilpotent Jordan matrix with the given block sizes.
pub fn nilpotent(sizes: &[usize]) -> CMat {
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

/// Verified block diagonalization `A W = W diag(P_1, ..., P_q)`.
#[derive(Clone, Debug)]
pub struct VbdResult {
    pub blocks: Vec<Block>,
    /// Enclosure of the basis `W`.
    pub w: IntervalMatrix,
    w_transpose: VerifiedSolver,
}

impl VbdResult {
    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn spectrum_discs(&self) -> Vec<Disc> {
        self.blocks.iter().map(Block::spectrum_disc).collect()
    }

    /// Solver for `W^T Z = B`, certified nonsingular.
    pub fn w_transpose_solver(&self) -> &VerifiedSolver {
        &self.w_transpose
    }
}

fn check_square(a: &CMat) -> Result<usize> {
    let n = a.nrows();
    if n != a.ncols() || n == 0 {
        return Err(Error::Dimension("matrix must be square and nonempty"));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(n)
}

fn is_hermitian(a: &CMat) -> bool {
    let n = a.nrows();
    (0..n).all(|i| (i..n).all(|j| a[(i, j)] == a[(j, i)].conj()))
}

/// Approximate eigenvalues and unit-norm eigenvectors.
fn numerical_eigen(a: &CMat) -> Result<(Vec<C64>, CMat)> {
    if is_hermitian(a) {
        let eig = SymmetricEigen::try_new(a.clone(), f64::EPSILON, 0)
            .ok_or(Error::Decomposition("Hermitian eigensolver did not converge"))?;
        let lambdas = eig.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect();
        return Ok((lambdas, eig.eigenvectors));
    }
    let (q, t) = schur(a)?;
    let v = triangular_eigenvectors(&t);
    let mut x = cmul(&q, &v);
    for j in 0..x.ncols() {
        let norm = x.column(j).norm();
        if norm > 0.0 && norm.is_finite() {
            x.column_mut(j).unscale_mut(norm);
        }
    }
    let lambdas = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    Ok((lambdas, x))
}

/// Block diagonalization from a numerical spectral decomposition.
pub fn vbd_spectral(a: &CMat, opts: &VbdOptions) -> Result<VbdResult> {
    check_square(a).map_err(Error::vbd)?;
    let (lambdas, x) = numerical_eigen(a).map_err(Error::vbd)?;
    let ax = cmul(a, &x);
    let residuals: Vec<f64> = (0..x.ncols()).map(|j| (ax.column(j) - x.column(j) * lambdas[j]).norm()).collect();
    let tau = 1e3 * U * norm_inf(a);
    let mut kappa = opts.kappa;
    let mut tried: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut last = Error::Verification("no clustering attempted");
    for _ in 0..=opts.retries {
        let radii: Vec<f64> = residuals.iter().map(|r| kappa * r + tau).collect();
        kappa *= 2.0;
        let clusters = cluster_eigs(&lambdas, &radii);
        if tried.contains(&clusters) {
            continue;
        }
        let order: Vec<usize> = clusters.iter().flatten().copied().collect();
        let xp = CMat::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, order[j])]);
        let mut groups = Vec::with_capacity(clusters.len());
        let mut at = 0;
        for c in &clusters {
            groups.push(Group::spectral(at..at + c.len()));
            at += c.len();
        }
        match verify_blocks(a, &xp, &groups, opts) {
            Ok(r) => return Ok(r),
            Err(e) => last = e,
        }
        tried.push(clusters);
    }
    Err(Error::vbd(last))
}

/// Block diagonalization from a numerical Jordan decomposition.
///
/// `hint` lists every Jordan block size, consumed cluster by cluster in the
/// order of the clusters' first Schur position.
pub fn vbd_jordan(a: &CMat, hint: Option<&[usize]>, opts: &VbdOptions) -> Result<VbdResult> {
    let n = check_square(a).map_err(Error::vbd)?;
    if let Some(h) = hint {
        if h.iter().sum::<usize>() != n || h.contains(&0) {
            return Err(Error::Precondition("Jordan hint sizes must be positive and sum to n"));
        }
    }
    let (mut q, mut t) = schur(a).map_err(Error::vbd)?;
    let lambdas: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let scale = frobenius(a);
    let radii = vec![1e3 * U * norm_inf(a); n];
    let clusters = jordan_clusters(&lambdas, &radii, scale, opts.max_jordan_block);
    let hinted = match hint {
        Some(h) => Some(split_hint(h, &clusters)?),
        None => None,
    };
    let order: Vec<usize> = clusters.iter().flatten().copied().collect();
    reorder_schur(&mut q, &mut t, &order);
    let mut z = CMat::zeros(n, n);
    let mut groups = Vec::with_capacity(clusters.len());
    let mut at = 0;
    for (ci, cluster) in clusters.iter().enumerate() {
        let p = cluster.len();
        let tjj = t.view((at, at), (p, p)).into_owned();
        let mean = (0..p).map(|i| tjj[(i, i)]).sum::<C64>() / p as f64;
        let nil = &tjj - CMat::identity(p, p) * mean;
        let mut sizes = match &hinted {
            Some(h) => h[ci].clone(),
            None => jordan_sizes(&nil, scale).unwrap_or_else(|| vec![1; p]),
        };
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let diagonalizable = sizes.iter().all(|&s| s == 1);
        // A diagonalizable cluster of well separated eigenvalues is split
        // into single eigenvectors; grouping them would only widen R.
        let separated = diagonalizable && p > 1 && {
            let diag: Vec<C64> = (0..p).map(|i| tjj[(i, i)]).collect();
            cluster_eigs(&diag, &radii[..p]).len() == p
        };
        let v = if separated {
            let mut v = triangular_eigenvectors(&tjj);
            for j in 0..p {
                let norm = v.column(j).norm();
                v.column_mut(j).unscale_mut(norm);
            }
            v
        } else if diagonalizable {
            CMat::identity(p, p)
        } else {
            match jordan_chains(&nil, &sizes) {
                Some(v) => v,
                None if hinted.is_some() => {
                    return Err(Error::vbd(Error::Decomposition("no Jordan chains for hinted sizes")))
                }
                None => {
                    sizes = vec![1; p];
                    CMat::identity(p, p)
                }
            }
        };
        let mut basis = CMat::zeros(n, p);
        if at > 0 {
            let t00 = t.view((0, 0), (at, at)).into_owned();
            let t0j = t.view((0, at), (at, p)).into_owned();
            basis.view_mut((0, 0), (at, p)).copy_from(&sylvester_upper(&t00, &t0j, &tjj));
        }
        basis.view_mut((at, 0), (p, p)).copy_from(&CMat::identity(p, p));
        let zj = cmul(&cmul(&q, &basis), &v);
        z.columns_mut(at, p).copy_from(&zj);
        if separated {
            groups.extend((at..at + p).map(|i| Group::spectral(i..i + 1)));
        } else {
            groups.push(Group { range: at..at + p, sizes });
        }
        at += p;
    }
    verify_blocks(a, &z, &groups, opts).map_err(Error::vbd)
}

fn split_hint(hint: &[usize], clusters: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::with_capacity(clusters.len());
    let mut it = hint.iter();
    for c in clusters {
        let mut sizes = Vec::new();
        let mut total = 0;
        while total < c.len() {
            let s = *it.next().ok_or(Error::Precondition("Jordan hint does not match the eigenvalue clusters"))?;
            total += s;
            sizes.push(s);
        }
        if total != c.len() {
            return Err(Error::Precondition("Jordan hint does not match the eigenvalue clusters"));
        }
        out.push(sizes);
    }
    Ok(out)
}

/// Verifies the block structure described by `groups` for the basis `x`.
pub fn verify_blocks(a: &CMat, x: &CMat, groups: &[Group], opts: &VbdOptions) -> Result<VbdResult> {
    verify_blocks_inner(a, x, groups, opts).map_err(|e| match e {
        Error::NonFinite => Error::Verification("enclosure of the decomposition overflowed"),
        other => other,
    })
}

fn verify_blocks_inner(a: &CMat, x: &CMat, groups: &[Group], opts: &VbdOptions) -> Result<VbdResult> {
    let n = check_square(a)?;
    if x.shape() != (n, n) {
        return Err(Error::Dimension("basis must be n x n"));
    }
    let mut expect = 0;
    for g in groups {
        if g.range.start != expect || g.sizes.iter().sum::<usize>() != g.range.len() || g.range.is_empty() {
            return Err(Error::Precondition("groups must tile the columns in order"));
        }
        expect = g.range.end;
    }
    if expect != n {
        return Err(Error::Precondition("groups must tile the columns in order"));
    }

    let xi = IntervalMatrix::point(x.clone());
    let x_solver =
        VerifiedSolver::new(&xi).map_err(|_| Error::Verification("numerical basis not verified nonsingular"))?;

    let mut link = vec![false; n];
    for grp in groups {
        let mut at = grp.range.start;
        for &s in &grp.sizes {
            for t in 0..s - 1 {
                link[at + t] = true;
            }
            at += s;
        }
    }
    // G = X^{-1} A X = T + X^{-1} (A X - X T) with T = diag(d) + links; the
    // residual is enclosed with compensated products so that F = G - T keeps
    // a radius far below its magnitude.
    let d = approximate_diagonal(a, x)?;
    let mut structure = CMat::zeros(n, n);
    for i in 0..n {
        structure[(i, i)] = d[i];
        if link[i] {
            structure[(i, i + 1)] = C64::new(1.0, 0.0);
        }
    }
    let f = x_solver.solve(&residual_enclosure(a, x, &d, &link))?;
    let g = IntervalMatrix::point(structure).add(&f)?;
    let f_left = f.prepare();
    let x_left = xi.prepare();

    let mut blocks = Vec::with_capacity(groups.len());
    let mut w = IntervalMatrix::zeros(n, n);
    for grp in groups {
        let r = grp.range.clone();
        let p = r.len();
        let (p_block, w_block) = if p == n {
            (g.clone(), xi.clone())
        } else {
            let y = solve_riccati(&f, &f_left, &d, &link, r.clone(), opts)?;
            let fy = f_left.mul(&y)?;
            let p_block = g.submatrix(r.clone(), r.clone()).add(&fy.submatrix(r.clone(), 0..p))?;
            let w_block = IntervalMatrix::point(x.columns(r.start, p).into_owned()).add(&x_left.mul(&y)?)?;
            (p_block, w_block)
        };
        w.set_submatrix(0, r.start, &w_block);
        blocks.push(describe_block(&p_block, &grp.sizes, r.start)?);
    }
    let w_transpose =
        VerifiedSolver::new(&w.transpose()).map_err(|_| Error::Verification("block basis not verified nonsingular"))?;
    Ok(VbdResult { blocks, w, w_transpose })
}

/// Diagonal of `X^{-1} A X` in floating point.
fn approximate_diagonal(a: &CMat, x: &CMat) -> Result<Vec<C64>> {
    let xinv = inverse(x).ok_or(Error::Verification("numerical basis not verified nonsingular"))?;
    let ax = cmul(a, x);
    Ok((0..x.ncols()).map(|j| xinv.row(j).iter().zip(ax.column(j).iter()).map(|(p, q)| p * q).sum()).collect())
}

fn describe_block(p_block: &IntervalMatrix, sizes: &[usize], offset: usize) -> Result<Block> {
    let p = p_block.nrows();
    let lambda = (0..p).map(|i| p_block.mid()[(i, i)]).sum::<C64>() / p as f64;
    let mut center = nilpotent(sizes);
    for i in 0..p {
        center[(i, i)] = lambda;
    }
    let dev = p_block.sub(&IntervalMatrix::point(center))?;
    let radius = RMat::from_fn(p, p, |i, j| {
        let z = dev.mid()[(i, j)];
        add_up(hypot_up(z.re, z.im), dev.rad()[(i, j)])
    });
    let rad_mat = IntervalMatrix::from_parts(CMat::zeros(p, p), radius.clone());
    let norm = rad_mat.norm_up(NormKind::One).min(rad_mat.norm_up(NormKind::Inf));
    let k = sizes.iter().copied().max().unwrap_or(1);
    let q = mul_up(k as f64, norm);
    let spectrum_radius = if k == 1 || q >= 1.0 || q == 0.0 { q } else { exp_up(div_up(ln_up(q), k as f64)).min(1.0) };
    if !spectrum_radius.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(Block { lambda, sizes: sizes.to_vec(), radius, spectrum_radius, offset })
}

/// Encloses the complementary coordinates `Y` (an `n x p` matrix whose rows
/// inside `range` are zero) of the invariant subspace attached to `range`.
fn solve_riccati(
    f: &IntervalMatrix,
    f_left: &crate::interval::PreparedLeft,
    d: &[C64],
    link: &[bool],
    range: Range<usize>,
    opts: &VbdOptions,
) -> Result<IntervalMatrix> {
    let n = f.nrows();
    let p = range.len();
    let inside = |i: usize| range.contains(&i);
    let f_jj = f.submatrix(range.clone(), range.clone());
    let mut f_col = f.submatrix(0..n, range.clone());
    for i in range.clone() {
        for k in 0..p {
            f_col.set(i, k, Disc::ZERO);
        }
    }
    // Divisors d_i - d_k separate every outside diagonal entry from every
    // inside one, which is what makes the map contract.
    let mut divisors = vec![Disc::ONE; n * p];
    for i in (0..n).filter(|&i| !inside(i)) {
        for k in 0..p {
            let dv = Disc::point(d[i]) - Disc::point(d[range.start + k]);
            if dv.mig() == 0.0 {
                return Err(Error::Verification("eigenvalue groups are not separated"));
            }
            divisors[i * p + k] = dv;
        }
    }
    let phi = |y: &IntervalMatrix| -> Result<IntervalMatrix> {
        let fy = f_left.mul(y)?;
        let inner = f_jj.add(&fy.submatrix(range.clone(), 0..p))?;
        let rhs = y.mul(&inner)?.sub(&fy)?.sub(&f_col)?;
        let mut out = IntervalMatrix::zeros(n, p);
        for k in 0..p {
            for i in (0..n).rev() {
                if inside(i) {
                    continue;
                }
                let mut v = rhs.get(i, k);
                if link[i] && i + 1 < n && !inside(i + 1) {
                    v = v - out.get(i + 1, k);
                }
                if k > 0 && link[range.start + k - 1] {
                    v = v + out.get(i, k - 1);
                }
                out.set(i, k, v.div(divisors[i * p + k])?);
            }
        }
        out.checked()
    };

    let mut y = phi(&IntervalMatrix::zeros(n, p))?;
    for _ in 0..opts.max_iterations {
        let widened = inflate(&y, &range);
        let next = phi(&widened)?;
        if widened.contains(&next) {
            return Ok(next);
        }
        y = next;
    }
    Err(Error::Verification("invariant subspace iteration did not contract"))
}

fn inflate(y: &IntervalMatrix, range: &Range<usize>) -> IntervalMatrix {
    let (n, p) = y.shape();
    let extra = RMat::from_fn(n, p, |i, j| {
        if range.contains(&i) {
            return 0.0;
        }
        let z = y.mid()[(i, j)];
        add_up(add_up(mul_up(0.1, y.rad()[(i, j)]), mul_up(16.0 * U, hypot_up(z.re, z.im))), f64::MIN_POSITIVE)
    });
    y.inflate(&extra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::cmat_from_rows;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn diagonalizable_matrix_splits_into_scalars() {
        let a = cmat_from_rows(&[&[c(2.0), c(1.0)], &[c(0.0), c(3.0)]]);
        let r = vbd_spectral(&a, &VbdOptions::default()).unwrap();
        assert_eq!(r.blocks.len(), 2);
        let mut l: Vec<f64> = r.blocks.iter().map(|b| b.lambda.re).collect();
        l.sort_by(f64::total_cmp);
        assert!((l[0] - 2.0).abs() < 1e-14 && (l[1] - 3.0).abs() < 1e-14);
        for b in &r.blocks {
            assert!(b.spectrum_disc().contains(c(2.0)) || b.spectrum_disc().contains(c(3.0)));
        }
    }

    #[test]
    fn jordan_block_is_recovered() {
        let a = cmat_from_rows(&[&[c(1.0), c(1.0)], &[c(0.0), c(1.0)]]);
        let r = vbd_jordan(&a, None, &VbdOptions::default()).unwrap();
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.blocks[0].sizes, vec![2]);
        assert!(r.blocks[0].spectrum_disc().contains(c(1.0)));
    }

    #[test]
    fn identity_with_hint() {
        let a = CMat::identity(2, 2);
        let r = vbd_jordan(&a, Some(&[1, 1]), &VbdOptions::default()).unwrap();
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.blocks[0].sizes, vec![1, 1]);
        assert!(r.blocks[0].radius.iter().all(|&x| x < 1e-14));
    }

    #[test]
    fn mismatched_hint_is_an_error() {
        let a = CMat::identity(2, 2);
        assert!(vbd_jordan(&a, Some(&[3]), &VbdOptions::default()).is_err());
    }

    #[test]
    fn blocks_satisfy_similarity_for_a_sample_matrix() {
        let a = CMat::from_fn(6, 6, |i, j| {
            C64::new(if i == j { i as f64 + 1.0 } else { 0.3 / (1.0 + i as f64 + 2.0 * j as f64) }, 0.05 * j as f64)
        });
        let r = vbd_spectral(&a, &VbdOptions::default()).unwrap();
        // A W must intersect W diag(P).
        let pd = IntervalMatrix::block_diag(&r.blocks.iter().map(Block::enclosure).collect::<Vec<_>>());
        let lhs = IntervalMatrix::point(a.clone()).mul(&r.w).unwrap();
        let rhs = r.w.mul(&pd).unwrap();
        assert!(lhs.intersects(&rhs));
    }
}
