//! Grouping of approximate eigenvalues.

use alloc::vec;
use alloc::vec::Vec;

use crate::round::U;
use crate::C64;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected components of `members` under `linked`, each sorted ascending
/// and ordered by their smallest member.
fn components(members: &[usize], mut linked: impl FnMut(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let m = members.len();
    let mut uf = UnionFind::new(m);
    for a in 0..m {
        for b in a + 1..m {
            if linked(members[a], members[b]) {
                uf.union(a, b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (a, &member) in members.iter().enumerate() {
        let r = uf.find(a);
        groups[r].push(member);
    }
    let mut out: Vec<Vec<usize>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
    for g in &mut out {
        g.sort_unstable();
    }
    out.sort_by_key(|g| g[0]);
    out
}

/// Transitive closure of overlapping discs `<lambda_i, radius_i>`.
///
/// Returns index sets partitioning `0..lambdas.len()`, each sorted and the
/// sets ordered by their smallest index.
pub fn cluster_eigs(lambdas: &[C64], radii: &[f64]) -> Vec<Vec<usize>> {
    assert_eq!(lambdas.len(), radii.len());
    let all: Vec<usize> = (0..lambdas.len()).collect();
    components(&all, |i, j| (lambdas[i] - lambdas[j]).norm() <= radii[i] + radii[j])
}

/// Clusters for a Jordan-structure search.
///
/// A group of `k` eigenvalues is kept together when its diameter is within
/// `2 theta(k)`, `theta(k) = 10 u^(1/k) scale`, which is the spread expected
/// from rounding errors acting on a Jordan block of size `k`. Groups larger
/// than `max_block` are split. Eigenvalues whose discs `<lambda_i, radius_i>`
/// overlap are never separated.
pub fn jordan_clusters(lambdas: &[C64], radii: &[f64], scale: f64, max_block: usize) -> Vec<Vec<usize>> {
    let theta = |k: usize| 10.0 * libm::pow(U, 1.0 / k as f64) * scale;
    let base = cluster_eigs(lambdas, radii);
    let mut out = Vec::new();
    let top = max_block.max(1).min(lambdas.len().max(1));
    split(lambdas, radii, &theta, (0..lambdas.len()).collect(), top, &mut out);
    // Merge back base clusters that the threshold search separated.
    let mut owner = vec![0usize; lambdas.len()];
    for (g, members) in out.iter().enumerate() {
        for &i in members {
            owner[i] = g;
        }
    }
    let mut uf = UnionFind::new(out.len());
    for members in &base {
        for w in members.windows(2) {
            uf.union(owner[w[0]], owner[w[1]]);
        }
    }
    let mut merged: Vec<Vec<usize>> = vec![Vec::new(); out.len()];
    for (g, members) in out.into_iter().enumerate() {
        let r = uf.find(g);
        merged[r].extend(members);
    }
    let mut merged: Vec<Vec<usize>> = merged.into_iter().filter(|g| !g.is_empty()).collect();
    for g in &mut merged {
        g.sort_unstable();
    }
    merged.sort_by_key(|g| g[0]);
    merged
}

fn split(
    lambdas: &[C64],
    radii: &[f64],
    theta: &dyn Fn(usize) -> f64,
    members: Vec<usize>,
    level: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let t = theta(level);
    let comps = components(&members, |i, j| (lambdas[i] - lambdas[j]).norm() <= t + radii[i] + radii[j]);
    for comp in comps {
        let k = comp.len();
        if k == 1 || level == 1 {
            if level == 1 && k > 1 {
                let base = cluster_eigs(
                    &comp.iter().map(|&i| lambdas[i]).collect::<Vec<_>>(),
                    &comp.iter().map(|&i| radii[i]).collect::<Vec<_>>(),
                );
                for g in base {
                    out.push(g.into_iter().map(|i| comp[i]).collect());
                }
            } else {
                out.push(comp);
            }
            continue;
        }
        if k <= level && diameter(lambdas, &comp) <= 2.0 * theta(k) {
            out.push(comp);
        } else {
            split(lambdas, radii, theta, comp, (level - 1).min(k - 1).max(1), out);
        }
    }
}

fn diameter(lambdas: &[C64], members: &[usize]) -> f64 {
    let mut d: f64 = 0.0;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            d = d.max((lambdas[i] - lambdas[j]).norm());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn overlapping_discs_merge() {
        let l = [c(1.0), c(1.0 + 1e-14), c(5.0)];
        let r = [1e-10; 3];
        assert_eq!(cluster_eigs(&l, &r), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn transitive_chain_merges() {
        let l = [c(0.0), c(1.0), c(2.0), c(10.0)];
        let r = [0.6; 4];
        assert_eq!(cluster_eigs(&l, &r), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn perturbed_jordan_block_is_grouped() {
        // Eigenvalues of a size-4 block perturbed at the 1e-16 level spread by ~1e-4.
        let eps: f64 = 1e-4;
        let l = [c(1.0 + eps), C64::new(1.0, eps), c(1.0 - eps), C64::new(1.0, -eps), c(3.0)];
        let r = [1e-15; 5];
        assert_eq!(jordan_clusters(&l, &r, 4.0, 8), vec![vec![0, 1, 2, 3], vec![4]]);
    }

    #[test]
    fn separated_eigenvalues_stay_apart() {
        let l: Vec<C64> = (0..6).map(|i| c(i as f64 * 0.3)).collect();
        let r = [1e-15; 6];
        assert_eq!(jordan_clusters(&l, &r, 2.0, 8).len(), 6);
    }
}
