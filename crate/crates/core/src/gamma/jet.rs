use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::interval::Disc;

/// Product of two truncated Taylor series, keeping terms up to `order`.
pub fn jet_mul(a: &[Disc], b: &[Disc], order: usize) -> Vec<Disc> {
    let mut out = vec![Disc::ZERO; order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] = out[i + j] + *ai * *bj;
        }
    }
    out
}

/// Reciprocal of a truncated Taylor series whose constant term excludes 0.
pub fn jet_recip(f: &[Disc], order: usize) -> Result<Vec<Disc>> {
    let inv0 = f[0].recip()?;
    let mut g = vec![Disc::ZERO; order + 1];
    g[0] = inv0;
    for k in 1..=order {
        let mut acc = Disc::ZERO;
        for i in 1..=k.min(f.len() - 1) {
            acc = acc + f[i] * g[k - i];
        }
        g[k] = -(acc * inv0);
    }
    Ok(g)
}
