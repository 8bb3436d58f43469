//! Test matrices: classical gallery families and the small defective and
//! derogatory examples.

use std::str::FromStr;

use matgamma_core::{CMat, C64};
use rand::{Rng, SeedableRng};

use crate::error::CliError;

/// A named family of test matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gallery {
    /// Upper Hessenberg Frank matrix, `a_ij = n + 1 - max(i, j)` for `j >= i - 1`.
    Frank,
    /// `gcd(i, j) / n`.
    Gcdmat,
    /// `min(i, j) / n`.
    Minij,
    /// Five-point Laplacian on a `g x g` grid; order `g^2`.
    Poisson,
    /// `[[1, 1], [0, 1 + eps]]`.
    Ex2,
    /// `sigma A0` with a single 4 x 4 Jordan block at `sigma`.
    Ex3,
    /// `sigma P diag(A0, A0) P^T`.
    Ex4,
    /// Dense matrix with entries uniform in `[-1, 1] / n`, shifted by `param I`.
    Random,
}

impl Gallery {
    pub const ALL: [Gallery; 8] = [
        Gallery::Frank,
        Gallery::Gcdmat,
        Gallery::Minij,
        Gallery::Poisson,
        Gallery::Ex2,
        Gallery::Ex3,
        Gallery::Ex4,
        Gallery::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gallery::Frank => "frank",
            Gallery::Gcdmat => "gcdmat",
            Gallery::Minij => "minij",
            Gallery::Poisson => "poisson",
            Gallery::Ex2 => "ex2",
            Gallery::Ex3 => "ex3",
            Gallery::Ex4 => "ex4",
            Gallery::Random => "random",
        }
    }

    /// Parameter used when none is given.
    pub fn default_param(self) -> f64 {
        match self {
            Gallery::Ex2 => 2f64.powi(-48),
            Gallery::Ex3 | Gallery::Ex4 => 1.0,
            Gallery::Random => 2.0,
            _ => 0.0,
        }
    }
}

impl FromStr for Gallery {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Gallery::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CliError::Usage(format!("unknown gallery '{s}'")))
    }
}

fn real(n: usize, f: impl Fn(usize, usize) -> f64) -> CMat {
    CMat::from_fn(n, n, |i, j| C64::new(f(i, j), 0.0))
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The 4 x 4 matrix whose Jordan form is a single block at 1.
pub fn a0() -> CMat {
    let rows = [[2.0, 2.0, 1.0, 0.0], [0.0, 1.0, 1.0, 1.0], [-1.0, -1.0, 0.0, 0.0], [1.0, 1.0, 1.0, 1.0]];
    real(4, |i, j| rows[i][j])
}

/// Permutation `[e7, e5, e3, e1, e8, e6, e4, e2]`.
pub fn ex4_permutation() -> CMat {
    const COLS: [usize; 8] = [6, 4, 2, 0, 7, 5, 3, 1];
    real(8, |i, j| if COLS[j] == i { 1.0 } else { 0.0 })
}

/// Builds a gallery matrix. `n` is the order except for `poisson`, where it
/// is the grid side, and `ex2`/`ex3`/`ex4`, whose order is fixed.
pub fn generate(gallery: Gallery, n: usize, param: f64, seed: u64) -> Result<CMat, CliError> {
    let fixed = matches!(gallery, Gallery::Ex2 | Gallery::Ex3 | Gallery::Ex4);
    if n == 0 && !fixed {
        return Err(CliError::Usage("matrix size must be at least 1".into()));
    }
    if !param.is_finite() {
        return Err(CliError::Usage("gallery parameter must be finite".into()));
    }
    let nf = n as f64;
    Ok(match gallery {
        Gallery::Frank => real(n, |i, j| if j + 1 >= i { (n - i.max(j)) as f64 } else { 0.0 }),
        Gallery::Gcdmat => real(n, |i, j| gcd(i + 1, j + 1) as f64 / nf),
        Gallery::Minij => real(n, |i, j| (i.min(j) + 1) as f64 / nf),
        Gallery::Poisson => {
            let g = n;
            real(g * g, |r, c| {
                let (ri, rj, ci, cj) = (r / g, r % g, c / g, c % g);
                if r == c {
                    4.0
                } else if (ri == ci && rj.abs_diff(cj) == 1) || (rj == cj && ri.abs_diff(ci) == 1) {
                    -1.0
                } else {
                    0.0
                }
            })
        }
        Gallery::Ex2 => real(2, |i, j| match (i, j) {
            (0, _) => 1.0,
            (1, 1) => 1.0 + param,
            _ => 0.0,
        }),
        Gallery::Ex3 => a0().map(|z| z * param),
        Gallery::Ex4 => {
            let p = ex4_permutation();
            let mut d = CMat::zeros(8, 8);
            d.view_mut((0, 0), (4, 4)).copy_from(&a0());
            d.view_mut((4, 4), (4, 4)).copy_from(&a0());
            // Permutation products are exact.
            (&p * d * p.transpose()).map(|z| z * param)
        }
        Gallery::Random => {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut a = real(n, |_, _| 0.0);
            for z in a.iter_mut() {
                *z = C64::new(rng.gen_range(-1.0..=1.0) / nf, 0.0);
            }
            for i in 0..n {
                a[(i, i)] += param;
            }
            a
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ex3_is_a0() {
        assert_eq!(generate(Gallery::Ex3, 4, 1.0, 0).unwrap(), a0());
    }

    #[test]
    fn minij_small() {
        let m = generate(Gallery::Minij, 3, 0.0, 0).unwrap();
        let expect = real(3, |i, j| [[1.0, 1.0, 1.0], [1.0, 2.0, 2.0], [1.0, 2.0, 3.0]][i][j] / 3.0);
        assert_eq!(m, expect);
    }

    #[test]
    fn frank_small() {
        let f = generate(Gallery::Frank, 3, 0.0, 0).unwrap();
        let expect = real(3, |i, j| [[3.0, 2.0, 1.0], [2.0, 2.0, 1.0], [0.0, 1.0, 1.0]][i][j]);
        assert_eq!(f, expect);
    }

    #[test]
    fn permutation_is_orthogonal() {
        let p = ex4_permutation();
        assert_eq!(p.transpose() * &p, CMat::identity(8, 8));
    }

    #[test]
    fn poisson_order_and_symmetry() {
        let a = generate(Gallery::Poisson, 3, 0.0, 0).unwrap();
        assert_eq!(a.nrows(), 9);
        assert_eq!(a, a.transpose());
        assert_eq!(a[(0, 1)], C64::new(-1.0, 0.0));
        assert_eq!(a[(2, 3)], C64::new(0.0, 0.0));
    }

    #[test]
    fn deterministic() {
        for g in Gallery::ALL {
            let n = if g == Gallery::Poisson { 3 } else { 6 };
            let p = g.default_param();
            assert_eq!(generate(g, n, p, 7).unwrap(), generate(g, n, p, 7).unwrap());
        }
    }

    #[test]
    fn names_round_trip() {
        for g in Gallery::ALL {
            assert_eq!(g.name().parse::<Gallery>().unwrap(), g);
        }
        assert!("hilb".parse::<Gallery>().is_err());
    }
}
