//! Helpers shared by the integration tests: frozen reference matrices and
//! the functional-equation check.
#![allow(dead_code)]

use matgamma::gallery::{ex4_permutation, generate, Gallery};
use matgamma_core::driver::{gamma_with, DriverOptions, Method, NoClock, Sequential};
use matgamma_core::round::two_sum;
use matgamma_core::{CMat, IntervalMatrix, C64};
use serde_json::Value;

/// A reference `Gamma(A)` for a gallery matrix.
pub struct OracleCase {
    pub gallery: Gallery,
    pub n: usize,
    pub param: f64,
    pub gamma: CMat,
}

impl OracleCase {
    pub fn matrix(&self) -> CMat {
        generate(self.gallery, self.n, self.param, 0).unwrap()
    }
}

fn parse_matrix(re: &Value, im: &Value) -> CMat {
    let re = re.as_array().unwrap();
    let im = im.as_array().unwrap();
    let n = re.len();
    let at = |m: &[Value], i: usize, j: usize| m[i][j].as_str().unwrap().parse::<f64>().unwrap();
    CMat::from_fn(n, n, |i, j| C64::new(at(re, i, j), at(im, i, j)))
}

pub fn oracle_cases() -> Vec<OracleCase> {
    let data: Value = serde_json::from_str(include_str!("../fixtures/matrix_gamma.json")).unwrap();
    data["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let gallery: Gallery = c["gallery"].as_str().unwrap().parse().unwrap();
            OracleCase {
                gallery,
                n: c["n"].as_u64().unwrap() as usize,
                param: c["param"].as_f64().unwrap_or_else(|| gallery.default_param()),
                gamma: parse_matrix(&c["real"], &c["imag"]),
            }
        })
        .collect()
}

pub fn oracle(gallery: Gallery, n: usize, param: f64) -> CMat {
    oracle_cases()
        .into_iter()
        .find(|c| c.gallery == gallery && c.n == n && c.param == param)
        .unwrap_or_else(|| panic!("no reference for {} n={n} param={param}", gallery.name()))
        .gamma
}

/// `P diag(G, G) P^T` with `G = Gamma(sigma A0)`; exact in floating point.
pub fn ex4_oracle(sigma: f64) -> CMat {
    let g = oracle(Gallery::Ex3, 0, sigma);
    let mut d = CMat::zeros(8, 8);
    d.view_mut((0, 0), (4, 4)).copy_from(&g);
    d.view_mut((4, 4), (4, 4)).copy_from(&g);
    let p = ex4_permutation();
    &p * d * p.transpose()
}

/// Gallery cases used for the corpus-wide properties.
pub fn corpus(max_n: usize) -> Vec<(Gallery, usize, f64)> {
    let mut cases = vec![
        (Gallery::Frank, 5),
        (Gallery::Frank, 7),
        (Gallery::Frank, 9),
        (Gallery::Poisson, 3),
        (Gallery::Poisson, 6),
    ]
    .into_iter()
    .map(|(g, n)| (g, n, g.default_param()))
    .collect::<Vec<_>>();
    for n in [10, 50, 100, 200] {
        if n <= max_n {
            cases.push((Gallery::Gcdmat, n, Gallery::Gcdmat.default_param()));
            cases.push((Gallery::Minij, n, Gallery::Minij.default_param()));
        }
    }
    cases.push((Gallery::Ex2, 0, 2f64.powi(-48)));
    for sigma in [0.5, 1.0, 2.0] {
        cases.push((Gallery::Ex3, 0, sigma));
        cases.push((Gallery::Ex4, 0, sigma));
    }
    cases.push((Gallery::Random, 12, 3.0));
    cases
}

pub fn run(a: &CMat, method: Method) -> matgamma_core::Result<IntervalMatrix> {
    gamma_with(a, method, &DriverOptions::default(), &Sequential, &NoClock).map(|r| r.enclosure)
}

/// Outcome of checking `Gamma(A + I) = A Gamma(A)` on enclosures.
#[derive(Debug, PartialEq, Eq)]
pub enum Functional {
    Holds,
    Violated,
    /// One of the two enclosures could not be computed.
    Skipped,
}

/// Replaces `A` by a nearby `A'` for which `A' + I` is exact in binary64,
/// then checks that the enclosures of `Gamma(A' + I)` and `A' Gamma(A')`
/// intersect entrywise.
pub fn functional_equation(a: &CMat, method: Method) -> Functional {
    let n = a.nrows();
    let mut a = a.clone();
    for i in 0..n {
        let shifted = a[(i, i)].re + 1.0;
        a[(i, i)].re = shifted - 1.0;
        assert_eq!(two_sum(a[(i, i)].re, 1.0).1, 0.0, "diagonal shift not exact");
    }
    let shifted = &a + CMat::identity(n, n);
    let (Ok(g), Ok(g1)) = (run(&a, method), run(&shifted, method)) else {
        return Functional::Skipped;
    };
    let rhs = IntervalMatrix::point(a).mul(&g).unwrap();
    if g1.intersects(&rhs) {
        Functional::Holds
    } else {
        Functional::Violated
    }
}
