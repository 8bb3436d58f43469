//! Plain floating-point helpers on dense matrices.

use crate::round::hypot_up;
use crate::{CMat, RMat, C64};

pub fn split(a: &CMat) -> (RMat, RMat) {
    (a.map(|z| z.re), a.map(|z| z.im))
}

pub fn join(re: &RMat, im: &RMat) -> CMat {
    re.zip_map(im, C64::new)
}

/// Round-to-nearest complex product computed with four real products.
pub fn cmul(a: &CMat, b: &CMat) -> CMat {
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    cmul_split(&ar, &ai, &br, &bi)
}

pub(crate) fn cmul_split(ar: &RMat, ai: &RMat, br: &RMat, bi: &RMat) -> CMat {
    let re = ar * br - ai * bi;
    let im = ar * bi + ai * br;
    join(&re, &im)
}

/// Elementwise upper bound on `|a_ij|`.
pub fn abs_up(a: &CMat) -> RMat {
    a.map(|z| hypot_up(z.re, z.im))
}

/// Elementwise `|a_ij|` rounded to nearest.
pub fn abs(a: &CMat) -> RMat {
    a.map(|z| libm::hypot(z.re, z.im))
}

pub fn to_complex(a: &RMat) -> CMat {
    a.map(|x| C64::new(x, 0.0))
}

/// Conjugate transpose.
pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint()
}

/// Numerical inverse via partial-pivoting LU.
pub fn inverse(a: &CMat) -> Option<CMat> {
    a.clone().lu().try_inverse()
}

/// Frobenius norm, used as an upper bound on the spectral norm.
pub fn frobenius(a: &CMat) -> f64 {
    libm::sqrt(a.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

pub fn norm_inf(a: &CMat) -> f64 {
    (0..a.nrows()).map(|i| a.row(i).iter().map(|z| libm::hypot(z.re, z.im)).sum::<f64>()).fold(0.0, f64::max)
}
