//! Certifies that no enclosed eigenvalue is a nonpositive integer.

use crate::interval::Disc;
use crate::round::{hypot_down, sub_down};
use crate::C64;

/// Map sending nonpositive integers to 0:
/// `max(Re, floor(Re) - Re, Re - ceil(Re)) + i Im`.
pub fn guard_point(lambda: C64) -> C64 {
    let x = lambda.re;
    let re = x.max(libm::floor(x) - x).max(x - libm::ceil(x));
    C64::new(re, lambda.im)
}

/// Lower bound on `|guard_point(lambda)|`, i.e. on the distance from
/// `lambda` to the nonpositive integers.
pub fn guard_distance_lower(lambda: C64) -> f64 {
    let x = lambda.re;
    let re = if x >= 0.0 {
        x
    } else {
        let below = sub_down(x, libm::floor(x));
        let above = sub_down(libm::ceil(x), x);
        (-x).min(below).min(above).max(0.0)
    };
    hypot_down(re, lambda.im)
}

/// Lower bound on `min_i (|f(c_i)| - r_i)` over the discs. A positive value
/// certifies that no disc meets `{0, -1, -2, ...}`.
pub fn guard_margin(discs: &[Disc]) -> f64 {
    discs.iter().map(|d| sub_down(guard_distance_lower(d.mid()), d.rad())).fold(f64::INFINITY, f64::min)
}

/// True if every disc certainly avoids the nonpositive integers.
pub fn verify_spectrum(discs: &[Disc]) -> bool {
    discs.iter().all(|d| d.is_valid()) && guard_margin(discs) > 0.0
}
