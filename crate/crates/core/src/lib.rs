//! Verified enclosures of the gamma function of complex matrices.
//!
//! Everything here is `no_std` with `alloc`. Enclosures are midpoint-radius
//! discs and interval matrices whose radii are rounded upward without
//! switching the floating-point rounding mode.

#![no_std]
// `!(x > 0.0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod block;
pub mod driver;
pub mod error;
pub mod gamma;
pub mod guard;
pub mod interval;
pub mod linalg;
pub mod round;

pub use error::{Error, Result, Stage};
pub use interval::{Disc, IntervalMatrix, RealInterval};

/// Complex double.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense real matrix.
pub type RMat = nalgebra::DMatrix<f64>;
