//! Disc and interval-matrix arithmetic with outward rounding.

pub mod dense;
mod disc;
mod matrix;
mod real;
mod residual;

pub use disc::Disc;
pub use matrix::{cmat_from_rows, IntervalMatrix, NormKind, PreparedLeft};
pub use real::RealInterval;
pub use residual::residual_enclosure;
