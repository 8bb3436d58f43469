//! Verified linear algebra: linear systems, numerical decompositions and
//! verified block diagonalization.

mod cluster;
mod jordan;
mod schur;
mod solve;
mod vbd;

pub use cluster::{cluster_eigs, jordan_clusters};
pub use jordan::{jordan_chains, jordan_sizes};
pub use schur::{reorder_schur, schur, swap_adjacent, sylvester_upper, triangular_eigenvectors};
pub use solve::{verified_solve, verify_nonsingular, VerifiedSolver};

pub use vbd::{nilpotent, vbd_jordan, vbd_spectral, verify_blocks, Block, Group, VbdOptions, VbdResult};
