use std::cell::Cell;

use matgamma_core::driver::{
    gamma_auto, gamma_jordan, gamma_spectral, gamma_with, BlockExecutor, Clock, DriverOptions, Method, Sequential,
};
use matgamma_core::linalg::Block;
use matgamma_core::{CMat, IntervalMatrix, Result, Stage, C64};
use proptest::prelude::*;

fn real(n: usize, f: impl Fn(usize, usize) -> f64) -> CMat {
    CMat::from_fn(n, n, |i, j| C64::new(f(i, j), 0.0))
}

/// `Gamma(A + I)` and `A Gamma(A)` must overlap entrywise.
fn functional_equation_holds(a: &CMat, method: Method) -> bool {
    let opts = DriverOptions::default();
    let g = gamma_with(a, method, &opts, &Sequential, &matgamma_core::driver::NoClock).unwrap();
    let shifted = a + CMat::identity(a.nrows(), a.ncols());
    let g1 = gamma_with(&shifted, method, &opts, &Sequential, &matgamma_core::driver::NoClock).unwrap();
    let rhs = IntervalMatrix::point(a.clone()).mul(&g.enclosure).unwrap();
    g1.enclosure.intersects(&rhs)
}

#[test]
fn negative_spectrum_uses_reduction() {
    // Eigenvalues near -3.3 and -0.6: both lie left of the direct region.
    let a = real(2, |i, j| [[-3.3, 0.25], [0.0, -0.6]][i][j]);
    let r = gamma_spectral(&a).unwrap();
    assert!(r.rr < 1e-10, "rr = {}", r.rr);
    assert!(functional_equation_holds(&a, Method::Spectral));
}

#[test]
fn large_spectrum_uses_reduction() {
    let a = real(3, |i, j| if i == j { 11.5 + i as f64 } else { 0.1 / (1 + i + j) as f64 });
    let r = gamma_spectral(&a).unwrap();
    assert!(r.rr < 1e-10, "rr = {}", r.rr);
    assert!(functional_equation_holds(&a, Method::Spectral));
}

#[test]
fn complex_input_with_conjugate_pair() {
    // Rotation-like block with eigenvalues 2 +- i.
    let a = real(2, |i, j| [[2.0, 1.0], [-1.0, 2.0]][i][j]);
    let r = gamma_spectral(&a).unwrap();
    let g = matgamma_core::gamma::gamma(matgamma_core::Disc::point(C64::new(2.0, 1.0))).unwrap();
    // Gamma(A) = [[Re g, Im g], [-Im g, Re g]] for this normal matrix.
    let mid = r.enclosure.get(0, 0);
    assert!(mid.intersects(&matgamma_core::Disc::new(C64::new(g.mid().re, 0.0), g.rad()).unwrap()));
    assert!(r.enclosure.get(0, 1).intersects(&matgamma_core::Disc::new(C64::new(g.mid().im, 0.0), g.rad()).unwrap()));
    assert!(r.rr < 1e-12);
}

#[test]
fn nontrivial_jordan_structure() {
    // Two Jordan blocks at 1.5 (sizes 2 and 1) hidden by a similarity.
    let j = real(3, |i, k| [[1.5, 1.0, 0.0], [0.0, 1.5, 0.0], [0.0, 0.0, 1.5]][i][k]);
    let s = real(3, |i, k| [[1.0, 2.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]][i][k]);
    let s_inv = s.clone().try_inverse().unwrap();
    let a = &s * &j * &s_inv;
    assert!(gamma_spectral(&a).is_err());
    let r = gamma_jordan(&a, None).unwrap();
    assert!(r.rr < 1e-8, "rr = {}", r.rr);
    let hinted = gamma_jordan(&a, Some(&[2, 1])).unwrap();
    assert!(hinted.enclosure.intersects(&r.enclosure));
    assert!(gamma_jordan(&a, Some(&[1, 1])).is_err());
    assert!(functional_equation_holds(&a, Method::Jordan));
}

#[test]
fn auto_keeps_spectral_when_it_works() {
    let r = gamma_auto(&real(2, |i, j| [[1.0, 0.5], [0.0, 3.0]][i][j])).unwrap();
    assert_eq!(r.method, Method::Spectral);
}

#[test]
fn failures_are_attributed_to_their_phase() {
    let guard = gamma_auto(&real(2, |i, j| [[-1.0, 0.0], [0.0, 2.0]][i][j])).unwrap_err();
    assert_eq!(guard.stage(), Stage::Guard);
    // A tiny, well-separated spectrum beside a pole at zero: blocks are fine,
    // the guard is what refuses.
    let near_pole = gamma_spectral(&real(1, |_, _| 1e-300)).map(|r| r.rr);
    assert!(near_pole.is_ok() || near_pole.unwrap_err().stage() != Stage::Vbd);
}

struct CountingExecutor {
    calls: Cell<usize>,
}

impl BlockExecutor for CountingExecutor {
    fn run(
        &self,
        blocks: &[Block],
        job: &(dyn Fn(&Block) -> Result<IntervalMatrix> + Sync),
    ) -> Vec<Result<IntervalMatrix>> {
        self.calls.set(self.calls.get() + blocks.len());
        blocks.iter().rev().map(job).collect::<Vec<_>>().into_iter().rev().collect()
    }
}

struct StepClock(Cell<f64>);

impl Clock for StepClock {
    fn seconds(&self) -> f64 {
        let t = self.0.get();
        self.0.set(t + 1.0);
        t
    }
}

#[test]
fn executor_and_clock_are_pluggable() {
    let a = real(4, |i, j| if i == j { 1.0 + i as f64 } else { 0.05 });
    let exec = CountingExecutor { calls: Cell::new(0) };
    let clock = StepClock(Cell::new(0.0));
    let r = gamma_with(&a, Method::Spectral, &DriverOptions::default(), &exec, &clock).unwrap();
    assert_eq!(exec.calls.get(), r.block_dims.len());
    assert_eq!(r.timings.total(), 4.0);
    let plain = gamma_spectral(&a).unwrap();
    assert_eq!(plain.enclosure, r.enclosure);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn functional_equation_on_random_matrices(
        diag in proptest::collection::vec(0.3f64..6.0, 4),
        off in proptest::collection::vec(-0.2f64..0.2, 16),
    ) {
        let a = real(4, |i, j| if i == j { diag[i] + 0.5 * i as f64 } else { off[i * 4 + j] });
        prop_assume!(gamma_spectral(&a).is_ok());
        prop_assert!(functional_equation_holds(&a, Method::Spectral));
    }
}
