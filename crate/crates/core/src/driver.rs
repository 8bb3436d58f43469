//! End-to-end enclosure of `Gamma(A)`: block diagonalization, spectrum
//! guard, per-block enclosures and reassembly `W diag(Gamma_j) W^{-1}`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::block::enclose_block_gamma;
use crate::error::{Error, Result, Stage};
use crate::guard::verify_spectrum;
use crate::interval::IntervalMatrix;
use crate::linalg::{vbd_jordan, vbd_spectral, Block, VbdOptions, VbdResult};
use crate::CMat;

/// Which decomposition the driver uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Spectral,
    Jordan,
    /// Spectral first, Jordan if that fails.
    Auto,
}

/// Monotonic time source in seconds. `no_std` callers may use [`NoClock`].
pub trait Clock {
    fn seconds(&self) -> f64;
}

/// Clock that always reads zero.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn seconds(&self) -> f64 {
        0.0
    }
}

/// Runs the per-block enclosures, possibly in parallel.
pub trait BlockExecutor {
    fn run(
        &self,
        blocks: &[Block],
        job: &(dyn Fn(&Block) -> Result<IntervalMatrix> + Sync),
    ) -> Vec<Result<IntervalMatrix>>;
}

/// Executes blocks one after another.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl BlockExecutor for Sequential {
    fn run(
        &self,
        blocks: &[Block],
        job: &(dyn Fn(&Block) -> Result<IntervalMatrix> + Sync),
    ) -> Vec<Result<IntervalMatrix>> {
        blocks.iter().map(job).collect()
    }
}

/// Wall time per phase in seconds.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Timings {
    pub vbd: f64,
    pub guard: f64,
    pub blocks: f64,
    pub reassembly: f64,
}

impl Timings {
    pub fn total(&self) -> f64 {
        self.vbd + self.guard + self.blocks + self.reassembly
    }
}

/// A verified enclosure of `Gamma(A)`.
#[derive(Clone, Debug)]
pub struct GammaResult {
    pub enclosure: IntervalMatrix,
    /// Always true: no enclosure is returned unless the guard succeeded.
    pub spectrum_verified: bool,
    /// `Spectral` or `Jordan`, whichever produced the enclosure.
    pub method: Method,
    /// `||rad||_inf / ||mid||_inf`.
    pub rr: f64,
    pub timings: Timings,
    /// Dimensions of the diagonal blocks.
    pub block_dims: Vec<usize>,
}

/// Settings shared by all driver entry points.
#[derive(Clone, Debug, Default)]
pub struct DriverOptions {
    pub vbd: VbdOptions,
    /// Jordan block sizes for the whole matrix, used by the Jordan method.
    pub jordan_hint: Option<Vec<usize>>,
}

/// Encloses `Gamma(A)` using the spectral decomposition.
pub fn gamma_spectral(a: &CMat) -> Result<GammaResult> {
    gamma_with(a, Method::Spectral, &DriverOptions::default(), &Sequential, &NoClock)
}

/// Encloses `Gamma(A)` using a numerical Jordan decomposition.
pub fn gamma_jordan(a: &CMat, hint: Option<&[usize]>) -> Result<GammaResult> {
    let opts = DriverOptions { jordan_hint: hint.map(<[usize]>::to_vec), ..DriverOptions::default() };
    gamma_with(a, Method::Jordan, &opts, &Sequential, &NoClock)
}

/// Spectral method with a Jordan fallback.
pub fn gamma_auto(a: &CMat) -> Result<GammaResult> {
    gamma_with(a, Method::Auto, &DriverOptions::default(), &Sequential, &NoClock)
}

/// Fully configurable entry point.
pub fn gamma_with(
    a: &CMat,
    method: Method,
    opts: &DriverOptions,
    exec: &dyn BlockExecutor,
    clock: &dyn Clock,
) -> Result<GammaResult> {
    match method {
        Method::Spectral | Method::Jordan => run(a, method, opts, exec, clock),
        Method::Auto => match run(a, Method::Spectral, opts, exec, clock) {
            Ok(r) => Ok(r),
            Err(first) => run(a, Method::Jordan, opts, exec, clock).map_err(|second| {
                // A Jordan decomposition failure says less than a spectral
                // failure further down the pipeline.
                if second.stage() == Stage::Vbd && first.stage() != Stage::Vbd {
                    first
                } else {
                    second
                }
            }),
        },
    }
}

fn run(
    a: &CMat,
    method: Method,
    opts: &DriverOptions,
    exec: &dyn BlockExecutor,
    clock: &dyn Clock,
) -> Result<GammaResult> {
    let mut timings = Timings::default();
    let t0 = clock.seconds();
    let vbd = decompose(a, method, opts)?;
    let t1 = clock.seconds();
    timings.vbd = t1 - t0;
    guard(&vbd)?;
    let t2 = clock.seconds();
    timings.guard = t2 - t1;
    let blocks = enclose_blocks(&vbd, exec)?;
    let t3 = clock.seconds();
    timings.blocks = t3 - t2;
    let enclosure = reassemble(&vbd, &blocks)?;
    timings.reassembly = clock.seconds() - t3;
    let rr = relative_radius(&enclosure)?;
    Ok(GammaResult {
        enclosure,
        spectrum_verified: true,
        method,
        rr,
        timings,
        block_dims: vbd.blocks.iter().map(Block::dim).collect(),
    })
}

/// Verified block diagonalization for `method` (`Auto` means spectral).
pub fn decompose(a: &CMat, method: Method, opts: &DriverOptions) -> Result<VbdResult> {
    match method {
        Method::Jordan => vbd_jordan(a, opts.jordan_hint.as_deref(), &opts.vbd),
        _ => vbd_spectral(a, &opts.vbd),
    }
    .map_err(Error::vbd)
}

/// Proves that no eigenvalue is a nonpositive integer.
pub fn guard(vbd: &VbdResult) -> Result<()> {
    if verify_spectrum(&vbd.spectrum_discs()) {
        Ok(())
    } else {
        Err(Error::Guard)
    }
}

/// Encloses `Gamma(P_j)` for every block.
pub fn enclose_blocks(vbd: &VbdResult, exec: &dyn BlockExecutor) -> Result<Vec<IntervalMatrix>> {
    exec.run(&vbd.blocks, &enclose_block_gamma)
        .into_iter()
        .enumerate()
        .map(|(index, r)| r.map_err(|e| Error::Block { index, source: Box::new(e) }))
        .collect()
}

/// `W diag(blocks) W^{-1}`, computed as `W Z` with `W^T Z^T = diag(blocks)^T`.
pub fn reassemble(vbd: &VbdResult, blocks: &[IntervalMatrix]) -> Result<IntervalMatrix> {
    let inner = || -> Result<IntervalMatrix> {
        let d = IntervalMatrix::block_diag(blocks);
        if d.nrows() != vbd.dim() {
            return Err(Error::Dimension("blocks do not cover the basis"));
        }
        let zt = vbd.w_transpose_solver().solve(&d.transpose())?;
        vbd.w.mul(&zt.transpose())?.checked()
    };
    inner().map_err(|e| Error::Reassembly(Box::new(e)))
}

/// `||rad||_inf` rounded up over `||mid||_inf` rounded down, rounded up.
pub fn relative_radius(enclosure: &IntervalMatrix) -> Result<f64> {
    let num = enclosure.rad_norm_inf_up();
    let den = IntervalMatrix::point(enclosure.mid().clone()).norm_inf_down();
    if !(den > 0.0) {
        return Err(Error::Precondition("relative radius of a zero midpoint"));
    }
    Ok(crate::round::div_up(num, den))
}
