//! One batch run: load or generate a matrix, enclose `Gamma(A)`, report.

use std::path::PathBuf;
use std::time::Instant;

use matgamma_core::driver::{gamma_with, BlockExecutor, Clock, DriverOptions, Method, Sequential};
use matgamma_core::linalg::Block;
use matgamma_core::{CMat, IntervalMatrix};
use rayon::prelude::*;

use crate::error::{CliError, ExitStatus};
use crate::gallery::{generate, Gallery};
use crate::io::read_matrix;
use crate::report::Report;

/// Where the input matrix comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    File(PathBuf),
    Gallery { gallery: Gallery, n: usize, param: Option<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub method: Method,
    pub jordan_hint: Option<Vec<usize>>,
    pub format: OutputFormat,
    /// Worker threads for the per-block phase; 0 or 1 runs sequentially.
    pub parallel: usize,
    pub seed: u64,
    /// Reference `Gamma(A)` to check the enclosure against.
    pub oracle: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(source: Source, method: Method) -> Self {
        RunConfig { source, method, jordan_hint: None, format: OutputFormat::Json, parallel: 0, seed: 0, oracle: None }
    }
}

/// Wall clock measured from construction.
#[derive(Clone, Copy, Debug)]
pub struct WallClock(Instant);

impl Default for WallClock {
    fn default() -> Self {
        WallClock(Instant::now())
    }
}

impl Clock for WallClock {
    fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// Runs block enclosures on a dedicated thread pool.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    pub fn new(threads: usize) -> Result<Self, CliError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))?;
        Ok(RayonExecutor { pool })
    }
}

impl BlockExecutor for RayonExecutor {
    fn run(
        &self,
        blocks: &[Block],
        job: &(dyn Fn(&Block) -> matgamma_core::Result<IntervalMatrix> + Sync),
    ) -> Vec<matgamma_core::Result<IntervalMatrix>> {
        self.pool.install(|| blocks.par_iter().map(job).collect())
    }
}

/// Produces the input matrix described by `source`.
pub fn load(source: &Source, seed: u64) -> Result<CMat, CliError> {
    match source {
        Source::File(path) => read_matrix(path),
        Source::Gallery { gallery, n, param } => generate(*gallery, *n, param.unwrap_or(gallery.default_param()), seed),
    }
}

/// Executes `config`. Input and setup errors are returned as `Err`;
/// failures of the enclosure itself become a report with a nonzero status.
pub fn run(config: &RunConfig) -> Result<(ExitStatus, Report), CliError> {
    let a = load(&config.source, config.seed)?;
    let oracle = config.oracle.as_deref().map(read_matrix).transpose()?;
    if oracle.as_ref().is_some_and(|o| o.shape() != a.shape()) {
        return Err(CliError::Usage("oracle and input differ in size".into()));
    }
    let opts = DriverOptions { jordan_hint: config.jordan_hint.clone(), ..DriverOptions::default() };
    let clock = WallClock::default();
    let outcome = if config.parallel > 1 {
        gamma_with(&a, config.method, &opts, &RayonExecutor::new(config.parallel)?, &clock)
    } else {
        gamma_with(&a, config.method, &opts, &Sequential, &clock)
    };
    let n = a.nrows();
    Ok(match outcome {
        Ok(result) => {
            let mut report = Report::success(n, &result);
            report.oracle_contained = oracle.map(|o| crate::report::oracle_contained(&result.enclosure, &o));
            (ExitStatus::Success, report)
        }
        Err(err) => {
            let status = ExitStatus::of(&err);
            (status, Report::failure(n, config.method, status, err.to_string()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frank_succeeds_and_ex3_is_rejected() {
        let (status, report) =
            run(&RunConfig::new(Source::Gallery { gallery: Gallery::Frank, n: 5, param: None }, Method::Spectral))
                .unwrap();
        assert_eq!(status, ExitStatus::Success);
        assert!(report.spectrum_verified && report.rr.unwrap() < 1e-8);
        let (status, report) =
            run(&RunConfig::new(Source::Gallery { gallery: Gallery::Ex3, n: 4, param: Some(1.0) }, Method::Spectral))
                .unwrap();
        assert_eq!(status, ExitStatus::VbdFailure);
        assert!(!report.spectrum_verified && report.mid.is_empty());
    }

    #[test]
    fn parallel_matches_sequential() {
        let source = Source::Gallery { gallery: Gallery::Minij, n: 12, param: None };
        let seq = run(&RunConfig::new(source.clone(), Method::Spectral)).unwrap().1;
        let par = run(&RunConfig { parallel: 3, ..RunConfig::new(source, Method::Spectral) }).unwrap().1;
        assert_eq!(seq.mid, par.mid);
        assert_eq!(seq.rad, par.rad);
    }
}
