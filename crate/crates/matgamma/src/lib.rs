//! Files, galleries and the batch runner around `matgamma-core`.

pub mod error;
pub mod gallery;
pub mod hexfloat;
pub mod io;
pub mod report;
pub mod runner;

pub use error::{CliError, ExitStatus};
pub use report::Report;
pub use runner::{run, OutputFormat, RunConfig, Source};
