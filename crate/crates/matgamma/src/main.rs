use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use matgamma::gallery::Gallery;
use matgamma::{run, CliError, ExitStatus, OutputFormat, RunConfig, Source};
use matgamma_core::driver::Method;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Spectral,
    Jordan,
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

/// Verified enclosure of the gamma function of a square matrix.
#[derive(Debug, Parser)]
#[command(name = "matgamma", version)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["input", "gallery"]))]
struct Args {
    /// Matrix Market (.mtx) or JSON (.json) matrix file.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Test matrix family: frank, gcdmat, minij, poisson, ex2, ex3, ex4, random.
    #[arg(long, value_name = "NAME")]
    gallery: Option<String>,
    /// Order of the gallery matrix (grid side for poisson; ignored by ex2, ex3, ex4).
    #[arg(long, value_name = "INT")]
    n: Option<usize>,
    /// Gallery parameter (sigma for ex3/ex4, eps for ex2, shift for random).
    #[arg(long, value_name = "FLOAT", allow_negative_numbers = true)]
    param: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Jordan block sizes for the whole matrix, e.g. 2,1,1.
    #[arg(long, value_name = "a,b,c", value_delimiter = ',')]
    jordan_hint: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Threads for the per-block phase.
    #[arg(long, value_name = "INT", default_value_t = 1)]
    parallel: usize,
    /// Seed for randomized galleries.
    #[arg(long, value_name = "INT", default_value_t = 0)]
    seed: u64,
    /// Reference Gamma(A) to check the enclosure against.
    #[arg(long, value_name = "PATH")]
    oracle: Option<PathBuf>,
}

fn config(args: Args) -> Result<RunConfig, CliError> {
    let source = match (args.input, args.gallery) {
        (Some(path), None) => Source::File(path),
        (None, Some(name)) => {
            let gallery: Gallery = name.parse()?;
            let fixed = matches!(gallery, Gallery::Ex2 | Gallery::Ex3 | Gallery::Ex4);
            let n = match args.n {
                Some(n) => n,
                None if fixed => 0,
                None => return Err(CliError::Usage(format!("--gallery {name} needs --n"))),
            };
            Source::Gallery { gallery, n, param: args.param }
        }
        _ => return Err(CliError::Usage("give exactly one of --input and --gallery".into())),
    };
    let method = match args.method {
        MethodArg::Spectral => Method::Spectral,
        MethodArg::Jordan => Method::Jordan,
        MethodArg::Auto => Method::Auto,
    };
    let format = match args.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Text => OutputFormat::Text,
    };
    Ok(RunConfig {
        source,
        method,
        jordan_hint: args.jordan_hint,
        format,
        parallel: args.parallel,
        seed: args.seed,
        oracle: args.oracle,
    })
}

fn main() -> ExitCode {
    // Usage errors must not reuse the status codes of the enclosure phases.
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(ExitStatus::Other.code() as u8) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = config(args).and_then(|cfg| run(&cfg).map(|r| (cfg.format, r)));
    match outcome {
        Ok((format, (status, report))) => {
            match format {
                OutputFormat::Json => println!("{}", report.to_json()),
                OutputFormat::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(status.code() as u8)
        }
        Err(err) => {
            eprintln!("matgamma: {err}");
            ExitCode::from(ExitStatus::Other.code() as u8)
        }
    }
}
