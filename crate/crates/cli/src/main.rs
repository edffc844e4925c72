use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lrc_lab::bounds::{emit_curves, BoundName};
use lrc_lab::ensembles::{EnsembleKind, EnsembleSpec};
use lrc_lab::io::{dump_code_file, parse_code_file, CodeFile, MatrixKind};
use lrc_lab::report::{bound_report, curve_csv, sample_report, verify_report, BoundArgs};
use lrc_lab::Error;

/// Bounds, locality verification and random ensembles for locally
/// recoverable codes.
#[derive(Parser)]
#[command(name = "lrc-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a named finite or asymptotic bound.
    Bounds(BoundsCmd),
    /// Compute n, k, d and locality certificates for a code file.
    Verify(VerifyCmd),
    /// Sample asymptotic curves as CSV.
    Curve(CurveCmd),
    /// Draw codes from a random ensemble.
    Sample(SampleCmd),
}

#[derive(Args)]
struct BoundsCmd {
    /// Bound name, e.g. d2, rate_t, gv_asym.
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
    /// k_q oracle for the shortening bound: singleton, plotkin, sphere-packing.
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Args)]
struct VerifyCmd {
    file: PathBuf,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
}

#[derive(Args)]
struct CurveCmd {
    /// Comma-separated bound names.
    #[arg(long, value_delimiter = ',')]
    bounds: Vec<String>,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleCmd {
    /// single, double or expander.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    /// Defaults to the largest dimension the ensemble allows.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    batch: usize,
    /// Write the first sampled parity-check matrix here.
    #[arg(long)]
    dump: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Usage(m) => Failure::Usage(m),
            e => Failure::Lib(e),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn default_k(kind: EnsembleKind, n: usize, r: usize, t: usize) -> usize {
    match kind {
        EnsembleKind::SingleLrc => r * n / (r + 1),
        EnsembleKind::DoubleLrc => {
            let block = (r + 2) * (r + 1) / 2;
            n - (n / block.max(1)) * (r + 1)
        }
        EnsembleKind::ExpanderLrc => n - n * t / (r + 1),
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Bounds(c) => {
            let args = BoundArgs {
                n: c.n,
                k: c.k,
                r: c.r,
                t: c.t,
                q: c.q,
                d: c.d,
                delta: c.delta,
                rate: c.rate,
                oracle: c.oracle,
            };
            Ok(bound_report(&c.name, &args)?.to_json())
        }
        Command::Verify(c) => {
            let file = parse_code_file(&read(&c.file)?)?;
            Ok(verify_report(&file, c.r, c.t)?.to_json())
        }
        Command::Curve(c) => {
            if !(c.step > 0.0 && c.step <= 0.1) {
                return Err(Failure::Usage(format!("--step must lie in (0, 0.1], got {}", c.step)));
            }
            let names = c
                .bounds
                .iter()
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<BoundName>().map_err(|e| Failure::Usage(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            let csv = curve_csv(&emit_curves(&names, c.q, c.r, c.t, c.step)?);
            match c.out {
                Some(path) => {
                    write(&path, &csv)?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
        Command::Sample(c) => {
            let kind: EnsembleKind = c.kind.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let t = if kind == EnsembleKind::SingleLrc { 1 } else { c.t };
            let spec = EnsembleSpec {
                kind,
                n: c.n,
                k: c.k.unwrap_or_else(|| default_k(kind, c.n, c.r, t)),
                r: c.r,
                t,
                q: c.q,
                seed: c.seed,
            };
            let (report, h) = sample_report(spec, c.batch)?;
            if let Some(path) = c.dump {
                let file = CodeFile {
                    kind: MatrixKind::ParityCheck,
                    matrix: h,
                };
                write(&path, &dump_code_file(&file))?;
            }
            Ok(report.to_json())
        }
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("LRC_LAB_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => lrc_lab::configure_threads(n),
            _ => {
                eprintln!("error: LRC_LAB_THREADS must be a positive integer, got `{v}`");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if !out.is_empty() {
                print!("{out}");
                if !out.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_cap() { 4 } else { 3 })
        }
    }
}
