//! `gntt` command-line frontend.
//!
//! Exit codes: 0 success, 1 domain or validation failure, 2 usage error.
//! Machine-readable output goes to stdout and diagnostics to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gntt_core::bench::{
    emit_report, run_suite, BenchError, ParamSuite, ReportFormat, DEFAULT_ITERS,
};
use gntt_core::modarith::validate_params;
use gntt_core::{
    make_engine, nwc_schoolbook, random_polynomial, EngineKind, NttEngine, NttError, NttParams,
    PolyFile, Polynomial,
};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "gntt", about = "Negacyclic NTT engines and benchmark harness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameter validation.
    Params {
        #[command(subcommand)]
        action: ParamsAction,
    },
    /// Print psi, psi^-1 and n^-1 for a ring.
    Roots(Ring),
    /// Multiply two polynomial files.
    Mul(MulArgs),
    /// Cross-engine equivalence against the schoolbook product.
    Verify(VerifyArgs),
    /// Time engines over a parameter suite and emit a report.
    Bench(BenchArgs),
}

#[derive(Debug, Subcommand)]
pub enum ParamsAction {
    /// Check that (q, n) supports a negacyclic NTT.
    Check(Ring),
}

#[derive(Debug, Args)]
pub struct Ring {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct MulArgs {
    #[command(flatten)]
    pub ring: Ring,
    #[arg(long, default_value = "matrix_lut")]
    pub engine: EngineKind,
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Cross-check the product against the schoolbook oracle.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = ["pqc", "he"])]
    pub suite: String,
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_parser = ["pqc", "he", "all"], default_value = "pqc")]
    pub suite: String,
    /// Comma-separated engine list.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "fast,matrix_naive,matrix_lut,matrix_wide"
    )]
    pub engines: Vec<EngineKind>,
    #[arg(long, default_value_t = DEFAULT_ITERS)]
    pub iters: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_parser = ["table", "csv", "json"], default_value = "table")]
    pub format: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ntt(#[from] NttError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("verification failed: {engine} product disagrees with schoolbook")]
    VerifyFailed { engine: EngineKind },
    #[error("equivalence failed at {failed} of {total} parameter points")]
    EquivalenceFailed { failed: usize, total: usize },
}

fn read_poly(path: &Path, params: &NttParams) -> Result<Polynomial, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let file = PolyFile::parse(&text).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(file.into_polynomial(params)?)
}

fn write_output(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::File {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => {
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

/// Multiplies with `engine`; with `verify`, also recomputes the schoolbook
/// product and fails on any difference.
pub fn multiply(
    engine: &dyn NttEngine,
    a: &Polynomial,
    b: &Polynomial,
    verify: bool,
) -> Result<Polynomial, CliError> {
    let product = engine.polymul(a, b)?;
    if verify && product != nwc_schoolbook(a, b)? {
        return Err(CliError::VerifyFailed {
            engine: engine.kind(),
        });
    }
    Ok(product)
}

fn cmd_mul(args: &MulArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let params = NttParams::new(args.ring.q, args.ring.n)?;
    let a = read_poly(&args.a, &params)?;
    let b = read_poly(&args.b, &params)?;
    let engine = make_engine(args.engine, &params);
    let product = multiply(&engine, &a, &b, args.verify)?;
    let mut text = PolyFile::from_polynomial(&product).to_json();
    text.push('\n');
    write_output(&args.out, &text, stdout)
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let suite: ParamSuite = args.suite.parse()?;
    let mut failed = 0;
    for &(q, n) in &suite.entries {
        let params = NttParams::new(q, n)?;
        let engines: Vec<_> = EngineKind::ALL
            .iter()
            .map(|&k| make_engine(k, &params))
            .collect();
        let mut bad: Vec<EngineKind> = Vec::new();
        for t in 0..args.trials {
            let a = random_polynomial(&params, 2 * t);
            let b = random_polynomial(&params, 2 * t + 1);
            let expected = nwc_schoolbook(&a, &b)?;
            for e in &engines {
                if !bad.contains(&e.kind()) && e.polymul(&a, &b)? != expected {
                    bad.push(e.kind());
                }
            }
        }
        if bad.is_empty() {
            let _ = writeln!(stdout, "PASS q={q} n={n} trials={}", args.trials);
        } else {
            failed += 1;
            let names: Vec<&str> = bad.iter().map(|k| k.name()).collect();
            let _ = writeln!(stdout, "FAIL q={q} n={n} engines={}", names.join(","));
        }
    }
    if failed > 0 {
        return Err(CliError::EquivalenceFailed {
            failed,
            total: suite.entries.len(),
        });
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let suite: ParamSuite = args.suite.parse()?;
    let format: ReportFormat = args.format.parse()?;
    let report = run_suite(&suite, &args.engines, args.iters, args.seed)?;
    write_output(&args.out, &emit_report(&report, format), stdout)
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Params {
            action: ParamsAction::Check(ring),
        } => {
            validate_params(ring.q, ring.n)?;
            let _ = writeln!(stdout, "ok");
            Ok(())
        }
        Command::Roots(ring) => {
            let p = NttParams::new(ring.q, ring.n)?;
            let _ = writeln!(
                stdout,
                "psi={}\npsi_inv={}\nn_inv={}",
                p.psi(),
                p.psi_inv(),
                p.n_inv()
            );
            Ok(())
        }
        Command::Mul(args) => cmd_mul(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout),
        Command::Bench(args) => cmd_bench(args, stdout),
    }
}

/// Parses `argv` (including the program name) and runs it; returns the exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
