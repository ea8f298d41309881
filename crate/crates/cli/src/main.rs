use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qfactor::commands::{
    bound_sweep_csv, cmd_bound, cmd_canonical, cmd_check, cmd_factor, cmd_gen, cmd_oracle, cmd_verify, error_report,
    Report,
};
use qfactor::report::{parse_factor_pair, parse_matrix};
use qfactor::ComplexMatrix;

/// Decide whether a quadratic matrix is a product of two positive
/// contractions, build the factors, and check certificates.
///
/// Exit codes: 0 ok, 1 error, 2 infeasible, 3 not quadratic.
#[derive(Debug, Parser)]
#[command(name = "qfactor", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Tolerance for feasibility, detection and certificates.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for `gen` and `oracle`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Objective evaluations for the `oracle` grid scan (at least 10^4).
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    /// Input matrix: a JSON matrix document, a report carrying one, or
    /// plain text `n` followed by n rows. Defaults to stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Where to write the report. Defaults to stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide factorability without building factors.
    Check,
    /// Build and certify the two factors.
    Factor,
    /// Canonical form data and the unitary that reaches it.
    Canonical,
    /// Feasibility bound at one point, or a CSV sweep when any range flag is given.
    Bound(BoundArgs),
    /// Brute-force search for 2×2 factors of [[a, z], [0, b]].
    Oracle {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        z: f64,
    },
    /// Check a claimed factorization of the input matrix.
    Verify(VerifyArgs),
    /// Generate a random quadratic matrix with prescribed canonical data.
    Gen {
        #[arg(long, default_value_t = 0)]
        d1: usize,
        #[arg(long, default_value_t = 0)]
        d2: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Comma-separated coupling values, one per coupled pair.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Vec<f64>,
    },
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Sweep range for a, as `lo:hi`.
    #[arg(long, value_parser = parse_range)]
    a_range: Option<(f64, f64)>,
    /// Sweep range for b, as `lo:hi`.
    #[arg(long, value_parser = parse_range)]
    b_range: Option<(f64, f64)>,
    /// Grid intervals per axis for the sweep.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// A `factor` report holding both factors.
    #[arg(long, conflicts_with_all = ["a_input", "b_input"])]
    factors: Option<PathBuf>,
    /// First factor as a matrix file.
    #[arg(long, requires = "b_input")]
    a_input: Option<PathBuf>,
    /// Second factor as a matrix file.
    #[arg(long, requires = "a_input")]
    b_input: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

enum Output {
    Report(Report),
    Csv(String),
}

fn read_text(path: Option<&Path>) -> Result<String, String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| format!("cannot read stdin: {e}"))?;
            Ok(s)
        }
    }
}

fn read_matrix(path: Option<&Path>) -> Result<ComplexMatrix, String> {
    parse_matrix(&read_text(path)?).map_err(|e| e.to_string())
}

fn with_input(name: &str, g: &Global, run: impl FnOnce(&ComplexMatrix) -> Report) -> Report {
    match read_matrix(g.input.as_deref()) {
        Ok(t) => run(&t),
        Err(e) => error_report(name, e),
    }
}

fn verify(g: &Global, args: &VerifyArgs) -> Report {
    let pair = match (&args.factors, &args.a_input, &args.b_input) {
        (Some(f), _, _) => read_text(Some(f)).and_then(|text| parse_factor_pair(&text).map_err(|e| e.to_string())),
        (None, Some(a), Some(b)) => read_matrix(Some(a)).and_then(|a| Ok((a, read_matrix(Some(b))?))),
        _ => Err("verify needs --factors or both --a-input and --b-input".into()),
    };
    match pair {
        Ok((a, b)) => with_input("verify", g, |t| cmd_verify(t, &a, &b, g.tol)),
        Err(e) => error_report("verify", e),
    }
}

fn bound(args: &BoundArgs) -> Output {
    if args.a_range.is_some() || args.b_range.is_some() || args.steps.is_some() {
        let full = (0.0, 1.0);
        return match bound_sweep_csv(args.a_range.unwrap_or(full), args.b_range.unwrap_or(full), args.steps.unwrap_or(10)) {
            Ok(csv) => Output::Csv(csv),
            Err(e) => Output::Report(error_report("bound", e.to_string())),
        };
    }
    match (args.a, args.b) {
        (Some(a), Some(b)) => Output::Report(cmd_bound(a, b)),
        _ => Output::Report(error_report("bound", "bound needs --a and --b, or range flags for a sweep")),
    }
}

fn run(cli: &Cli) -> Output {
    let g = &cli.global;
    let report = match &cli.command {
        Command::Check => with_input("check", g, |t| cmd_check(t, g.tol)),
        Command::Factor => with_input("factor", g, |t| cmd_factor(t, g.tol)),
        Command::Canonical => with_input("canonical", g, |t| cmd_canonical(t, g.tol)),
        Command::Bound(args) => return bound(args),
        Command::Oracle { a, b, z } => cmd_oracle(*a, *b, *z, g.budget, g.seed),
        Command::Verify(args) => verify(g, args),
        Command::Gen { d1, d2, r, a, b, p } => cmd_gen(*d1, *d2, *r, *a, *b, p, g.seed),
    };
    Output::Report(report)
}

fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let report = error_report("usage", e.kind().to_string());
            let _ = emit(&report.to_json(), None);
            return ExitCode::from(1);
        }
    };
    let (text, code) = match run(&cli) {
        Output::Report(r) => (r.to_json(), r.verdict.exit_code()),
        Output::Csv(csv) => (csv, 0),
    };
    if let Err(e) = emit(&text, cli.global.output.as_deref()) {
        eprintln!("qfactor: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
