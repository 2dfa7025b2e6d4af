use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rur_core::driver::{solve_detailed, SolveConfig};
use rur_core::generators::{katsura, noon};
use rur_core::output::emit_result;
use rur_core::seqlinalg::HankelMethod;
use rur_core::system::{parse_system, PolySystem};
use rur_core::RurError;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_CERT_FAILED: u8 = 2;
const EXIT_NO_FINITE_SOLUTIONS: u8 = 3;
const EXIT_SOLVER: u8 = 4;

/// Rational univariate representations of zero-dimensional polynomial systems.
#[derive(Parser)]
#[command(name = "rur", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a system and print the result document as JSON.
    Solve(SolveArgs),
    /// Print a benchmark system.
    Gen {
        family: Family,
        k: usize,
    },
    /// Parse a system and print it in normalized form.
    Echo {
        /// Input file; standard input when absent or `-`.
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Katsura,
    Noon,
}

#[derive(Clone, Copy, ValueEnum)]
enum Hankel {
    Gauss,
    Bezoutian,
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Primes computed concurrently [default: available parallelism].
    #[arg(long)]
    threads: Option<usize>,
    /// 0 skips certification, 1 checks every equation, n > 1 checks
    /// equations of total degree below n.
    #[arg(long, default_value_t = 1)]
    certify: u32,
    #[arg(long, default_value_t = 6)]
    cert_threads: usize,
    /// Additional primes that must confirm a reconstruction.
    #[arg(long, default_value_t = 1)]
    confirm: usize,
    /// Random seed [default: $RUR_SEED, else 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Isolate the real solutions and print boxes.
    #[arg(long)]
    isolate: bool,
    /// Box width 2^-K.
    #[arg(long, default_value_t = 40)]
    precision: u32,
    #[arg(long, value_enum, default_value_t = Hankel::Gauss)]
    hankel: Hankel,
    /// Reserved; reconstruction of the Gröbner basis is not supported.
    #[arg(long, value_name = "N")]
    gbasis: Option<u32>,
    /// Input file; standard input when absent or `-`.
    input: Option<PathBuf>,
}

fn read_input(path: Option<&PathBuf>) -> Result<String, String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display())),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(s)
        }
    }
}

fn load(path: Option<&PathBuf>) -> Result<PolySystem, u8> {
    let text = read_input(path).map_err(|e| {
        eprintln!("rur: {e}");
        EXIT_USAGE
    })?;
    parse_system(&text).map_err(|e| {
        eprintln!("rur: {e}");
        EXIT_USAGE
    })
}

fn seed_from_env() -> Result<u64, u8> {
    match std::env::var("RUR_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| {
            eprintln!("rur: RUR_SEED must be an unsigned 64-bit integer, got {s:?}");
            EXIT_USAGE
        }),
        Err(_) => Ok(0),
    }
}

fn solve(args: SolveArgs) -> Result<u8, u8> {
    if args.gbasis.is_some() {
        eprintln!("rur: --gbasis is reserved and not supported");
        return Err(EXIT_USAGE);
    }
    let system = load(args.input.as_ref())?;
    let defaults = SolveConfig::default();
    let config = SolveConfig {
        threads: args.threads.unwrap_or(defaults.threads),
        certify_mode: args.certify,
        cert_threads: args.cert_threads,
        confirm_extra: args.confirm,
        seed: match args.seed {
            Some(s) => s,
            None => seed_from_env()?,
        },
        isolate: args.isolate,
        precision: args.precision,
        hankel: match args.hankel {
            Hankel::Gauss => HankelMethod::Gauss,
            Hankel::Bezoutian => HankelMethod::Bezoutian,
        },
        ..defaults
    };
    let outcome = solve_detailed(&system, &config).map_err(|e| {
        eprintln!("rur: {e}");
        match e {
            RurError::Usage(_) | RurError::Parse { .. } => EXIT_USAGE,
            RurError::NotZeroDimensional | RurError::EmptyVariety | RurError::IdealIsUnit => EXIT_NO_FINITE_SOLUTIONS,
            _ => EXIT_SOLVER,
        }
    })?;
    print!(
        "{}",
        emit_result(
            system.variables(),
            &outcome.candidate,
            &outcome.report,
            &outcome.discards,
            outcome.boxes.as_deref(),
            config.precision,
        )
    );
    if outcome.report.any_failed() {
        eprintln!("rur: certification failed");
        return Ok(EXIT_CERT_FAILED);
    }
    if outcome.report.radicalized {
        eprintln!("rur: the result describes the radical of the input ideal");
    }
    Ok(EXIT_OK)
}

fn run(cli: Cli) -> Result<u8, u8> {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Gen { family, k } => {
            let min = match family {
                Family::Katsura => 1,
                Family::Noon => 2,
            };
            if k < min {
                eprintln!("rur: k must be at least {min}");
                return Err(EXIT_USAGE);
            }
            let s = match family {
                Family::Katsura => katsura(k),
                Family::Noon => noon(k),
            };
            print!("{}", s.to_text());
            Ok(EXIT_OK)
        }
        Command::Echo { input } => {
            print!("{}", load(input.as_ref())?.to_text());
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli).unwrap_or_else(|code| code))
}
