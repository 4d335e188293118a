use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use subinfo::optimize::Guard;
use subinfo_cli::generate::{generate, Fixture};
use subinfo_cli::{parse, run, CliError, PathMode, RunOptions, EXIT_INVALID, THREADS_ENV};

#[derive(Parser)]
#[command(name = "subinfo", version, about = "Submodular information measures")]
struct Cli {
    /// Worker threads; overrides SUBINFO_THREADS. 0 means one per core.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the task in an instance file and print its report.
    Run(RunArgs),
    /// Print a seeded ground set and function fragment.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RunArgs {
    instance: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed_override: Option<u64>,
    #[arg(long, value_enum)]
    guard: Option<GuardArg>,
    /// Measure tasks: closed form only.
    #[arg(long, group = "path")]
    closed_form: bool,
    /// Measure tasks: inclusion-exclusion over the oracle only.
    #[arg(long, group = "path")]
    generic: bool,
    /// Measure tasks: compute both and exit 3 if they differ by more than 1e-9.
    #[arg(long, group = "path")]
    both: bool,
    /// Select tasks: write the gain trace as CSV.
    #[arg(long)]
    trace_csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GuardArg {
    Trust,
    Verify,
    Unchecked,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: FixtureKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Kernel: constant off-diagonal similarity instead of random entries.
    #[arg(long)]
    off_diagonal: Option<f64>,
    /// Kernel: emit a graph cut with this λ instead of facility location.
    #[arg(long)]
    graph_cut_lambda: Option<f64>,
    #[arg(long, default_value_t = 4)]
    concepts: usize,
    /// Coverage: number of elements covering each concept.
    #[arg(long, default_value_t = 1)]
    multiplicity: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    Kernel,
    Coverage,
    ProbCover,
}

fn threads(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::invalid(format!("{THREADS_ENV}={v:?} is not a non-negative integer"))
        }),
        Err(_) => Ok(0),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_command(args: &RunArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let text = std::fs::read_to_string(&args.instance).map_err(|source| CliError::Io {
        path: args.instance.display().to_string(),
        source,
    })?;
    let instance =
        parse(&text).map_err(|e| CliError::invalid(format!("{}: {e}", args.instance.display())))?;
    let path_mode = if args.closed_form {
        PathMode::ClosedForm
    } else if args.generic {
        PathMode::Generic
    } else if args.both {
        PathMode::Both
    } else {
        PathMode::Auto
    };
    let opts = RunOptions {
        path_mode,
        seed_override: args.seed_override,
        guard: args.guard.map(|g| match g {
            GuardArg::Trust => Guard::TrustFlags,
            GuardArg::Verify => Guard::VerifyAtDeskScale,
            GuardArg::Unchecked => Guard::Unchecked,
        }),
        trace_csv: args.trace_csv.clone(),
    };
    let mut outcome = run(&instance, &opts)?;
    outcome.report.duration_ms = started.elapsed().as_millis() as u64;
    emit(&outcome.report.to_json(), args.out.as_ref())?;
    Ok(outcome.exit_code)
}

fn generate_command(args: &GenerateArgs) -> Result<u8, CliError> {
    let fixture = match args.kind {
        FixtureKind::Kernel => Fixture::Kernel {
            off_diagonal: args.off_diagonal,
            graph_cut_lambda: args.graph_cut_lambda,
        },
        FixtureKind::Coverage => Fixture::Coverage {
            concepts: args.concepts,
            multiplicity: args.multiplicity,
        },
        FixtureKind::ProbCover => Fixture::ProbCover {
            concepts: args.concepts,
        },
    };
    let fragment = generate(&fixture, args.n, args.seed)?;
    let mut text = serde_json::to_string_pretty(&fragment).expect("fragments serialize");
    text.push('\n');
    emit(&text, args.out.as_ref())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = threads(cli.threads).and_then(|n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::invalid(format!("thread pool: {e}")))?;
        match &cli.command {
            Command::Run(args) => run_command(args),
            Command::Generate(args) => generate_command(args),
        }
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(report) = e.structural_report() {
                if let Ok(json) = serde_json::to_string_pretty(report) {
                    eprintln!("{json}");
                }
            }
            let code = e.exit_code();
            ExitCode::from(if code == 0 { EXIT_INVALID } else { code })
        }
    }
}
