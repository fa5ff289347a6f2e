use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use koszul_dual::service::{
    cmd_analyze, cmd_diagram, cmd_sweep, cmd_verify, read_input, render, write_output,
    ConventionChoice, Format, Options, ServiceError, EXIT_INPUT,
};

#[derive(Parser)]
#[command(
    name = "koszul",
    version,
    about = "A∞-Koszul duals of linear quivers with monomial relations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Sign convention for higher products: last-arg, first-arg or auto.
    #[arg(long, global = true, default_value = "last-arg")]
    convention: String,

    /// Largest quiver size for sweeps and for `--convention auto`.
    #[arg(long, global = true)]
    n_max: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Include stage timings in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Sequences, hom table and μ table of one pattern.
    Analyze {
        /// Pattern document, or `-` for stdin.
        input: PathBuf,
    },
    /// Run every verifier on one pattern.
    Verify {
        input: PathBuf,
        /// Corrupt one μ entry before verifying.
        #[arg(long, hide = true)]
        debug_corrupt_mu: bool,
    },
    /// Verify every pattern up to --n-max.
    Sweep {
        /// Worker threads; 1 runs serially.
        #[arg(long)]
        threads: Option<usize>,
        /// Refuse sweeps beyond this size.
        #[arg(long, default_value_t = 8)]
        ceiling: usize,
    },
    /// Render the core diagram as SVG.
    Diagram { input: PathBuf },
}

fn load(path: &Path) -> Result<String, ServiceError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| ServiceError::Io {
                path: path.to_owned(),
                source,
            })?;
        Ok(s)
    } else {
        read_input(path)
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), ServiceError> {
    match out {
        Some(p) => write_output(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|source| ServiceError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn run(cli: Cli) -> Result<i32, ServiceError> {
    let convention: ConventionChoice = cli.convention.parse()?;
    let format = match cli.format {
        FormatArg::Human => Format::Human,
        FormatArg::Machine => Format::Machine,
    };
    let mut opts = Options {
        convention,
        n_max: cli.n_max,
        timings: cli.timings,
        ..Options::default()
    };
    let out = cli.out.as_deref();
    let report = match cli.command {
        Command::Analyze { input } => cmd_analyze(&load(&input)?, &opts)?,
        Command::Verify {
            input,
            debug_corrupt_mu,
        } => {
            opts.corrupt_mu = debug_corrupt_mu;
            cmd_verify(&load(&input)?, &opts)?
        }
        Command::Sweep { threads, ceiling } => {
            opts.threads = threads;
            opts.sweep_ceiling = ceiling;
            cmd_sweep(&opts)?
        }
        Command::Diagram { input } => {
            let svg = cmd_diagram(&load(&input)?)?;
            emit(out, &svg)?;
            return Ok(0);
        }
    };
    emit(out, render(&report, format).as_bytes())?;
    if !report.passed {
        for v in report.verdicts.iter().filter(|v| !v.passed) {
            eprintln!("verification failed: {}: {}", v.check, v.detail);
        }
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            match &e {
                ServiceError::Io { .. } => eprintln!("koszul: {e}"),
                _ => eprintln!("koszul: error: {e}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
