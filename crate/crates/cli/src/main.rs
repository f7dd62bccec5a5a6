mod bench;
mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exact minimization of multi-label energies through ordered Boolean levels.
#[derive(Parser)]
#[command(name = "gibbscut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a label table or grid energy model into a Boolean polynomial.
    Expand {
        /// Energy model or label-function table (JSON).
        input: PathBuf,
        /// Polynomial output path; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Level map output path.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Report submodularity, the pair ledger and the class of a polynomial.
    Check { input: PathBuf },
    /// Minimize a polynomial exactly.
    Minimize {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Include the block-fixing trace in the output.
        #[arg(long)]
        trace: bool,
        /// Re-solve with every other applicable method and compare.
        #[arg(long)]
        verify: bool,
        /// Block sizes per fixing level, last one repeating.
        #[arg(long, value_delimiter = ',', default_values_t = [8, 12, 14])]
        block: Vec<usize>,
        /// Number of fixing levels.
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Minimize by block-wise coordinate fixing and print the level trace.
    Msfm {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 12, 14])]
        block: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Write the gadget flow network of a polynomial in DIMACS max-flow format.
    GadgetDump {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Restore a gray-scale PGM image.
    Denoise {
        input: PathBuf,
        output: PathBuf,
        /// Number of gray levels in the output, 2 to 16.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Smoothness weight, an integer or fraction such as 3/2.
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long, value_enum, default_value_t = DataArg::Absolute)]
        data: DataArg,
        #[arg(long, value_enum, default_value_t = SmoothArg::Linear)]
        smooth: SmoothArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Side of the first-level tiles in pixels.
        #[arg(long, default_value_t = 4)]
        tile: usize,
        /// Output encoding; defaults to the input's.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run a benchmark suite and print a CSV table.
    Bench {
        suite: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Cut,
    Msfm,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataArg {
    Absolute,
    Quadratic,
}

#[derive(Clone, Copy, ValueEnum)]
enum SmoothArg {
    Linear,
    Quadratic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Plain,
    Raw,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let limits = gibbscut::SolverLimits::from_env();
    match cli.command {
        Command::Expand { input, out, map_out } => commands::expand(&input, out.as_deref(), map_out.as_deref()),
        Command::Check { input } => commands::check(&input, &limits),
        Command::Minimize { input, method, trace, verify, block, levels } => {
            let msfm = commands::msfm_config(&block, levels, limits)?;
            commands::minimize(&input, method, trace, verify, &msfm)
        }
        Command::Msfm { input, block, levels } => {
            let msfm = commands::msfm_config(&block, levels, limits)?;
            commands::msfm(&input, &msfm)
        }
        Command::GadgetDump { input, out } => commands::gadget_dump(&input, out.as_deref()),
        Command::Denoise { input, output, levels, lambda, data, smooth, method, tile, format } => {
            let opts = commands::DenoiseOpts { levels, lambda, data, smooth, method, tile, format, limits };
            commands::denoise(&input, &output, &opts)
        }
        Command::Bench { suite, seed, out } => bench::run(&suite, seed, out.as_deref(), &limits),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(failure::exit_code(&e))
        }
    }
}
