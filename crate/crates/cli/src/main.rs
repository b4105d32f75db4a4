mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "honeycomb",
    version,
    about = "Plaquette stabilizer model on the bitruncated cubic honeycomb"
)]
pub struct Cli {
    /// Worker threads for enumeration and Monte Carlo.
    #[arg(long, global = true, env = "HONEYCOMB_THREADS")]
    threads: Option<usize>,

    /// File of `key = value` lines presetting any flag of the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build, validate and export the cell complex.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Stabilizer-code parameters and logical operators.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Excitations from truncated logicals.
    #[command(subcommand)]
    Excite(ExciteCmd),
    /// Exact enumeration of reduced partition sums.
    #[command(subcommand)]
    Exact(ExactCmd),
    /// Monte Carlo on the dual Ising model.
    #[command(subcommand)]
    Mc(McCmd),
    /// Run the acceptance suite and print a pass/fail table.
    VerifyAll(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SizeArg {
    /// Periods per axis.
    #[arg(long = "L", default_value_t = 2)]
    pub size: i64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    Export {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Validate {
        #[command(flatten)]
        size: SizeArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum CodeCmd {
    Analyze {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Logicals {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    String,
    Surface,
}

#[derive(Subcommand, Debug)]
pub enum ExciteCmd {
    Scan {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Axis of the logical: x, y or z.
        #[arg(long, default_value = "z")]
        dir: char,
        /// Plaquette coupling J.
        #[arg(long = "J", default_value_t = 1.0)]
        coupling: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Braid {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, default_value = "z")]
        dir: char,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExactCmd {
    Decompose {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long = "betaJ")]
        beta_j: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Duality {
        #[command(flatten)]
        size: SizeArg,
        /// `start:stop:count`, endpoints included.
        #[arg(long = "betaJ-grid", default_value = "0.3:1.2:10")]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Bound {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, default_value_t = 0.04)]
        eps1: f64,
        #[arg(long, default_value_t = 0.6)]
        eps2: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Dominance {
        /// Comma-separated sizes; 1 uses the multigraph complex.
        #[arg(long, default_value = "1,2")]
        sizes: String,
        #[arg(long = "betaJ-grid", default_value = "0.8:0.8:1")]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum McCmd {
    Run {
        #[command(flatten)]
        size: SizeArg,
        /// Dual couplings as `start:stop:count`.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 20_000)]
        sweeps: usize,
        #[arg(long, default_value_t = 5_000)]
        therm: usize,
        #[arg(long, default_value_t = 1)]
        interval: usize,
        #[arg(long, default_value_t = 1)]
        replicates: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Critical {
        /// Comma-separated CSV files from `mc run`.
        #[arg(long = "in")]
        inputs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    size: SizeArg,
    /// Comma-separated criterion ids; all when omitted.
    #[arg(long)]
    only: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let argv = match config::apply(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::dispatch(&cli, &argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<honeycomb::Error>() {
                Some(honeycomb::Error::Guard { .. }) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
