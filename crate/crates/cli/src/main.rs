mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "expmarkov", version, about = "Thermodynamic formalism and orbit experiments for expanding Markov maps")]
pub struct Cli {
    /// Seed for stochastic subcommands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism. 1 runs sequentially.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub potential: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a map file and print its symbolic data.
    ValidateMap {
        #[arg(long)]
        map: PathBuf,
    },
    /// Topological pressure of a potential.
    Pressure(ModelArgs),
    /// Gibbs constant, quasi-Bernoulli check and mixing report.
    GibbsCheck {
        #[command(flatten)]
        model: ModelArgs,
        /// Longest word length checked.
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Largest correlation lag.
        #[arg(long, default_value_t = 30)]
        max_lag: usize,
    },
    /// Multifractal spectrum on a q grid.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated values or `start:stop:step`; a built-in grid when absent.
        #[arg(long, allow_hyphen_values = true)]
        q_grid: Option<String>,
    },
    /// Critical exponents alpha_minus, alpha_max, alpha_plus and hdim.
    Critical(ModelArgs),
    /// Hitting-time law experiment.
    Hitting {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        potential_x: PathBuf,
        #[arg(long)]
        potential_y: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 16)]
        jmax: u32,
        #[arg(long, default_value_t = 1 << 24)]
        nmax: u64,
    },
    /// Rasterized approximation sets of sampled orbits.
    Cover {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = 16)]
        i: u64,
        #[arg(long, default_value_t = 1 << 20)]
        horizon: u64,
        #[arg(long, default_value_t = 12)]
        resolution: u32,
        #[arg(long, value_enum, default_value_t = CoverMode::Uniform)]
        mode: CoverMode,
        /// Number of sampled starting points.
        #[arg(long, default_value_t = 1)]
        samples: u64,
    },
    /// Run the acceptance suite against built-in models.
    Verify,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    Uniform,
    Asymptotic,
    Complement,
}

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
    Acceptance,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Acceptance => 3,
        }
    }
}

impl From<expmarkov::Error> for Failure {
    fn from(e: expmarkov::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Numerical(m) => eprintln!("numerical failure: {m}"),
                Failure::Acceptance => eprintln!("acceptance suite failed"),
            }
            ExitCode::from(f.code())
        }
    }
}
