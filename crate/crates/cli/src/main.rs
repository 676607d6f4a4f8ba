use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use focal_rd_cli::{
    parse_int_list, parse_source, run_asymptotic, run_code_dump, run_hgamma, run_oracle,
    run_point, run_sweep, write_point_csv, CliError, Figure, FxMode, GridSpec, PointConfig,
    SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "focal-rd",
    version,
    about = "Rate-distortion bounds, codes, and exhaustive optima under the focal-loss distortion",
    long_about = "Computes converse and achievability bounds on the expected focal-loss \
distortion of single-shot compression, builds the greedy codes behind the achievability \
results, brute-forces exact optima on small instances, and emits deterministic CSV sweeps."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full bound report for one (source, m, gamma) instance.
    Point {
        /// Source spec: uniform:k | binomial:k:p | bernoulli:p | pmf:v1,v2,… | pmf-file:path, optionally with a :q=<spec> weight suffix.
        #[arg(long)]
        source: String,
        /// Number of messages M.
        #[arg(long)]
        m: usize,
        /// Focus parameter (nonnegative real).
        #[arg(long)]
        gamma: f64,
        /// Reconstruction distribution: source | uniform | optimize | file:PATH.
        #[arg(long, default_value = "source")]
        fx: String,
        /// Base seed for randomized search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the number of optimizer starts.
        #[arg(long)]
        fx_starts: Option<usize>,
        /// Override the optimizer pass budget per start.
        #[arg(long)]
        fx_iterations: Option<usize>,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Figure-reproduction sweeps (fig1, fig2, fig4) or a custom grid sweep.
    Sweep {
        /// Which sweep: fig1 | fig2 | fig4 | custom.
        #[arg(long)]
        figure: String,
        /// Source spec (custom sweeps only).
        #[arg(long)]
        source: Option<String>,
        /// Message counts, comma-separated (custom sweeps only).
        #[arg(long)]
        m: Option<String>,
        /// Gamma grid start:stop:count, or a single value (custom sweeps only).
        #[arg(long)]
        gamma: Option<String>,
        /// Blocklengths for per-symbol bound columns (custom sweeps only).
        #[arg(long)]
        n: Option<String>,
        /// Reconstruction distribution: source | uniform | optimize | file:PATH.
        #[arg(long, default_value = "source")]
        fx: String,
        /// Base seed; per-row seeds derive from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Alternate binomial parameter for the fig4 sweep (default 0.1).
        #[arg(long)]
        alt_p: Option<f64>,
        /// Override the number of optimizer starts.
        #[arg(long)]
        fx_starts: Option<usize>,
        /// Override the optimizer pass budget per start.
        #[arg(long)]
        fx_iterations: Option<usize>,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search for the true optimum on a small instance.
    Oracle {
        /// Source spec.
        #[arg(long)]
        source: String,
        /// Number of messages M.
        #[arg(long)]
        m: usize,
        /// Gamma grid start:stop:count, or a single value.
        #[arg(long)]
        gamma: String,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy code table (cell assignments and reconstruction masses).
    CodeDump {
        /// Source spec.
        #[arg(long)]
        source: String,
        /// Number of messages M.
        #[arg(long)]
        m: usize,
        /// Focus parameter for the reported distortion.
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// Reconstruction distribution: source | uniform | file:PATH.
        #[arg(long, default_value = "source")]
        fx: String,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximal focal entropy over a gamma grid at a fixed alphabet size.
    Hgamma {
        /// Alphabet size (at least 2).
        #[arg(long)]
        alphabet: usize,
        /// Gamma grid start:stop:count, or a single value.
        #[arg(long, default_value = "0:10:21")]
        gamma: String,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blocklength-n per-symbol bounds next to the asymptotic limit.
    Asymptotic {
        /// Source spec.
        #[arg(long)]
        source: String,
        /// Per-symbol rate in bits (positive real).
        #[arg(long)]
        rate: f64,
        /// Blocklengths, comma-separated.
        #[arg(long)]
        n: String,
        /// Gamma grid start:stop:count, or a single value.
        #[arg(long, default_value = "0")]
        gamma: String,
        /// Reconstruction distribution: source | uniform | file:PATH.
        #[arg(long, default_value = "source")]
        fx: String,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Point {
            source,
            m,
            gamma,
            fx,
            seed,
            fx_starts,
            fx_iterations,
            out,
        } => {
            let src = parse_source(&source)?;
            let fx: FxMode = fx.parse()?;
            let report = run_point(
                src.reweighted(),
                &PointConfig {
                    m,
                    gamma,
                    fx,
                    seed,
                    fx_starts,
                    fx_iterations,
                },
            )?;
            write_point_csv(&report, &mut *open_out(&out)?)?;
        }
        Command::Sweep {
            figure,
            source,
            m,
            gamma,
            n,
            fx,
            seed,
            alt_p,
            fx_starts,
            fx_iterations,
            out,
        } => {
            let config = SweepConfig {
                figure: figure.parse::<Figure>()?,
                source_spec: source,
                m_list: m.map(|list| parse_int_list(&list)).transpose()?.unwrap_or_default(),
                gamma: gamma.map(|g| g.parse::<GridSpec>()).transpose()?,
                n_grid: n.map(|list| parse_int_list(&list)).transpose()?,
                fx: fx.parse()?,
                seed,
                alt_p,
                fx_starts,
                fx_iterations,
            };
            run_sweep(&config, &mut *open_out(&out)?)?;
        }
        Command::Oracle {
            source,
            m,
            gamma,
            out,
        } => {
            let src = parse_source(&source)?;
            let grid: GridSpec = gamma.parse()?;
            run_oracle(src.reweighted(), m, &grid, &mut *open_out(&out)?)?;
        }
        Command::CodeDump {
            source,
            m,
            gamma,
            fx,
            out,
        } => {
            let src = parse_source(&source)?;
            let fx: FxMode = fx.parse()?;
            if fx == FxMode::Optimize {
                return Err(CliError::Validation(
                    "code-dump shows one fixed code; use point --fx optimize for search results"
                        .to_string(),
                ));
            }
            let r = src.reweighted();
            let f = fx.resolve(r)?;
            run_code_dump(r, &f, m, gamma, &mut *open_out(&out)?)?;
        }
        Command::Hgamma {
            alphabet,
            gamma,
            out,
        } => {
            let grid: GridSpec = gamma.parse()?;
            run_hgamma(alphabet, &grid, &mut *open_out(&out)?)?;
        }
        Command::Asymptotic {
            source,
            rate,
            n,
            gamma,
            fx,
            out,
        } => {
            let src = parse_source(&source)?;
            let fx: FxMode = fx.parse()?;
            if fx == FxMode::Optimize {
                return Err(CliError::Validation(
                    "asymptotic bounds take a fixed reconstruction distribution".to_string(),
                ));
            }
            let r = src.reweighted();
            let f = fx.resolve(r)?;
            let blocklengths = parse_int_list(&n)?;
            let grid: GridSpec = gamma.parse()?;
            run_asymptotic(r, &f, rate, &blocklengths, &grid, &mut *open_out(&out)?)?;
        }
    }
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let code = if matches!(
                error.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                0
            } else {
                1
            };
            let _ = error.print();
            std::process::exit(code);
        }
    };
    if let Err(error) = execute(cli.command) {
        eprintln!("error: {error}");
        std::process::exit(error.exit_code());
    }
}
