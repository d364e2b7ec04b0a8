use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cran_arq::config::{load_config, ExperimentConfig};
use cran_arq::report::{
    run_point, run_simulate, run_simulate_sweep, run_sweep, solve_chain, sweep_points, write_csv, Axis, Channel,
    Row, RunOptions,
};
use cran_arq::{Architecture, Error, Protocol};

/// Throughput and efficiency of ARQ protocols over conventional, C-RAN and
/// hybrid C-RAN uplinks.
#[derive(Parser)]
#[command(name = "cran-arq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the chain for one configuration.
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Solve the chain over a range of SIR or delay values.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        parallel: usize,
        /// Report failing points on stderr and keep going.
        #[arg(long)]
        keep_going: bool,
    },
    /// Monte Carlo estimate for one configuration, or over a sweep.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: OptionalSweep,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Simulate the unquantized Rayleigh gain instead of the FSMC.
        #[arg(long)]
        continuous: bool,
        #[arg(long, default_value_t = 0)]
        parallel: usize,
    },
    /// Print the size and structure of the chain.
    ChainInfo {
        #[arg(long)]
        config: PathBuf,
        /// Write every state with its outgoing transitions here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; `-` or absent for stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fill `solve_ms` with wall-clock time (output is then not reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// `sir_db` or `delta`.
    #[arg(long)]
    axis: Axis,
    /// Comma-separated values, or an integer range `a..b` (inclusive).
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    /// Architectures to include (comma-separated, or `all`); defaults to the config's.
    #[arg(long)]
    architectures: Option<String>,
    /// Protocols to include (comma-separated, or `all`); defaults to the config's.
    #[arg(long)]
    protocols: Option<String>,
}

#[derive(Args)]
struct OptionalSweep {
    #[arg(long, requires = "values")]
    axis: Option<Axis>,
    #[arg(long, requires = "axis", allow_hyphen_values = true)]
    values: Option<String>,
    #[arg(long)]
    architectures: Option<String>,
    #[arg(long)]
    protocols: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Solve { common } => {
            let cfg = load_config(&common.config)?;
            let opts = RunOptions {
                timing: common.timing,
                ..RunOptions::default()
            };
            let row = run_point(&cfg, &opts)?;
            emit(common.out.as_deref(), &[row])?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            common,
            sweep,
            parallel,
            keep_going,
        } => {
            let cfg = load_config(&common.config)?;
            let combos = combos(&cfg, sweep.architectures.as_deref(), sweep.protocols.as_deref())?;
            let values = parse_values(&sweep.values)?;
            let points = sweep_points(&cfg, &combos, sweep.axis, &values)?;
            let opts = RunOptions {
                timing: common.timing,
                ..RunOptions::default()
            };
            let results = run_sweep(&points, &opts, parallel)?;
            finish(common.out.as_deref(), &points, results, keep_going)
        }
        Command::Simulate {
            common,
            sweep,
            seed,
            continuous,
            parallel,
        } => {
            let cfg = load_config(&common.config)?;
            let channel = if continuous { Channel::Continuous } else { Channel::Sampled };
            match (sweep.axis, sweep.values) {
                (Some(axis), Some(values)) => {
                    let combos = combos(&cfg, sweep.architectures.as_deref(), sweep.protocols.as_deref())?;
                    let points = sweep_points(&cfg, &combos, axis, &parse_values(&values)?)?;
                    let results = run_simulate_sweep(&points, seed, channel, common.timing, parallel)?;
                    finish(common.out.as_deref(), &points, results, false)
                }
                _ => {
                    let row = run_simulate(&cfg, seed, channel, common.timing)?;
                    emit(common.out.as_deref(), &[row])?;
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::ChainInfo { config, dump } => {
            let cfg = load_config(&config)?;
            let (chain, row) = solve_chain(&cfg, &RunOptions::default())?;
            let (delivered, transmitted) = chain.rewards().iter().fold((0u64, 0u64), |(d, t), r| {
                (d + u64::from(r.delivered), t + u64::from(r.transmitted))
            });
            let (h0, h1) = chain.thresholds();
            let stdout = io::stdout();
            let mut out = stdout.lock();
            let lines = [
                format!("states: {}", chain.len()),
                format!("transitions: {}", chain.kernel().nnz()),
                format!("scc_count: {}", chain.scc_count()),
                format!("recurrent_states: {}", chain.recurrent_class().len()),
                format!("thresholds: h0={h0} h1={h1}"),
                format!("delivering_states: {delivered}"),
                format!("transmitting_states: {transmitted}"),
                format!("residual: {:e}", row.residual.unwrap_or(0.0)),
            ];
            for line in lines {
                writeln!(out, "{line}").map_err(io_error)?;
            }
            if let Some(path) = dump {
                let file = File::create(&path).map_err(|e| io_error_at(&path, e))?;
                let mut w = BufWriter::new(file);
                chain.write_dump(&mut w).map_err(|e| io_error_at(&path, e))?;
                w.flush().map_err(|e| io_error_at(&path, e))?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn finish(
    out: Option<&Path>,
    points: &[ExperimentConfig],
    results: Vec<Result<Row, Error>>,
    keep_going: bool,
) -> Result<ExitCode, Error> {
    let mut rows = Vec::with_capacity(results.len());
    let mut first_error = None;
    for (point, result) in points.iter().zip(results) {
        match result {
            Ok(row) => rows.push(row),
            Err(err) if keep_going => {
                eprintln!(
                    "skipped {}/{} sir_db={} delta={}: {err}",
                    point.architecture, point.protocol, point.sir_db, point.delta
                );
                first_error.get_or_insert(err);
            }
            Err(err) => return Err(err),
        }
    }
    emit(out, &rows)?;
    Ok(match first_error {
        Some(err) => ExitCode::from(err.exit_code() as u8),
        None => ExitCode::SUCCESS,
    })
}

fn emit(out: Option<&Path>, rows: &[Row]) -> Result<(), Error> {
    match out {
        Some(path) if path != Path::new("-") => {
            let file = File::create(path).map_err(|e| io_error_at(path, e))?;
            let mut w = BufWriter::new(file);
            write_csv(&mut w, rows).map_err(|e| io_error_at(path, e))?;
            w.flush().map_err(|e| io_error_at(path, e))
        }
        _ => write_csv(io::stdout().lock(), rows).map_err(io_error),
    }
}

fn io_error(e: io::Error) -> Error {
    Error::Config(format!("cannot write output: {e}"))
}

fn io_error_at(path: &Path, e: io::Error) -> Error {
    Error::Config(format!("cannot write {}: {e}", path.display()))
}

fn parse_values(text: &str) -> Result<Vec<f64>, Error> {
    if let Some((a, b)) = text.split_once("..") {
        let parse = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::Config(format!("bad range bound {s:?}")))
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            return Err(Error::Config(format!("empty range {text:?}")));
        }
        return Ok((a..=b).map(|v| v as f64).collect());
    }
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad sweep value {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(Error::Config("no sweep values".into()));
    }
    Ok(values)
}

fn combos(
    cfg: &ExperimentConfig,
    architectures: Option<&str>,
    protocols: Option<&str>,
) -> Result<Vec<(Architecture, Protocol)>, Error> {
    let archs = match architectures {
        None => vec![cfg.architecture],
        Some(list) => parse_list(list, &Architecture::ALL, Architecture::as_str)?,
    };
    let protos = match protocols {
        None => vec![cfg.protocol],
        Some(list) => parse_list(list, &Protocol::ALL, Protocol::as_str)?,
    };
    Ok(archs
        .iter()
        .flat_map(|&a| protos.iter().map(move |&p| (a, p)))
        .collect())
}

fn parse_list<T: Copy>(list: &str, all: &[T], name: fn(T) -> &'static str) -> Result<Vec<T>, Error> {
    if list.trim() == "all" {
        return Ok(all.to_vec());
    }
    list.split(',')
        .map(|item| {
            let item = item.trim();
            all.iter()
                .copied()
                .find(|&v| name(v) == item)
                .ok_or_else(|| Error::Config(format!("unknown name {item:?}")))
        })
        .collect()
}
