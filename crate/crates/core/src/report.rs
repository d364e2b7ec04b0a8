//! Point solves, sweeps and simulation runs rendered as CSV rows.

use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;

use crate::chain::{build_chain_with, metrics, stationary_distribution_with, BuildOptions, Chain, SolverOptions};
use crate::config::ExperimentConfig;
use crate::error::{invalid, Error, Result};
use crate::protocol::{Architecture, Protocol};
use crate::sim::{simulate_chain_sampled_with, simulate_continuous_with, Budget, SimEstimate};

pub const HEADER: &str = "architecture,protocol,sir_db,delta,window,throughput,efficiency,tx_fraction,states,residual,solve_ms";
pub const SIM_HEADER_EXTRA: &str = "throughput_stderr,efficiency_stderr,slots,seed";

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    SirDb,
    Delta,
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sir_db" => Ok(Axis::SirDb),
            "delta" => Ok(Axis::Delta),
            other => Err(Error::Config(format!("unknown sweep axis {other:?} (expected sir_db or delta)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub build: BuildOptions,
    pub solver: SolverOptions,
    /// Report wall-clock time in `solve_ms`; otherwise the column is 0 and
    /// output is reproducible byte for byte.
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Channel {
    /// Quantized channel sampled from the FSMC kernel.
    #[default]
    Sampled,
    /// Unquantized correlated Rayleigh gain.
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub architecture: Architecture,
    pub protocol: Protocol,
    pub sir_db: f64,
    pub delta: u32,
    pub window: u32,
    pub throughput: f64,
    pub efficiency: Option<f64>,
    pub tx_fraction: f64,
    /// Chain size; `None` for simulated rows.
    pub states: Option<usize>,
    pub residual: Option<f64>,
    pub solve_ms: f64,
    pub sim: Option<SimEstimate>,
}

impl Row {
    fn base(cfg: &ExperimentConfig) -> Self {
        Self {
            architecture: cfg.architecture,
            protocol: cfg.protocol,
            sir_db: cfg.sir_db,
            delta: cfg.delta,
            window: cfg.effective_window(),
            throughput: 0.0,
            efficiency: None,
            tx_fraction: 0.0,
            states: None,
            residual: None,
            solve_ms: 0.0,
            sim: None,
        }
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(fmt_g12).unwrap_or_default();
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.architecture,
            self.protocol,
            fmt_g12(self.sir_db),
            self.delta,
            self.window,
            fmt_g12(self.throughput),
            opt(self.efficiency),
            fmt_g12(self.tx_fraction),
            self.states.map(|n| n.to_string()).unwrap_or_default(),
            opt(self.residual),
            fmt_g12(self.solve_ms),
        );
        if let Some(sim) = &self.sim {
            line.push_str(&format!(
                ",{},{},{},{}",
                fmt_g12(sim.throughput_stderr),
                opt(sim.efficiency_stderr),
                sim.slots,
                sim.seed
            ));
        }
        line
    }
}

/// `printf("%.12g")`.
pub fn fmt_g12(x: f64) -> String {
    const P: i32 = 12;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (P - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Builds and solves the chain for one configuration.
pub fn solve_chain(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<(Chain, Row)> {
    let started = Instant::now();
    let cm = cfg.channel()?;
    let im = cfg.interference()?;
    let lb = cfg.link_budget()?;
    let pcfg = cfg.protocol_config()?;
    let build = BuildOptions {
        edge_policy: cfg.threshold_edge_policy,
        ..opts.build
    };
    let chain = build_chain_with(&cm, &im, &lb, &pcfg, &build)?;
    let st = stationary_distribution_with(&chain, &opts.solver)?;
    let m = metrics(&chain, &st);
    let mut row = Row::base(cfg);
    row.throughput = m.throughput;
    row.efficiency = m.efficiency;
    row.tx_fraction = m.tx_fraction;
    row.states = Some(chain.len());
    row.residual = Some(st.residual);
    if opts.timing {
        row.solve_ms = started.elapsed().as_secs_f64() * 1e3;
    }
    Ok((chain, row))
}

pub fn run_point(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Row> {
    solve_chain(cfg, opts).map(|(_, row)| row)
}

/// Copy of `cfg` moved to `value` on `axis`. A default window keeps
/// following `delta`.
pub fn with_axis(cfg: &ExperimentConfig, axis: Axis, value: f64) -> Result<ExperimentConfig> {
    let mut out = cfg.clone();
    match axis {
        Axis::SirDb => out.sir_db = value,
        Axis::Delta => {
            if !(value >= 0.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX)) {
                return Err(Error::Config(format!("delta values must be whole numbers, got {value}")));
            }
            out.delta = value as u32;
        }
    }
    out.validate()?;
    Ok(out)
}

/// Every combination of `combos` and `values`, combination-major, each
/// evaluated independently. Results keep that order whatever the pool
/// size.
pub fn sweep_points(
    cfg: &ExperimentConfig,
    combos: &[(Architecture, Protocol)],
    axis: Axis,
    values: &[f64],
) -> Result<Vec<ExperimentConfig>> {
    let mut points = Vec::with_capacity(combos.len() * values.len());
    for &(architecture, protocol) in combos {
        let mut base = cfg.clone();
        base.architecture = architecture;
        base.protocol = protocol;
        if protocol == Protocol::StopAndWait {
            base.window = None;
        }
        for &v in values {
            points.push(with_axis(&base, axis, v)?);
        }
    }
    Ok(points)
}

pub fn run_sweep(points: &[ExperimentConfig], opts: &RunOptions, threads: usize) -> Result<Vec<Result<Row>>> {
    in_pool(threads, || points.par_iter().map(|p| run_point(p, opts)).collect())
}

/// Monte Carlo estimate for one configuration. An explicit `seed` wins
/// over the config's own.
pub fn run_simulate(cfg: &ExperimentConfig, seed: Option<u64>, channel: Channel, timing: bool) -> Result<Row> {
    let started = Instant::now();
    let seed = seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let defaults = Budget::default();
    let budget = Budget {
        slots: cfg.mc_slots.unwrap_or(defaults.slots),
        warmup: cfg.mc_warmup.unwrap_or(defaults.warmup),
        ..defaults
    };
    let im = cfg.interference()?;
    let lb = cfg.link_budget()?;
    let pcfg = cfg.protocol_config()?;
    let est = match channel {
        Channel::Sampled => {
            let cm = cfg.channel()?;
            simulate_chain_sampled_with(&cm, &im, &lb, &pcfg, seed, budget, cfg.threshold_edge_policy)?
        }
        Channel::Continuous => simulate_continuous_with(cfg.rho, &im, &lb, &pcfg, seed, budget)?,
    };
    let mut row = Row::base(cfg);
    row.throughput = est.throughput_mean;
    row.efficiency = est.efficiency_mean;
    row.tx_fraction = est.tx_fraction;
    if timing {
        row.solve_ms = started.elapsed().as_secs_f64() * 1e3;
    }
    row.sim = Some(est);
    Ok(row)
}

pub fn run_simulate_sweep(
    points: &[ExperimentConfig],
    seed: Option<u64>,
    channel: Channel,
    timing: bool,
    threads: usize,
) -> Result<Vec<Result<Row>>> {
    in_pool(threads, || {
        points
            .par_iter()
            .map(|p| run_simulate(p, seed, channel, timing))
            .collect()
    })
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

pub fn write_csv<W: Write>(mut out: W, rows: &[Row]) -> io::Result<()> {
    let simulated = rows.iter().any(|r| r.sim.is_some());
    if simulated {
        writeln!(out, "{HEADER},{SIM_HEADER_EXTRA}")?;
    } else {
        writeln!(out, "{HEADER}")?;
    }
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    Ok(())
}
