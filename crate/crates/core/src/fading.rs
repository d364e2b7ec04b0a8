//! Quantized, slot-correlated Rayleigh fading as a finite-state Markov
//! channel (FSMC).
//!
//! The unit-mean exponential power gain is split into `q` bins of equal
//! stationary probability. Transition probabilities between bins come from
//! integrating the joint density of two consecutive gains whose underlying
//! complex Gaussians have power correlation `rho`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::numerics::{bessel_i0e, integrate};

/// Default absolute accuracy of every transition entry.
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-8;

const MAX_INTERVALS: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    q: usize,
    rho: f64,
    edges: Vec<f64>,
    transition: Vec<Vec<f64>>,
}

impl ChannelModel {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `q + 1` bin boundaries on the power gain, from 0 to `+inf`.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Row-stochastic `q x q` kernel; row and column `i` are bin `i + 1`.
    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    /// Probability of moving from bin `from` to bin `to` (both 1-based).
    pub fn p(&self, from: usize, to: usize) -> f64 {
        self.transition[from - 1][to - 1]
    }

    /// 1-based index of the bin holding `gain`. A gain equal to an edge
    /// belongs to the upper bin.
    pub fn bin_of(&self, gain: f64) -> usize {
        // edges[0] = 0 <= gain always; count interior edges <= gain.
        let interior = &self.edges[1..self.q];
        1 + interior.partition_point(|&e| e <= gain)
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(invalid(format!("correlation rho must lie in [0, 1), got {rho}")));
    }
    Ok(())
}

/// Equal-probability quantile edges of the unit-mean exponential law.
pub fn exp_bin_edges(q: usize) -> Result<Vec<f64>> {
    if q == 0 {
        return Err(invalid("number of channel states q must be at least 1"));
    }
    let mut edges: Vec<f64> = (0..q)
        .map(|i| -(-(i as f64) / q as f64).ln_1p())
        .collect();
    edges.push(f64::INFINITY);
    Ok(edges)
}

/// Joint density of two unit-mean exponential gains with power correlation
/// `rho`: `exp(-(x+y)/(1-rho)) I0(2 sqrt(rho x y)/(1-rho)) / (1-rho)`.
pub fn bivariate_exp_density(x: f64, y: f64, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if !(x >= 0.0 && y >= 0.0) {
        return Err(invalid(format!("gains must be nonnegative, got ({x}, {y})")));
    }
    Ok(density(x, y, rho))
}

fn density(x: f64, y: f64, rho: f64) -> f64 {
    let scale = 1.0 - rho;
    let z = 2.0 * (rho * x * y).sqrt() / scale;
    (z - (x + y) / scale).exp() * bessel_i0e(z) / scale
}

/// Gain beyond which the exponential tail mass is below `tol / 10`.
fn truncation_point(tol: f64) -> f64 {
    (10.0 / tol).ln()
}

/// Builds the `q`-state FSMC for power correlation `rho`; each entry is
/// integrated to absolute accuracy `tol` and rows are then renormalized.
pub fn build_fsmc(q: usize, rho: f64, tol: f64) -> Result<ChannelModel> {
    check_rho(rho)?;
    if !(tol > 0.0) {
        return Err(invalid(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let edges = exp_bin_edges(q)?;
    if q == 1 {
        return Ok(ChannelModel {
            q,
            rho,
            edges,
            transition: vec![vec![1.0]],
        });
    }

    let top = truncation_point(tol);
    let clip = |e: f64| e.min(top);
    let qf = q as f64;
    // Entry = q * mass, so masses need accuracy tol / q. Half of that is
    // spent on the outer integral, the rest spread over the inner ones.
    let mass_tol = tol / qf;

    let mut transition = vec![vec![0.0; q]; q];
    for from in 0..q {
        let (x0, x1) = (clip(edges[from]), clip(edges[from + 1]));
        let inner_tol = 0.5 * mass_tol / (x1 - x0).max(1.0);
        for to in 0..q {
            let (y0, y1) = (clip(edges[to]), clip(edges[to + 1]));
            let bin_err = |error_estimate| Error::Quadrature {
                from: from + 1,
                to: to + 1,
                error_estimate,
            };
            let outer = integrate(
                |x| match integrate(
                    |y| Ok::<_, Error>(density(x, y, rho)),
                    y0,
                    y1,
                    inner_tol,
                    MAX_INTERVALS,
                )? {
                    Ok(inner) => Ok(inner.value),
                    Err(fail) => Err(bin_err(fail.best.error)),
                },
                x0,
                x1,
                0.5 * mass_tol,
                MAX_INTERVALS,
            )?
            .map_err(|fail| bin_err(fail.best.error))?;
            transition[from][to] = (qf * outer.value).max(0.0);
        }
        let sum: f64 = transition[from].iter().sum();
        let correction = (1.0 - sum).abs();
        if correction > qf * tol {
            return Err(Error::Invariant(format!(
                "row {} of the fading kernel needed a renormalization of {correction:e} (> q*tol = {:e})",
                from + 1,
                qf * tol
            )));
        }
        for entry in &mut transition[from] {
            *entry /= sum;
        }
    }

    Ok(ChannelModel {
        q,
        rho,
        edges,
        transition,
    })
}

/// Draws two consecutive unit-mean power gains with power correlation `rho`.
pub fn sample_gain_pair<R: Rng + ?Sized>(rho: f64, rng: &mut R) -> Result<(f64, f64)> {
    check_rho(rho)?;
    let mut process = GainProcess::new(rho, rng)?;
    let first = process.gain();
    process.advance(rng);
    Ok((first, process.gain()))
}

/// Continuous correlated Rayleigh process: a first-order complex
/// autoregression `g' = sqrt(rho) g + sqrt(1 - rho) w` with `w ~ CN(0, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct GainProcess {
    re: f64,
    im: f64,
    memory: f64,
    innovation: f64,
}

impl GainProcess {
    /// Starts the process in its stationary law.
    pub fn new<R: Rng + ?Sized>(rho: f64, rng: &mut R) -> Result<Self> {
        check_rho(rho)?;
        let (re, im) = complex_normal(rng);
        Ok(Self {
            re,
            im,
            memory: rho.sqrt(),
            innovation: (1.0 - rho).sqrt(),
        })
    }

    /// Current power gain `|g|^2`.
    pub fn gain(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let (wr, wi) = complex_normal(rng);
        self.re = self.memory * self.re + self.innovation * wr;
        self.im = self.memory * self.im + self.innovation * wi;
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    (re * std::f64::consts::FRAC_1_SQRT_2, im * std::f64::consts::FRAC_1_SQRT_2)
}
