//! Slot-by-slot Monte Carlo estimates of throughput and efficiency.
//!
//! Both simulators drive [`step_in_place`], so they share the protocol
//! automaton with the analytic chain. Standard errors come from
//! non-overlapping batch means over one long run.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decode::{decode, decode_gain, gain_thresholds, threshold_indices, DecodeOutcome, LinkBudget, ThresholdEdgePolicy};
use crate::error::{invalid, Error, Result};
use crate::fading::{ChannelModel, GainProcess};
use crate::interference::InterferenceModel;
use crate::protocol::{initial_state, step_in_place, ProtocolConfig, ProtocolState};

pub const DEFAULT_SLOTS: u64 = 1_000_000;
pub const DEFAULT_WARMUP: u64 = 10_000;
pub const DEFAULT_BATCHES: u64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimEstimate {
    pub throughput_mean: f64,
    pub throughput_stderr: f64,
    /// `None` when no slot transmitted.
    pub efficiency_mean: Option<f64>,
    pub efficiency_stderr: Option<f64>,
    /// Fraction of measured slots that carried a transmission.
    pub tx_fraction: f64,
    pub slots: u64,
    pub warmup: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub slots: u64,
    pub warmup: u64,
    pub batches: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            slots: DEFAULT_SLOTS,
            warmup: DEFAULT_WARMUP,
            batches: DEFAULT_BATCHES,
        }
    }
}

impl Budget {
    pub fn new(slots: u64, warmup: u64) -> Self {
        Self {
            slots,
            warmup,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.batches < 30 {
            return Err(invalid(format!("need at least 30 batches, got {}", self.batches)));
        }
        if self.slots < self.batches {
            return Err(invalid(format!(
                "{} slots cannot fill {} batches",
                self.slots, self.batches
            )));
        }
        if self.slots / 10 < self.warmup {
            return Err(invalid(format!(
                "slots ({}) must be at least ten times the warmup ({})",
                self.slots, self.warmup
            )));
        }
        Ok(())
    }
}

/// Simulation with the quantized channel: `h` follows the FSMC kernel.
pub fn simulate_chain_sampled(
    cm: &ChannelModel,
    im: &InterferenceModel,
    lb: &LinkBudget,
    cfg: &ProtocolConfig,
    seed: u64,
    slots: u64,
    warmup: u64,
) -> Result<SimEstimate> {
    simulate_chain_sampled_with(cm, im, lb, cfg, seed, Budget::new(slots, warmup), ThresholdEdgePolicy::default())
}

pub fn simulate_chain_sampled_with(
    cm: &ChannelModel,
    im: &InterferenceModel,
    lb: &LinkBudget,
    cfg: &ProtocolConfig,
    seed: u64,
    budget: Budget,
    policy: ThresholdEdgePolicy,
) -> Result<SimEstimate> {
    budget.validate()?;
    let (g0, g1) = gain_thresholds(lb);
    let (h0, h1) = threshold_indices(cm, g0, g1, policy);
    let mut digest = Digest::new(b"fsmc");
    digest.config(cfg);
    digest.interference(im);
    digest.u64(cm.q() as u64);
    digest.f64(cm.rho());
    digest.u64(h0 as u64);
    digest.u64(h1 as u64);
    let mut rng = stream(seed, digest.finish());

    // Same start as the chain: h = 1, psi = 0.
    let (mut h, mut psi) = (1usize, 0u8);
    let mut env = |rng: &mut ChaCha8Rng| {
        let outcome = decode(h, psi, h0, h1);
        h = sample_row(cm.transition()[h - 1].as_slice(), rng) + 1;
        psi = im.next_state(psi, rng);
        outcome
    };
    run(cfg, seed, budget, &mut rng, &mut env)
}

/// Simulation with the unquantized correlated Rayleigh gain, decoding
/// against the gain thresholds directly.
pub fn simulate_continuous(
    rho: f64,
    im: &InterferenceModel,
    lb: &LinkBudget,
    cfg: &ProtocolConfig,
    seed: u64,
    slots: u64,
    warmup: u64,
) -> Result<SimEstimate> {
    simulate_continuous_with(rho, im, lb, cfg, seed, Budget::new(slots, warmup))
}

pub fn simulate_continuous_with(
    rho: f64,
    im: &InterferenceModel,
    lb: &LinkBudget,
    cfg: &ProtocolConfig,
    seed: u64,
    budget: Budget,
) -> Result<SimEstimate> {
    budget.validate()?;
    let (g0, g1) = gain_thresholds(lb);
    let mut digest = Digest::new(b"continuous");
    digest.config(cfg);
    digest.interference(im);
    digest.f64(rho);
    digest.f64(g0);
    digest.f64(g1);
    let mut rng = stream(seed, digest.finish());

    let mut gain = GainProcess::new(rho, &mut rng)?;
    let mut psi = 0u8;
    let mut env = |rng: &mut ChaCha8Rng| {
        let outcome = decode_gain(gain.gain(), psi, g0, g1);
        gain.advance(rng);
        psi = im.next_state(psi, rng);
        outcome
    };
    run(cfg, seed, budget, &mut rng, &mut env)
}

fn stream(seed: u64, digest: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(digest);
    rng
}

fn sample_row<R: Rng + ?Sized>(row: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // rounding left a sliver above the last cumulative sum
    row.iter().rposition(|&p| p > 0.0).unwrap_or(row.len() - 1)
}

/// Follows packet identities through the window to check that no packet
/// is delivered twice and none leaves undelivered.
#[derive(Default)]
struct Ledger {
    next_id: u64,
    window: VecDeque<(u64, u8)>,
}

impl Ledger {
    fn depart(&mut self, count: usize) -> Result<()> {
        for _ in 0..count {
            let (id, delivered) = self
                .window
                .pop_front()
                .ok_or_else(|| Error::Invariant("departure from an empty window".into()))?;
            if delivered != 1 {
                return Err(Error::Invariant(format!(
                    "packet {id} left the window after {delivered} deliveries"
                )));
            }
        }
        Ok(())
    }
}

fn run(
    cfg: &ProtocolConfig,
    seed: u64,
    budget: Budget,
    rng: &mut ChaCha8Rng,
    env: &mut dyn FnMut(&mut ChaCha8Rng) -> DecodeOutcome,
) -> Result<SimEstimate> {
    let mut state: ProtocolState = initial_state(cfg);
    let mut ledger = Ledger::default();
    let alpha = cfg.alpha();

    let mut slot = |rng: &mut ChaCha8Rng, state: &mut ProtocolState| -> Result<(u8, u8)> {
        let outcome = env(rng);
        let arrival = rng.gen::<f64>() < alpha;
        let trace = step_in_place(state, cfg, outcome, arrival)?;
        ledger.depart(trace.departed_on_feedback)?;
        if trace.admitted {
            ledger.window.push_back((ledger.next_id, 0));
            ledger.next_id += 1;
        }
        if trace.reward.delivered == 1 {
            let pos = trace
                .sent
                .ok_or_else(|| Error::Invariant("delivery without a transmission".into()))?;
            let entry = &mut ledger.window[pos];
            entry.1 += 1;
            if entry.1 > 1 {
                return Err(Error::Invariant(format!("packet {} delivered twice", entry.0)));
            }
        }
        ledger.depart(trace.departed_at_end)?;
        Ok((trace.reward.delivered, trace.reward.transmitted))
    };

    for _ in 0..budget.warmup {
        slot(rng, &mut state)?;
    }
    let n = budget.batches;
    let mut delivered = Vec::with_capacity(n as usize);
    let mut transmitted = Vec::with_capacity(n as usize);
    let mut sizes = Vec::with_capacity(n as usize);
    for b in 0..n {
        let len = (b + 1) * budget.slots / n - b * budget.slots / n;
        let (mut d, mut t) = (0u64, 0u64);
        for _ in 0..len {
            let (dd, tt) = slot(rng, &mut state)?;
            d += u64::from(dd);
            t += u64::from(tt);
        }
        delivered.push(d as f64);
        transmitted.push(t as f64);
        sizes.push(len as f64);
    }

    let nf = n as f64;
    let rates: Vec<f64> = delivered.iter().zip(&sizes).map(|(d, s)| d / s).collect();
    let (throughput_mean, throughput_stderr) = mean_stderr(&rates);

    let (total_d, total_t): (f64, f64) = (delivered.iter().sum(), transmitted.iter().sum());
    let (efficiency_mean, efficiency_stderr) = if total_t > 0.0 {
        // ratio estimator; batch residuals give its delta-method variance
        let ratio = total_d / total_t;
        let mean_t = total_t / nf;
        let ss: f64 = delivered
            .iter()
            .zip(&transmitted)
            .map(|(d, t)| (d - ratio * t).powi(2))
            .sum();
        let se = (ss / (nf * (nf - 1.0))).sqrt() / mean_t;
        (Some(ratio), Some(se))
    } else {
        (None, None)
    };

    Ok(SimEstimate {
        throughput_mean,
        throughput_stderr,
        efficiency_mean,
        efficiency_stderr,
        tx_fraction: total_t / budget.slots as f64,
        slots: budget.slots,
        warmup: budget.warmup,
        seed,
    })
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// FNV-1a over the parameters that define a run, used to pick the stream.
struct Digest(u64);

impl Digest {
    fn new(tag: &[u8]) -> Self {
        let mut d = Digest(0xcbf2_9ce4_8422_2325);
        d.bytes(tag);
        d
    }

    fn bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn u64(&mut self, v: u64) {
        self.bytes(&v.to_le_bytes());
    }

    fn f64(&mut self, v: f64) {
        self.u64(v.to_bits());
    }

    fn config(&mut self, cfg: &ProtocolConfig) {
        self.bytes(cfg.protocol().as_str().as_bytes());
        self.bytes(cfg.architecture().as_str().as_bytes());
        self.u64(u64::from(cfg.delta()));
        self.u64(u64::from(cfg.window()));
        self.u64(u64::from(cfg.b_max()));
        self.f64(cfg.alpha());
    }

    fn interference(&mut self, im: &InterferenceModel) {
        self.f64(im.p(0, 1));
        self.f64(im.p(1, 0));
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::build_fsmc;
    use crate::interference::from_rate_burstiness;
    use crate::protocol::{Architecture, Protocol};

    fn quiet() -> InterferenceModel {
        from_rate_burstiness(0.6, 6.0, 0.0).unwrap()
    }

    /// Thresholds inside the lowest bin; with the optimistic edge policy
    /// every slot decodes.
    fn always(
        cm: &ChannelModel,
        cfg: &ProtocolConfig,
        seed: u64,
        budget: Budget,
    ) -> Result<SimEstimate> {
        let lb = LinkBudget::new(1.0, 1.0, 1e-6, 0.0).unwrap();
        simulate_chain_sampled_with(cm, &quiet(), &lb, cfg, seed, budget, ThresholdEdgePolicy::Optimistic)
    }

    fn within(est: &SimEstimate, target: f64) -> bool {
        (est.throughput_mean - target).abs() <= 3.0 * est.throughput_stderr + 1e-12
    }

    #[test]
    fn budget_rules() {
        let cm = build_fsmc(2, 0.3, 1e-8).unwrap();
        let cfg = ProtocolConfig::stop_and_wait(Architecture::Conventional, 0, 1, 0.5).unwrap();
        let err = always(&cm, &cfg, 1, Budget::new(1000, 101)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(always(&cm, &cfg, 1, Budget::new(20, 0)).is_err());
        assert!(always(&cm, &cfg, 1, Budget { batches: 10, ..Budget::new(1000, 0) }).is_err());
    }

    #[test]
    fn always_success_stop_and_wait_tracks_arrivals() {
        let cm = build_fsmc(4, 0.3, 1e-8).unwrap();
        let cfg = ProtocolConfig::stop_and_wait(Architecture::Conventional, 0, 1, 0.5).unwrap();
        let est = always(&cm, &cfg, 7, Budget::new(200_000, 1000)).unwrap();
        assert!(within(&est, 0.5), "{est:?}");
        assert_eq!(est.efficiency_mean, Some(1.0));
    }

    #[test]
    fn cran_stop_and_wait_waits_for_feedback() {
        let cm = build_fsmc(4, 0.3, 1e-8).unwrap();
        let cfg = ProtocolConfig::stop_and_wait(Architecture::Cran, 5, 1, 1.0).unwrap();
        let est = always(&cm, &cfg, 7, Budget::new(200_000, 1000)).unwrap();
        assert!(within(&est, 0.2), "{est:?}");
    }

    #[test]
    fn continuous_saturated_success_rate_is_the_exponential_tail() {
        // gamma / P = 0.5 gives g0 = g1 = 0.5 with no interference power
        let lb = LinkBudget::new(2.0, 1.0, 1.0, 0.0).unwrap();
        let cfg = ProtocolConfig::stop_and_wait(Architecture::Conventional, 0, 1, 1.0).unwrap();
        let est = simulate_continuous(0.0, &quiet(), &lb, &cfg, 3, 200_000, 1000).unwrap();
        assert!(within(&est, (-0.5f64).exp()), "{est:?}");
    }

    #[test]
    fn runs_are_reproducible_and_streams_differ() {
        let cm = build_fsmc(8, 0.3, 1e-8).unwrap();
        let im = from_rate_burstiness(0.6, 6.0, 0.1).unwrap();
        let lb = LinkBudget::from_db(30.0, 1.0, 10.0, 10.0).unwrap();
        let cfg = ProtocolConfig::new(Protocol::GoBackN, Architecture::Hybrid, 3, 3, 1, 0.5).unwrap();
        let a = simulate_chain_sampled(&cm, &im, &lb, &cfg, 11, 50_000, 500).unwrap();
        let b = simulate_chain_sampled(&cm, &im, &lb, &cfg, 11, 50_000, 500).unwrap();
        assert_eq!(a, b);
        let c = simulate_chain_sampled(&cm, &im, &lb, &cfg, 12, 50_000, 500).unwrap();
        assert_ne!(a.throughput_mean, c.throughput_mean);
        let d = simulate_continuous(0.3, &im, &lb, &cfg, 11, 50_000, 500).unwrap();
        assert_eq!(d, simulate_continuous(0.3, &im, &lb, &cfg, 11, 50_000, 500).unwrap());
    }

    #[test]
    fn sample_row_follows_the_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let row = [0.2, 0.0, 0.8];
        let mut counts = [0u32; 3];
        for _ in 0..100_000 {
            counts[sample_row(&row, &mut rng)] += 1;
        }
        assert_eq!(counts[1], 0);
        let p = f64::from(counts[0]) / 1e5;
        assert!((p - 0.2).abs() < 4.0 * (0.2f64 * 0.8 / 1e5).sqrt());
    }
}
