//! Threshold decoding at the base station (SINR) and at the control unit
//! (SNR, interference removed), mapped onto channel bins.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fading::ChannelModel;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub p_tx: f64,
    pub sigma2: f64,
    pub gamma: f64,
    pub i_power: f64,
    /// Extra noise seen at the CU (fronthaul quantization); zero by default.
    pub sigma_q2: f64,
}

impl LinkBudget {
    pub fn new(p_tx: f64, sigma2: f64, gamma: f64, i_power: f64) -> Result<Self> {
        let lb = Self {
            p_tx,
            sigma2,
            gamma,
            i_power,
            sigma_q2: 0.0,
        };
        lb.validate()?;
        Ok(lb)
    }

    /// Converts the dB-valued parameters; interference power follows from
    /// `SIR = P / I`.
    pub fn from_db(p_db: f64, sigma2: f64, gamma_db: f64, sir_db: f64) -> Result<Self> {
        let p_tx = db_to_linear(p_db);
        Self::new(p_tx, sigma2, db_to_linear(gamma_db), p_tx / db_to_linear(sir_db))
    }

    pub fn with_quantization_noise(mut self, sigma_q2: f64) -> Result<Self> {
        self.sigma_q2 = sigma_q2;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("p_tx", self.p_tx), ("sigma2", self.sigma2), ("gamma", self.gamma)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        for (name, v) in [("i_power", self.i_power), ("sigma_q2", self.sigma_q2)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if self.sigma_q2 > self.i_power {
            // keeps g0 <= g1, i.e. CU decoding never worse than BS decoding
            return Err(invalid(format!(
                "quantization noise {} exceeds interference power {}",
                self.sigma_q2, self.i_power
            )));
        }
        Ok(())
    }
}

/// Whether a channel bin that straddles a gain threshold decodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdEdgePolicy {
    /// The straddling bin fails.
    #[default]
    Conservative,
    /// The straddling bin succeeds.
    Optimistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DecodeOutcome {
    pub bs_ok: bool,
    pub cu_ok: bool,
}

/// Gain thresholds `(g0, g1)` for decoding at the CU and at an interfered BS.
pub fn gain_thresholds(lb: &LinkBudget) -> (f64, f64) {
    let g0 = lb.gamma * (lb.sigma2 + lb.sigma_q2) / lb.p_tx;
    let g1 = lb.gamma * (lb.sigma2 + lb.i_power) / lb.p_tx;
    (g0, g1)
}

/// Bin indices `(h0, h1)`: a bin decodes iff its index is strictly greater.
/// Index 0 means every bin decodes.
pub fn threshold_indices(
    cm: &ChannelModel,
    g0: f64,
    g1: f64,
    policy: ThresholdEdgePolicy,
) -> (usize, usize) {
    debug_assert!(g0 <= g1);
    let index = |g: f64| {
        if g <= 0.0 {
            return 0;
        }
        let containing = cm.bin_of(g);
        match policy {
            ThresholdEdgePolicy::Conservative => containing,
            ThresholdEdgePolicy::Optimistic => containing - 1,
        }
    };
    (index(g0), index(g1))
}

pub fn decode(h_idx: usize, psi: u8, h0: usize, h1: usize) -> DecodeOutcome {
    let cu_ok = h_idx > h0;
    let bs_ok = if psi == 1 { h_idx > h1 } else { cu_ok };
    DecodeOutcome { bs_ok, cu_ok }
}

/// Decoding against the continuous gain, without binning.
pub fn decode_gain(gain: f64, psi: u8, g0: f64, g1: f64) -> DecodeOutcome {
    let cu_ok = gain > g0;
    let bs_ok = if psi == 1 { gain > g1 } else { cu_ok };
    DecodeOutcome { bs_ok, cu_ok }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::build_fsmc;
    use proptest::prelude::*;

    #[test]
    fn thresholds_at_default_link_budget() {
        let lb = LinkBudget::from_db(30.0, 1.0, 10.0, 10.0).unwrap();
        assert!((lb.i_power - 100.0).abs() < 1e-9);
        let (g0, g1) = gain_thresholds(&lb);
        assert!((g0 - 0.01).abs() < 1e-15);
        assert!((g1 - 1.01).abs() < 1e-12);
    }

    #[test]
    fn no_interference_collapses_thresholds() {
        let lb = LinkBudget::new(1000.0, 1.0, 10.0, 0.0).unwrap();
        let (g0, g1) = gain_thresholds(&lb);
        assert_eq!(g0, g1);
        let lb = LinkBudget::new(1000.0, 1.0, 1e-300, 5.0).unwrap();
        let (g0, g1) = gain_thresholds(&lb);
        assert!(g0 < 1e-300 && g1 < 1e-298);
    }

    #[test]
    fn threshold_index_examples() {
        let cm = build_fsmc(8, 0.3, 1e-8).unwrap();
        assert_eq!(threshold_indices(&cm, 0.01, 1.01, ThresholdEdgePolicy::Conservative), (1, 6));
        assert_eq!(threshold_indices(&cm, 0.0, 1.01, ThresholdEdgePolicy::Conservative), (0, 6));
        assert_eq!(threshold_indices(&cm, 0.01, 1.01, ThresholdEdgePolicy::Optimistic), (0, 5));
        assert_eq!(threshold_indices(&cm, 0.01, 1e6, ThresholdEdgePolicy::Conservative), (1, 8));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(7, 1, 1, 6), DecodeOutcome { bs_ok: true, cu_ok: true });
        assert_eq!(decode(1, 0, 1, 6), DecodeOutcome { bs_ok: false, cu_ok: false });
        assert_eq!(decode(3, 1, 1, 6), DecodeOutcome { bs_ok: false, cu_ok: true });
    }

    #[test]
    fn rejects_bad_budgets() {
        assert!(LinkBudget::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(LinkBudget::new(1.0, 1.0, 1.0, -1.0).is_err());
        assert!(LinkBudget::new(1.0, 1.0, 1.0, 0.5)
            .unwrap()
            .with_quantization_noise(1.0)
            .is_err());
    }

    proptest! {
        #[test]
        fn decode_invariants(q in 1usize..20, a in 0usize..21, b in 0usize..21) {
            let (h0, h1) = (a.min(b).min(q), a.max(b).min(q));
            for psi in 0..=1u8 {
                let mut prev = DecodeOutcome::default();
                for h in 1..=q {
                    let d = decode(h, psi, h0, h1);
                    prop_assert!(!d.bs_ok || d.cu_ok);
                    prop_assert_eq!(d.cu_ok, decode(h, 1 - psi, h0, h1).cu_ok);
                    prop_assert!(d.bs_ok >= prev.bs_ok && d.cu_ok >= prev.cu_ok);
                    if h0 == h1 {
                        prop_assert_eq!(d.bs_ok, d.cu_ok);
                    }
                    prev = d;
                }
            }
        }
    }
}
