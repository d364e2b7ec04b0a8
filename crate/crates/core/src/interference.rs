//! Two-state on-off interference chain, parameterized by the stationary
//! interference rate and the mean length of interference bursts.

use rand::Rng;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceModel {
    /// P(on | off).
    pub p01: f64,
    /// P(off | on).
    pub p10: f64,
    /// Interference power while on, linear scale.
    pub i_power: f64,
}

impl InterferenceModel {
    /// Builds the chain from its raw transition probabilities.
    pub fn new(p01: f64, p10: f64, i_power: f64) -> Result<Self> {
        for (name, p) in [("p01", p01), ("p10", p10)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("{name} must be a probability, got {p}")));
            }
        }
        if !(i_power >= 0.0) || !i_power.is_finite() {
            return Err(invalid(format!("interference power must be finite and >= 0, got {i_power}")));
        }
        Ok(Self { p01, p10, i_power })
    }

    /// `p(next | current)` for states in {0, 1}.
    pub fn p(&self, current: u8, next: u8) -> f64 {
        match (current, next) {
            (0, 1) => self.p01,
            (0, _) => 1.0 - self.p01,
            (_, 0) => self.p10,
            _ => 1.0 - self.p10,
        }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.p(0, 0), self.p(0, 1)], [self.p(1, 0), self.p(1, 1)]]
    }

    /// Stationary law (off, on); requires `p01 + p10 > 0`.
    pub fn stationary(&self) -> Result<[f64; 2]> {
        let total = self.p01 + self.p10;
        if total <= 0.0 {
            return Err(Error::DegenerateChain(
                "interference chain with p01 = p10 = 0 has no unique stationary law".into(),
            ));
        }
        let on = self.p01 / total;
        Ok([1.0 - on, on])
    }

    pub fn next_state<R: Rng + ?Sized>(&self, current: u8, rng: &mut R) -> u8 {
        let u: f64 = rng.gen();
        if current == 0 {
            u8::from(u < self.p01)
        } else {
            u8::from(u >= self.p10)
        }
    }
}

/// Inverts `E = p01 / (p01 + p10)` and `B = 1 / p10`.
pub fn from_rate_burstiness(e: f64, b: f64, i_power: f64) -> Result<InterferenceModel> {
    if e == 0.0 || e == 1.0 {
        return Err(Error::DegenerateChain(format!(
            "interference rate {e} yields an absorbing chain; use i_power = 0 for an interference-free link"
        )));
    }
    if !(e > 0.0 && e < 1.0) {
        return Err(invalid(format!("interference rate must lie in (0, 1), got {e}")));
    }
    if !(b >= 1.0) || !b.is_finite() {
        return Err(invalid(format!("burstiness must be finite and >= 1, got {b}")));
    }
    let p10 = 1.0 / b;
    let p01 = e * p10 / (1.0 - e);
    if p01 > 1.0 {
        return Err(Error::InfeasibleInterference {
            rate: e,
            burstiness: b,
            required_p01: p01,
        });
    }
    InterferenceModel::new(p01, p10, i_power)
}

/// Recovers `(E, B)` from the chain.
pub fn rate_burstiness(m: &InterferenceModel) -> Result<(f64, f64)> {
    if m.p10 <= 0.0 {
        return Err(Error::DegenerateChain(
            "p10 = 0 makes the interference state absorbing; burstiness is unbounded".into(),
        ));
    }
    Ok((m.p01 / (m.p01 + m.p10), 1.0 / m.p10))
}
