//! Experiment configuration: a flat JSON object with defaults for every
//! field except `protocol` and `architecture`.
//!
//! Environment variables named `CRAN_ARQ_<FIELD>` (upper case) override
//! fields of the document. Values are read as JSON when possible and as
//! strings otherwise, so `CRAN_ARQ_DELTA=3` and `CRAN_ARQ_PROTOCOL=gbn`
//! both work.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::decode::{LinkBudget, ThresholdEdgePolicy};
use crate::error::{Error, Result};
use crate::fading::{build_fsmc, ChannelModel, DEFAULT_QUADRATURE_TOL};
use crate::interference::{from_rate_burstiness, InterferenceModel};
use crate::protocol::{Architecture, Protocol, ProtocolConfig};

pub const ENV_PREFIX: &str = "CRAN_ARQ_";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    pub architecture: Architecture,
    #[serde(default = "defaults::q")]
    pub q: usize,
    #[serde(default = "defaults::rho")]
    pub rho: f64,
    #[serde(default = "defaults::p_db")]
    pub p_db: f64,
    #[serde(default = "defaults::sigma2")]
    pub sigma2: f64,
    #[serde(default = "defaults::gamma_db")]
    pub gamma_db: f64,
    #[serde(default = "defaults::sir_db")]
    pub sir_db: f64,
    #[serde(default = "defaults::e_int")]
    pub e_int: f64,
    #[serde(default = "defaults::b_int")]
    pub b_int: f64,
    #[serde(default = "defaults::alpha")]
    pub alpha: f64,
    #[serde(default = "defaults::b_max")]
    pub b_max: u32,
    #[serde(default = "defaults::delta")]
    pub delta: u32,
    /// Defaults to `delta` for Go-Back-N and Selective Repeat, 1 for
    /// Stop-and-Wait.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_slots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_warmup: Option<u64>,
    #[serde(default)]
    pub threshold_edge_policy: ThresholdEdgePolicy,
}

mod defaults {
    pub fn q() -> usize {
        8
    }
    pub fn rho() -> f64 {
        0.3
    }
    pub fn p_db() -> f64 {
        30.0
    }
    pub fn sigma2() -> f64 {
        1.0
    }
    pub fn gamma_db() -> f64 {
        10.0
    }
    pub fn sir_db() -> f64 {
        10.0
    }
    pub fn e_int() -> f64 {
        0.6
    }
    pub fn b_int() -> f64 {
        6.0
    }
    pub fn alpha() -> f64 {
        0.5
    }
    pub fn b_max() -> u32 {
        1
    }
    pub fn delta() -> u32 {
        5
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    parse_config_with_overrides(text, std::iter::empty::<(String, String)>())
}

/// Like [`parse_config`], applying `CRAN_ARQ_*` pairs from `vars` on top of
/// the document. Unrelated variables are ignored.
pub fn parse_config_with_overrides<I, K, V>(text: &str, vars: I) -> Result<ExperimentConfig>
where
    I: IntoIterator<Item = (K, V)>,
    K: AsRef<str>,
    V: AsRef<str>,
{
    let mut doc: Map<String, Value> =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    for (key, value) in vars {
        let Some(field) = key.as_ref().strip_prefix(ENV_PREFIX) else {
            continue;
        };
        let raw = value.as_ref();
        let parsed = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_owned()));
        doc.insert(field.to_ascii_lowercase(), parsed);
    }
    let cfg: ExperimentConfig =
        serde_json::from_value(Value::Object(doc)).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads `path` and applies overrides from the process environment.
pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_with_overrides(&text, std::env::vars())
}

impl ExperimentConfig {
    /// Default parameters for the given pair.
    pub fn new(protocol: Protocol, architecture: Architecture) -> Self {
        Self {
            protocol,
            architecture,
            q: defaults::q(),
            rho: defaults::rho(),
            p_db: defaults::p_db(),
            sigma2: defaults::sigma2(),
            gamma_db: defaults::gamma_db(),
            sir_db: defaults::sir_db(),
            e_int: defaults::e_int(),
            b_int: defaults::b_int(),
            alpha: defaults::alpha(),
            b_max: defaults::b_max(),
            delta: defaults::delta(),
            window: None,
            seed: None,
            mc_slots: None,
            mc_warmup: None,
            threshold_edge_policy: ThresholdEdgePolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 {
            return Err(Error::Config("q must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(Error::Config(format!("rho must lie in [0, 1), got {}", self.rho)));
        }
        if self.delta < 1 && self.architecture != Architecture::Conventional {
            return Err(Error::Config(format!(
                "delta = 0 with architecture {}: CU feedback arrives after delta >= 1 time slots",
                self.architecture
            )));
        }
        self.interference()?;
        self.link_budget()?;
        self.protocol_config()?;
        Ok(())
    }

    pub fn effective_window(&self) -> u32 {
        match (self.window, self.protocol) {
            (Some(w), _) => w,
            (None, Protocol::StopAndWait) => 1,
            (None, _) => self.delta,
        }
    }

    pub fn protocol_config(&self) -> Result<ProtocolConfig> {
        ProtocolConfig::new(
            self.protocol,
            self.architecture,
            self.delta,
            self.effective_window(),
            self.b_max,
            self.alpha,
        )
    }

    pub fn link_budget(&self) -> Result<LinkBudget> {
        LinkBudget::from_db(self.p_db, self.sigma2, self.gamma_db, self.sir_db)
    }

    /// Interference power follows from the SIR.
    pub fn interference(&self) -> Result<InterferenceModel> {
        let lb = self.link_budget()?;
        from_rate_burstiness(self.e_int, self.b_int, lb.i_power)
    }

    pub fn channel(&self) -> Result<ChannelModel> {
        build_fsmc(self.q, self.rho, DEFAULT_QUADRATURE_TOL)
    }
}
