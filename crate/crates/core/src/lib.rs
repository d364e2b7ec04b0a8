//! Markov-chain evaluation of Stop-and-Wait, Go-Back-N and Selective Repeat
//! ARQ over conventional, C-RAN and hybrid C-RAN uplinks, where CU feedback
//! reaches the terminal after a fronthaul delay.
//!
//! The pieces compose as follows: [`fading`] and [`interference`] give the
//! environment chains, [`decode`] maps their states to decode outcomes,
//! [`protocol`] advances the terminal's ARQ state by one slot, [`chain`]
//! builds and solves the product chain, and [`sim`] is an independent
//! Monte Carlo estimator driven by the same slot automaton.

pub mod chain;
pub mod config;
pub mod decode;
pub mod error;
pub mod fading;
pub mod interference;
pub mod numerics;
pub mod protocol;
pub mod report;
pub mod scc;
pub mod sim;

pub use chain::{build_chain, metrics, stationary_distribution, Chain, Metrics, StationaryResult};
pub use decode::{DecodeOutcome, LinkBudget, ThresholdEdgePolicy};
pub use error::{Error, Result};
pub use fading::{build_fsmc, ChannelModel};
pub use interference::{from_rate_burstiness, rate_burstiness, InterferenceModel};
pub use protocol::{Architecture, Protocol, ProtocolConfig, ProtocolState};
