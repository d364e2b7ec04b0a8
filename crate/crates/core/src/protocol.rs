//! Slot-level ARQ automaton for Stop-and-Wait, Go-Back-N and Selective
//! Repeat under the conventional, C-RAN and hybrid C-RAN architectures.
//!
//! The window is positional: entry 0 is the oldest outstanding packet.
//! Each slot runs three phases in a fixed order:
//!
//! 1. Feedback. Awaiting entries age by one slot; an entry whose age
//!    reaches `delta` resolves. A success becomes `Acked`. A failure turns
//!    the entry (and, for Go-Back-N, every entry behind it) back to
//!    `Unsent`. Acked entries at the head of the window then depart.
//! 2. Transmission. The oldest unsent entry is sent; otherwise a buffered
//!    packet is admitted if the window has room; otherwise the slot idles.
//!    The receiver's acceptance decision is taken now, which is also when
//!    the delivery reward is counted.
//! 3. Slide and arrival. Acked head entries depart; an arrival joins the
//!    buffer unless it is full.
//!
//! Feedback from the CU for a transmission in slot `k` is therefore acted
//! on in slot `k + delta`. BS feedback (conventional, and hybrid when the
//! BS decodes) is acted on within the same slot.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decode::DecodeOutcome;
use crate::error::{invalid, Error, Result};

/// Largest supported fronthaul delay, in slots.
pub const MAX_DELTA: u32 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "sw")]
    StopAndWait,
    #[serde(rename = "gbn")]
    GoBackN,
    #[serde(rename = "sr")]
    SelectiveRepeat,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::StopAndWait, Protocol::GoBackN, Protocol::SelectiveRepeat];

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::StopAndWait => "sw",
            Protocol::GoBackN => "gbn",
            Protocol::SelectiveRepeat => "sr",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    Conventional,
    Cran,
    Hybrid,
}

impl Architecture {
    pub const ALL: [Architecture; 3] = [Architecture::Conventional, Architecture::Cran, Architecture::Hybrid];

    pub fn as_str(self) -> &'static str {
        match self {
            Architecture::Conventional => "conventional",
            Architecture::Cran => "cran",
            Architecture::Hybrid => "hybrid",
        }
    }

    /// Whether a transmission with this decode outcome reaches the receiver.
    fn decoded(self, outcome: DecodeOutcome) -> bool {
        match self {
            Architecture::Conventional => outcome.bs_ok,
            Architecture::Cran => outcome.cu_ok,
            Architecture::Hybrid => outcome.bs_ok || outcome.cu_ok,
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    protocol: Protocol,
    architecture: Architecture,
    delta: u32,
    window: u32,
    b_max: u32,
    alpha: f64,
}

impl ProtocolConfig {
    pub fn new(
        protocol: Protocol,
        architecture: Architecture,
        delta: u32,
        window: u32,
        b_max: u32,
        alpha: f64,
    ) -> Result<Self> {
        if protocol == Protocol::StopAndWait && window != 1 {
            return Err(invalid(format!("stop-and-wait uses a window of 1, got {window}")));
        }
        if window == 0 {
            return Err(invalid("window must be at least 1"));
        }
        if architecture != Architecture::Conventional && delta == 0 {
            return Err(invalid(
                "fronthaul feedback arrives after delta >= 1 slots for cran and hybrid",
            ));
        }
        if delta > MAX_DELTA {
            return Err(invalid(format!("delta {delta} exceeds the supported maximum {MAX_DELTA}")));
        }
        if b_max == 0 {
            return Err(invalid("buffer capacity b_max must be at least 1"));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(invalid(format!("arrival probability alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self {
            protocol,
            architecture,
            delta,
            window,
            b_max,
            alpha,
        })
    }

    /// Stop-and-Wait configuration (window 1).
    pub fn stop_and_wait(architecture: Architecture, delta: u32, b_max: u32, alpha: f64) -> Result<Self> {
        Self::new(Protocol::StopAndWait, architecture, delta, 1, b_max, alpha)
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol
    }
    pub fn architecture(&self) -> Architecture {
        self.architecture
    }
    pub fn delta(&self) -> u32 {
        self.delta
    }
    pub fn window(&self) -> u32 {
        self.window
    }
    pub fn b_max(&self) -> u32 {
        self.b_max
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The conventional architecture never waits for fronthaul feedback.
    pub fn delta_ignored(&self) -> bool {
        self.architecture == Architecture::Conventional
    }

    /// Window-1 Go-Back-N and Selective Repeat behave exactly like
    /// Stop-and-Wait, and only the receiver rule differs otherwise.
    fn in_order_receiver(&self) -> bool {
        self.protocol == Protocol::GoBackN
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feedback {
    Failure,
    Success,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryStatus {
    Unsent,
    Awaiting { age: u16, outcome: Feedback },
    Acked,
    /// Go-Back-N only: sent behind an entry whose failure is pending, so
    /// it will be flushed back to `Unsent` before its own feedback counts.
    Doomed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WindowEntry {
    pub status: EntryStatus,
    /// The receiver holds this packet (it has been delivered).
    pub accepted: bool,
}

impl WindowEntry {
    fn fresh() -> Self {
        Self {
            status: EntryStatus::Unsent,
            accepted: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ProtocolState {
    /// Packets waiting outside the window.
    pub buffer: u32,
    /// Outstanding packets, oldest first.
    pub window: Vec<WindowEntry>,
}

const TAG_UNSENT: u8 = 0;
const TAG_AWAITING: u8 = 1;
const TAG_ACKED: u8 = 2;
const TAG_DOOMED: u8 = 3;
const ENTRY_KEY_LEN: usize = 5;

impl ProtocolState {
    /// Injective byte encoding of the state.
    ///
    /// Layout: `buffer` as little-endian `u32`, then five bytes per window
    /// entry, oldest first: status tag (0 unsent, 1 awaiting, 2 acked,
    /// 3 doomed),
    /// age as little-endian `u16` (0 unless awaiting), outcome (1 success,
    /// 0 failure or not awaiting) and accepted (0/1).
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(4 + ENTRY_KEY_LEN * self.window.len());
        key.extend_from_slice(&self.buffer.to_le_bytes());
        for entry in &self.window {
            let (tag, age, outcome) = match entry.status {
                EntryStatus::Unsent => (TAG_UNSENT, 0u16, 0u8),
                EntryStatus::Awaiting { age, outcome } => {
                    (TAG_AWAITING, age, u8::from(outcome == Feedback::Success))
                }
                EntryStatus::Acked => (TAG_ACKED, 0, 0),
                EntryStatus::Doomed => (TAG_DOOMED, 0, 0),
            };
            key.push(tag);
            key.extend_from_slice(&age.to_le_bytes());
            key.push(outcome);
            key.push(u8::from(entry.accepted));
        }
        key
    }

    pub fn from_canonical_key(key: &[u8]) -> Result<Self> {
        let bad = |why: &str| Error::Invariant(format!("malformed protocol-state key: {why}"));
        if key.len() < 4 || !(key.len() - 4).is_multiple_of(ENTRY_KEY_LEN) {
            return Err(bad("length"));
        }
        let buffer = u32::from_le_bytes(key[..4].try_into().expect("4 bytes"));
        let window = key[4..]
            .chunks_exact(ENTRY_KEY_LEN)
            .map(|c| {
                let age = u16::from_le_bytes([c[1], c[2]]);
                let status = match (c[0], age, c[3]) {
                    (TAG_UNSENT, 0, 0) => EntryStatus::Unsent,
                    (TAG_ACKED, 0, 0) => EntryStatus::Acked,
                    (TAG_DOOMED, 0, 0) => EntryStatus::Doomed,
                    (TAG_AWAITING, age, o @ (0 | 1)) => EntryStatus::Awaiting {
                        age,
                        outcome: if o == 1 { Feedback::Success } else { Feedback::Failure },
                    },
                    _ => return Err(bad("status")),
                };
                let accepted = match c[4] {
                    0 => false,
                    1 => true,
                    _ => return Err(bad("accepted flag")),
                };
                Ok(WindowEntry { status, accepted })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { buffer, window })
    }

    fn check(&self, cfg: &ProtocolConfig) -> Result<()> {
        if self.window.len() > cfg.window as usize {
            return Err(Error::Invariant(format!(
                "window occupancy {} exceeds W = {}",
                self.window.len(),
                cfg.window
            )));
        }
        if self.buffer > cfg.b_max {
            return Err(Error::Invariant(format!(
                "buffer {} exceeds b_max = {}",
                self.buffer, cfg.b_max
            )));
        }
        let mut seen = 0u128;
        let mut seen_large = Vec::new();
        for entry in &self.window {
            if entry.status == EntryStatus::Doomed && !cfg.in_order_receiver() {
                return Err(Error::Invariant("doomed entry outside go-back-n".into()));
            }
            if let EntryStatus::Awaiting { age, .. } = entry.status {
                if cfg.delta_ignored() || u32::from(age) >= cfg.delta {
                    return Err(Error::Invariant(format!(
                        "awaiting age {age} outside 0..{}",
                        cfg.delta
                    )));
                }
                let duplicate = if age < 128 {
                    let bit = 1u128 << age;
                    let dup = seen & bit != 0;
                    seen |= bit;
                    dup
                } else {
                    let dup = seen_large.contains(&age);
                    seen_large.push(age);
                    dup
                };
                if duplicate {
                    return Err(Error::Invariant(format!("two awaiting entries share age {age}")));
                }
            }
        }
        Ok(())
    }

    /// Phase 1. Returns how many acked head entries departed.
    fn resolve_feedback(&mut self, cfg: &ProtocolConfig) -> usize {
        let delta = cfg.delta;
        let mut i = 0;
        while i < self.window.len() {
            if let EntryStatus::Awaiting { age, outcome } = self.window[i].status {
                let age = age + 1;
                if u32::from(age) < delta {
                    self.window[i].status = EntryStatus::Awaiting { age, outcome };
                } else if outcome == Feedback::Success {
                    self.window[i].status = EntryStatus::Acked;
                } else if cfg.in_order_receiver() {
                    for entry in &mut self.window[i..] {
                        entry.status = EntryStatus::Unsent;
                    }
                    break;
                } else {
                    self.window[i].status = EntryStatus::Unsent;
                }
            }
            i += 1;
        }
        self.slide()
    }

    /// Merges states whose futures coincide.
    ///
    /// Selective Repeat: a pending success that resolves no later than the
    /// head could reach it is as good as acked already.
    /// Go-Back-N: everything already sent behind a pending failure will be
    /// flushed, so only its acceptance flag still matters.
    fn canonicalize(&mut self, cfg: &ProtocolConfig) {
        if cfg.in_order_receiver() {
            let blocker = self.window.iter().position(|e| {
                matches!(
                    e.status,
                    EntryStatus::Awaiting {
                        outcome: Feedback::Failure,
                        ..
                    }
                )
            });
            let Some(blocker) = blocker else { return };
            for entry in &mut self.window[blocker + 1..] {
                if matches!(entry.status, EntryStatus::Awaiting { .. } | EntryStatus::Acked) {
                    entry.status = EntryStatus::Doomed;
                }
            }
            return;
        }
        // Slots from now (next slot = 1) before the head can pass an entry.
        let delta = cfg.delta;
        let instant = cfg.architecture == Architecture::Hybrid;
        let mut reach = 0u32;
        for entry in &mut self.window {
            let earliest = match entry.status {
                EntryStatus::Acked | EntryStatus::Doomed => 0,
                EntryStatus::Unsent if instant => 1,
                EntryStatus::Unsent => 1 + delta,
                EntryStatus::Awaiting { age, outcome } => {
                    let resolve = delta - age as u32;
                    match outcome {
                        Feedback::Success if resolve <= reach => {
                            entry.status = EntryStatus::Acked;
                            0
                        }
                        Feedback::Success => resolve,
                        Feedback::Failure if instant => resolve,
                        Feedback::Failure => resolve + delta,
                    }
                }
            };
            reach = reach.max(earliest);
        }
    }

    fn slide(&mut self) -> usize {
        let departed = self
            .window
            .iter()
            .take_while(|e| e.status == EntryStatus::Acked)
            .count();
        self.window.drain(..departed);
        departed
    }

    /// Position of the entry sent in this slot, admitting a buffered packet
    /// if needed. Assumes the feedback phase already ran.
    fn next_transmission(&self, cfg: &ProtocolConfig) -> Option<Slot> {
        if let Some(pos) = self
            .window
            .iter()
            .position(|e| e.status == EntryStatus::Unsent)
        {
            return Some(Slot::Retransmit(pos));
        }
        if self.window.len() < cfg.window as usize && self.buffer > 0 {
            return Some(Slot::Admit);
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Retransmit(usize),
    Admit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RewardIncrement {
    pub delivered: u8,
    pub transmitted: u8,
}

/// Bookkeeping of one slot, enough to follow individual packets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SlotTrace {
    pub reward: RewardIncrement,
    /// Head entries that departed after the feedback phase.
    pub departed_on_feedback: usize,
    /// A buffered packet entered the window at its tail.
    pub admitted: bool,
    /// Window position (after the feedback slide) of the transmitted entry.
    pub sent: Option<usize>,
    /// Head entries that departed at the end of the slot.
    pub departed_at_end: usize,
}

pub fn initial_state(_cfg: &ProtocolConfig) -> ProtocolState {
    ProtocolState::default()
}

/// Whether the slot starting in `phi` carries a transmission.
pub fn transmits(phi: &ProtocolState, cfg: &ProtocolConfig) -> bool {
    let mut after = phi.clone();
    after.resolve_feedback(cfg);
    after.next_transmission(cfg).is_some()
}

/// Advances one slot. `outcome` only matters when the slot transmits.
pub fn step(
    phi: &ProtocolState,
    cfg: &ProtocolConfig,
    outcome: DecodeOutcome,
    arrival: bool,
) -> Result<(ProtocolState, RewardIncrement)> {
    let mut next = phi.clone();
    let trace = step_in_place(&mut next, cfg, outcome, arrival)?;
    Ok((next, trace.reward))
}

/// [`step`] without cloning, also reporting per-packet bookkeeping.
pub fn step_in_place(
    state: &mut ProtocolState,
    cfg: &ProtocolConfig,
    outcome: DecodeOutcome,
    arrival: bool,
) -> Result<SlotTrace> {
    let trace = advance(state, cfg, outcome, arrival)?;
    state.canonicalize(cfg);
    Ok(trace)
}

fn advance(
    state: &mut ProtocolState,
    cfg: &ProtocolConfig,
    outcome: DecodeOutcome,
    arrival: bool,
) -> Result<SlotTrace> {
    state.check(cfg)?;
    let mut trace = SlotTrace {
        departed_on_feedback: state.resolve_feedback(cfg),
        ..SlotTrace::default()
    };

    if let Some(slot) = state.next_transmission(cfg) {
        let pos = match slot {
            Slot::Retransmit(pos) => pos,
            Slot::Admit => {
                state.buffer -= 1;
                state.window.push(WindowEntry::fresh());
                trace.admitted = true;
                state.window.len() - 1
            }
        };
        trace.sent = Some(pos);
        trace.reward.transmitted = 1;

        let decoded = cfg.architecture.decoded(outcome);
        let in_order = !cfg.in_order_receiver() || state.window[..pos].iter().all(|e| e.accepted);
        let entry = &mut state.window[pos];
        if decoded && !entry.accepted && in_order {
            entry.accepted = true;
            trace.reward.delivered = 1;
        }
        entry.status = match cfg.architecture {
            Architecture::Conventional if decoded => EntryStatus::Acked,
            Architecture::Conventional => EntryStatus::Unsent,
            Architecture::Hybrid if outcome.bs_ok && entry.accepted => EntryStatus::Acked,
            // deferred: CU feedback (or a discarded out-of-order BS decode)
            _ => EntryStatus::Awaiting {
                age: 0,
                outcome: if decoded { Feedback::Success } else { Feedback::Failure },
            },
        };
    }

    trace.departed_at_end = state.slide();
    if arrival && state.buffer < cfg.b_max {
        state.buffer += 1;
    }
    Ok(trace)
}
