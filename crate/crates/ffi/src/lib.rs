//! C ABI over `cran-arq`.
//!
//! Configurations and chains are opaque heap handles created by the
//! library and released with the matching `_free` function. Every fallible
//! call returns a [`CranArqStatus`]; on failure the message is available
//! from [`cran_arq_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cran_arq::chain::{build_chain_with, metrics, stationary_distribution_with, BuildOptions, SolverOptions};
use cran_arq::config::{parse_config, ExperimentConfig};
use cran_arq::report::{run_simulate, Channel};
use cran_arq::{Architecture, Chain, Error, Protocol};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CranArqStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8 or an out-of-range enum value.
    InvalidArgument = 1,
    /// Invalid or infeasible configuration.
    Config = 2,
    /// Quadrature, solver convergence or a non-ergodic chain.
    Numeric = 3,
    /// The chain exceeded the state cap.
    Capacity = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CranArqProtocol {
    StopAndWait = 0,
    GoBackN = 1,
    SelectiveRepeat = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CranArqArchitecture {
    Conventional = 0,
    Cran = 1,
    Hybrid = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CranArqMetrics {
    pub throughput: f64,
    /// Meaningful only when `efficiency_defined` is nonzero.
    pub efficiency: f64,
    pub efficiency_defined: bool,
    pub tx_fraction: f64,
    pub states: u64,
    pub residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CranArqSimResult {
    pub throughput_mean: f64,
    pub throughput_stderr: f64,
    pub efficiency_mean: f64,
    pub efficiency_stderr: f64,
    pub efficiency_defined: bool,
    pub tx_fraction: f64,
    pub slots: u64,
    pub warmup: u64,
    pub seed: u64,
}

/// Opaque experiment configuration.
pub struct CranArqConfig(ExperimentConfig);

/// Opaque built chain.
pub struct CranArqChain(Chain);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> CranArqStatus {
    match err.exit_code() {
        2 => CranArqStatus::Config,
        4 => CranArqStatus::Capacity,
        _ => CranArqStatus::Numeric,
    }
}

enum Failure {
    Arg(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CranArqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CranArqStatus::Ok,
        Ok(Err(Failure::Arg(msg))) => {
            set_error(msg);
            CranArqStatus::InvalidArgument
        }
        Ok(Err(Failure::Lib(err))) => {
            set_error(err.to_string());
            status_of(&err)
        }
        Err(_) => {
            set_error("internal panic".into());
            CranArqStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller passes either null or a pointer obtained from this library.
    unsafe { p.as_ref() }.ok_or_else(|| Failure::Arg(format!("{what} is null")))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: caller passes either null or a valid writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| Failure::Arg(format!("{what} is null")))
}

fn metrics_of(chain: &Chain) -> Result<CranArqMetrics, Failure> {
    let st = stationary_distribution_with(chain, &SolverOptions::default())?;
    let m = metrics(chain, &st);
    Ok(CranArqMetrics {
        throughput: m.throughput,
        efficiency: m.efficiency.unwrap_or(f64::NAN),
        efficiency_defined: m.efficiency.is_some(),
        tx_fraction: m.tx_fraction,
        states: chain.len() as u64,
        residual: st.residual,
    })
}

fn build(cfg: &ExperimentConfig) -> Result<Chain, Failure> {
    let opts = BuildOptions {
        edge_policy: cfg.threshold_edge_policy,
        ..BuildOptions::default()
    };
    Ok(build_chain_with(
        &cfg.channel()?,
        &cfg.interference()?,
        &cfg.link_budget()?,
        &cfg.protocol_config()?,
        &opts,
    )?)
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cran_arq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cran_arq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a JSON configuration. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_config_from_json(json: *const c_char, out: *mut *mut CranArqConfig) -> CranArqStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        *out = ptr::null_mut();
        if json.is_null() {
            return Err(Failure::Arg("json is null".into()));
        }
        // SAFETY: checked non-null; caller guarantees termination.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|_| Failure::Arg("json is not valid UTF-8".into()))?;
        let cfg = parse_config(text)?;
        *out = Box::into_raw(Box::new(CranArqConfig(cfg)));
        Ok(())
    })
}

/// Configuration with default parameters. `protocol` and `architecture`
/// take `CranArqProtocol` and `CranArqArchitecture` values.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_config_new(
    protocol: u32,
    architecture: u32,
    out: *mut *mut CranArqConfig,
) -> CranArqStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        *out = ptr::null_mut();
        let protocol = match protocol {
            p if p == CranArqProtocol::StopAndWait as u32 => Protocol::StopAndWait,
            p if p == CranArqProtocol::GoBackN as u32 => Protocol::GoBackN,
            p if p == CranArqProtocol::SelectiveRepeat as u32 => Protocol::SelectiveRepeat,
            other => return Err(Failure::Arg(format!("unknown protocol {other}"))),
        };
        let architecture = match architecture {
            a if a == CranArqArchitecture::Conventional as u32 => Architecture::Conventional,
            a if a == CranArqArchitecture::Cran as u32 => Architecture::Cran,
            a if a == CranArqArchitecture::Hybrid as u32 => Architecture::Hybrid,
            other => return Err(Failure::Arg(format!("unknown architecture {other}"))),
        };
        let cfg = ExperimentConfig::new(protocol, architecture);
        cfg.validate()?;
        *out = Box::into_raw(Box::new(CranArqConfig(cfg)));
        Ok(())
    })
}

/// Sets the average SIR in dB. The handle is unchanged on failure.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_config_set_sir_db(cfg: *mut CranArqConfig, sir_db: f64) -> CranArqStatus {
    guard(|| {
        let cfg = unsafe { out_ref(cfg, "cfg") }?;
        let mut next = cfg.0.clone();
        next.sir_db = sir_db;
        next.validate()?;
        cfg.0 = next;
        Ok(())
    })
}

/// Sets the fronthaul delay; a window left at its default follows it.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_config_set_delta(cfg: *mut CranArqConfig, delta: u32) -> CranArqStatus {
    guard(|| {
        let cfg = unsafe { out_ref(cfg, "cfg") }?;
        let mut next = cfg.0.clone();
        next.delta = delta;
        next.validate()?;
        cfg.0 = next;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_config_free(cfg: *mut CranArqConfig) {
    if !cfg.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// Builds and solves the chain in one call.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_solve(cfg: *const CranArqConfig, out: *mut CranArqMetrics) -> CranArqStatus {
    guard(|| {
        let cfg = unsafe { deref(cfg, "cfg") }?;
        let out = unsafe { out_ref(out, "out") }?;
        let chain = build(&cfg.0)?;
        *out = metrics_of(&chain)?;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_chain_build(cfg: *const CranArqConfig, out: *mut *mut CranArqChain) -> CranArqStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        *out = ptr::null_mut();
        let cfg = unsafe { deref(cfg, "cfg") }?;
        let chain = build(&cfg.0)?;
        *out = Box::into_raw(Box::new(CranArqChain(chain)));
        Ok(())
    })
}

/// Number of reachable states, or 0 for a null handle.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_chain_state_count(chain: *const CranArqChain) -> u64 {
    // SAFETY: null or a live handle per the contract.
    unsafe { chain.as_ref() }.map_or(0, |c| c.0.len() as u64)
}

/// # Safety
/// `chain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_chain_solve(chain: *const CranArqChain, out: *mut CranArqMetrics) -> CranArqStatus {
    guard(|| {
        let chain = unsafe { deref(chain, "chain") }?;
        let out = unsafe { out_ref(out, "out") }?;
        *out = metrics_of(&chain.0)?;
        Ok(())
    })
}

/// # Safety
/// `chain` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_chain_free(chain: *mut CranArqChain) {
    if !chain.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(chain) });
    }
}

/// Monte Carlo estimate. `slots` and `warmup` of 0 select the defaults;
/// `continuous` selects the unquantized gain.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cran_arq_simulate(
    cfg: *const CranArqConfig,
    seed: u64,
    slots: u64,
    warmup: u64,
    continuous: bool,
    out: *mut CranArqSimResult,
) -> CranArqStatus {
    guard(|| {
        let cfg = unsafe { deref(cfg, "cfg") }?;
        let out = unsafe { out_ref(out, "out") }?;
        let mut exp = cfg.0.clone();
        if slots != 0 {
            exp.mc_slots = Some(slots);
        }
        if warmup != 0 {
            exp.mc_warmup = Some(warmup);
        }
        let channel = if continuous { Channel::Continuous } else { Channel::Sampled };
        let row = run_simulate(&exp, Some(seed), channel, false)?;
        let est = row.sim.expect("simulated rows carry an estimate");
        *out = CranArqSimResult {
            throughput_mean: est.throughput_mean,
            throughput_stderr: est.throughput_stderr,
            efficiency_mean: est.efficiency_mean.unwrap_or(f64::NAN),
            efficiency_stderr: est.efficiency_stderr.unwrap_or(f64::NAN),
            efficiency_defined: est.efficiency_mean.is_some(),
            tx_fraction: est.tx_fraction,
            slots: est.slots,
            warmup: est.warmup,
            seed: est.seed,
        };
        Ok(())
    })
}
