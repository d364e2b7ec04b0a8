use std::ffi::{CStr, CString};
use std::ptr;

use cran_arq_ffi::*;

fn last_error() -> String {
    let p = cran_arq_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn config(json: &str) -> *mut CranArqConfig {
    let text = CString::new(json).unwrap();
    let mut cfg = ptr::null_mut();
    let status = unsafe { cran_arq_config_from_json(text.as_ptr(), &mut cfg) };
    assert_eq!(status, CranArqStatus::Ok, "{}", last_error());
    cfg
}

#[test]
fn solve_matches_the_library() {
    let cfg = config(r#"{"protocol": "gbn", "architecture": "cran", "delta": 3, "q": 4}"#);
    let mut m = CranArqMetrics::default();
    assert_eq!(unsafe { cran_arq_solve(cfg, &mut m) }, CranArqStatus::Ok);

    let exp = cran_arq::config::parse_config(r#"{"protocol": "gbn", "architecture": "cran", "delta": 3, "q": 4}"#).unwrap();
    let row = cran_arq::report::run_point(&exp, &Default::default()).unwrap();
    assert_eq!(m.throughput, row.throughput);
    assert_eq!(Some(m.efficiency), row.efficiency);
    assert!(m.efficiency_defined);
    assert_eq!(m.states, row.states.unwrap() as u64);

    let mut chain = ptr::null_mut();
    assert_eq!(unsafe { cran_arq_chain_build(cfg, &mut chain) }, CranArqStatus::Ok);
    assert_eq!(unsafe { cran_arq_chain_state_count(chain) }, m.states);
    let mut again = CranArqMetrics::default();
    assert_eq!(unsafe { cran_arq_chain_solve(chain, &mut again) }, CranArqStatus::Ok);
    assert_eq!(again, m);
    unsafe {
        cran_arq_chain_free(chain);
        cran_arq_config_free(cfg);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let bad = CString::new(r#"{"protocol": "sr", "architecture": "cran", "bogus": 1}"#).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { cran_arq_config_from_json(bad.as_ptr(), &mut cfg) }, CranArqStatus::Config);
    assert!(cfg.is_null());
    assert!(last_error().contains("bogus"));

    assert_eq!(
        unsafe { cran_arq_config_from_json(ptr::null(), &mut cfg) },
        CranArqStatus::InvalidArgument
    );
    assert_eq!(unsafe { cran_arq_config_new(7, 0, &mut cfg) }, CranArqStatus::InvalidArgument);
    assert_eq!(unsafe { cran_arq_solve(ptr::null(), ptr::null_mut()) }, CranArqStatus::InvalidArgument);

    let cfg = config(r#"{"protocol": "sr", "architecture": "cran", "delta": 8}"#);
    let mut m = CranArqMetrics::default();
    assert_eq!(unsafe { cran_arq_solve(cfg, &mut m) }, CranArqStatus::Capacity);
    assert!(last_error().contains("state cap"));

    // a rejected update leaves the handle as it was
    assert_eq!(unsafe { cran_arq_config_set_delta(cfg, 0) }, CranArqStatus::Config);
    assert_eq!(unsafe { cran_arq_config_set_delta(cfg, 2) }, CranArqStatus::Ok);
    assert_eq!(unsafe { cran_arq_solve(cfg, &mut m) }, CranArqStatus::Ok);
    unsafe { cran_arq_config_free(cfg) };
    unsafe { cran_arq_chain_free(ptr::null_mut()) };
    assert_eq!(unsafe { cran_arq_chain_state_count(ptr::null()) }, 0);
}

#[test]
fn simulate_is_reproducible() {
    let mut cfg = ptr::null_mut();
    let status = unsafe {
        cran_arq_config_new(
            CranArqProtocol::SelectiveRepeat as u32,
            CranArqArchitecture::Hybrid as u32,
            &mut cfg,
        )
    };
    assert_eq!(status, CranArqStatus::Ok);
    assert_eq!(unsafe { cran_arq_config_set_delta(cfg, 2) }, CranArqStatus::Ok);
    assert_eq!(unsafe { cran_arq_config_set_sir_db(cfg, 0.0) }, CranArqStatus::Ok);
    let run = |continuous| {
        let mut r = CranArqSimResult::default();
        assert_eq!(
            unsafe { cran_arq_simulate(cfg, 42, 20_000, 1_000, continuous, &mut r) },
            CranArqStatus::Ok
        );
        r
    };
    let a = run(false);
    assert_eq!(a, run(false));
    assert_eq!((a.slots, a.warmup, a.seed), (20_000, 1_000, 42));
    assert!(a.efficiency_defined && a.throughput_mean > 0.0);
    assert_ne!(a.throughput_mean, run(true).throughput_mean);
    unsafe { cran_arq_config_free(cfg) };
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(cran_arq_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
