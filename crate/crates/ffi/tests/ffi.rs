use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use bridge_alloc_ffi::*;

fn text(p: *const std::os::raw::c_char) -> String {
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn example() -> *mut BaScenario {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ba_scenario_new(600.0, 0.0, 400.0, 0.0, 130.0, 130.0, &mut s), BaStatus::Ok);
        let a = CString::new("A").unwrap();
        let b = CString::new("B").unwrap();
        assert_eq!(ba_scenario_add_asset(s, a.as_ptr(), 0.45, 0.5, 0.55, true, false), BaStatus::Ok);
        assert_eq!(ba_scenario_add_asset(s, b.as_ptr(), 0.52, 0.56, 0.60, false, true), BaStatus::Ok);
    }
    s
}

#[test]
fn scenario_round_trip() {
    let s = example();
    let mut out = BaOutcome::default();
    unsafe {
        assert_eq!(ba_scenario_evaluate(s, &mut out), BaStatus::Ok);
        ba_scenario_free(s);
    }
    assert_eq!(out.decision.delta_pq, 120.0);
    assert_eq!(out.decision.delta_qp, -120.0);
    assert_eq!(out.decision.simple_pq, 50.0);
    assert_eq!(out.q.max_receive, 200.0);
    assert_eq!(out.net_pq, 120.0);
}

#[test]
fn transfer_matches_scenario_decision() {
    let s = example();
    let mut out = BaOutcome::default();
    let mut d = BaDecision::default();
    unsafe {
        assert_eq!(ba_scenario_evaluate(s, &mut out), BaStatus::Ok);
        ba_scenario_free(s);
        assert_eq!(ba_transfer(&out.p, &out.q, 130.0, 130.0, 0.0001, &mut d), BaStatus::Ok);
    }
    assert_eq!(d, out.decision);
}

#[test]
fn config_is_applied() {
    let s = example();
    let mut out = BaOutcome::default();
    unsafe {
        assert_eq!(ba_scenario_set_config(s, 0.0, 0.001, 0.01, 0.99), BaStatus::Ok);
        assert_eq!(ba_scenario_evaluate(s, &mut out), BaStatus::Ok);
        assert_eq!(ba_scenario_set_config(s, 0.2, 0.001, 0.9, 0.1), BaStatus::InvalidArgument);
        ba_scenario_free(s);
    }
    assert_eq!(out.capped_stretch, 0.0);
}

#[test]
fn error_codes() {
    let mut s = ptr::null_mut();
    unsafe {
        let st = ba_scenario_new(100.0, -600.0, 400.0, 0.0, 10.0, 10.0, &mut s);
        assert_eq!(st, BaStatus::WithdrawalExceedsInvestment);
        assert!(s.is_null());
        assert!(!text(ba_last_error_message()).is_empty());

        assert_eq!(ba_scenario_new(1.0, 0.0, 1.0, 0.0, 1.0, 1.0, ptr::null_mut()), BaStatus::NullPointer);
        assert_eq!(ba_scenario_evaluate(ptr::null(), &mut BaOutcome::default()), BaStatus::NullPointer);
        assert_eq!(ba_transfer(ptr::null(), ptr::null(), 1.0, 1.0, 0.001, ptr::null_mut()), BaStatus::NullPointer);
        ba_scenario_free(ptr::null_mut());
        ba_batch_free(ptr::null_mut());
        assert_eq!(ba_batch_len(ptr::null()), 0);

        let s = example();
        let bad = CString::new("C").unwrap();
        assert_eq!(ba_scenario_add_asset(s, bad.as_ptr(), 0.6, 0.5, 0.4, true, true), BaStatus::InvalidArgument);
        ba_scenario_free(s);
    }
    assert_eq!(text(ba_status_message(BaStatus::Ok)), "ok");
    assert_ne!(text(ba_status_message(BaStatus::Panic)), "ok");
}

#[test]
fn batch_handle() {
    let mut params = std::mem::MaybeUninit::<BaSimParams>::uninit();
    let mut batch = ptr::null_mut();
    unsafe {
        assert_eq!(ba_sim_params_default(params.as_mut_ptr()), BaStatus::Ok);
        let params = params.assume_init();
        assert_eq!(ba_batch_run(&params, &mut batch), BaStatus::Ok);
        let n = ba_batch_len(batch);
        assert_eq!(n, 35);
        let mut row = BaBatchRow::default();
        assert_eq!(ba_batch_get(batch, 0, &mut row), BaStatus::Ok);
        assert!(row.is_manual);
        assert_eq!(ba_batch_get(batch, n - 1, &mut row), BaStatus::Ok);
        assert!(!row.is_manual);
        assert_eq!(row.row, n);
        assert_eq!(ba_batch_get(batch, n, &mut row), BaStatus::IndexOutOfBounds);
        ba_batch_free(batch);
    }
}

#[test]
fn indicator_edges() {
    assert_eq!(ba_positivity_indicator(1.0, 0.001), 1.0);
    assert_eq!(ba_positivity_indicator(-1.0, 0.001), 0.0);
    assert_eq!(ba_positivity_indicator(0.0, 0.001), 1.0);
    assert!((ba_positivity_indicator(-0.0005, 0.001) - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn header_lists_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bridge_alloc.h")).unwrap();
    for sym in [
        "BRIDGE_ALLOC_H",
        "BA_STATUS_OK",
        "BA_STATUS_WITHDRAWAL_EXCEEDS_INVESTMENT",
        "typedef struct BaScenario BaScenario",
        "typedef struct BaBatch BaBatch",
        "ba_scenario_new",
        "ba_scenario_evaluate",
        "ba_batch_get",
        "ba_transfer",
        "ba_last_error_message",
    ] {
        assert!(h.contains(sym), "header lacks {sym}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libbridge_alloc_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "120.000000 -120.000000");
    assert_eq!(lines[1], "35");
    assert!(lines[2].contains("withdrawal"));
}
