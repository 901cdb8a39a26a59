//! C ABI over `bridge_alloc`.
//!
//! Scenarios and batches live behind opaque handles created and freed by this
//! library. Every fallible call returns a [`BaStatus`]; the text of the most
//! recent error on the calling thread is available from
//! [`ba_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bridge_alloc::allocator::TrimConfig;
use bridge_alloc::pipeline::{pipeline, AssetListing, PipelineConfig, PipelineOutcome};
use bridge_alloc::sim::{run_batch, Batch, Provenance, SimulationParams};
use bridge_alloc::transfer::{decide, positivity_indicator};
use bridge_alloc::types::{BandAssessment, BridgeLink, NetworkState};
use bridge_alloc::AllocError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaStatus {
    #[default]
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    WithdrawalExceedsInvestment = 3,
    NegativeAmount = 4,
    UndefinedRatio = 5,
    DegenerateDenominator = 6,
    UndefinedShare = 7,
    IndexOutOfBounds = 8,
    Panic = 9,
}

impl From<&AllocError> for BaStatus {
    fn from(e: &AllocError) -> Self {
        match e {
            AllocError::WithdrawalExceedsInvestment { .. } => BaStatus::WithdrawalExceedsInvestment,
            AllocError::NegativeAmount { .. } => BaStatus::NegativeAmount,
            AllocError::UndefinedRatio { .. } => BaStatus::UndefinedRatio,
            AllocError::DegenerateDenominator { .. } => BaStatus::DegenerateDenominator,
            AllocError::UndefinedShare => BaStatus::UndefinedShare,
            _ => BaStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(e: &AllocError) -> BaStatus {
    set_error(e.to_string());
    BaStatus::from(e)
}

fn guard(f: impl FnOnce() -> BaStatus) -> BaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            BaStatus::Panic
        }
    }
}

fn null(what: &str) -> BaStatus {
    set_error(format!("{what} is null"));
    BaStatus::NullPointer
}

/// Static description of a status code. Never null, never freed.
#[no_mangle]
pub extern "C" fn ba_status_message(status: BaStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BaStatus::Ok => c"ok",
        BaStatus::NullPointer => c"null pointer argument",
        BaStatus::InvalidArgument => c"invalid argument",
        BaStatus::WithdrawalExceedsInvestment => c"net withdrawal exceeds invested total",
        BaStatus::NegativeAmount => c"negative amount",
        BaStatus::UndefinedRatio => c"flow ratio undefined on a network without capital",
        BaStatus::DegenerateDenominator => c"stretch denominator is zero",
        BaStatus::UndefinedShare => c"network share undefined",
        BaStatus::IndexOutOfBounds => c"index out of bounds",
        BaStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ba_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `max(x + delta, 0) / (|x| + delta)`.
#[no_mangle]
pub extern "C" fn ba_positivity_indicator(x: f64, delta: f64) -> f64 {
    positivity_indicator(x, delta)
}

/// A network's position against its capacity band.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BaAssessment {
    pub total_with_tbd: f64,
    pub min_capacity: f64,
    pub max_capacity: f64,
    pub outside_band: f64,
    pub max_send: f64,
    pub max_receive: f64,
}

impl From<BandAssessment> for BaAssessment {
    fn from(a: BandAssessment) -> Self {
        BaAssessment {
            total_with_tbd: a.total_with_tbd,
            min_capacity: a.min_capacity,
            max_capacity: a.max_capacity,
            outside_band: a.outside_band,
            max_send: a.max_send,
            max_receive: a.max_receive,
        }
    }
}

impl From<BaAssessment> for BandAssessment {
    fn from(a: BaAssessment) -> Self {
        BandAssessment {
            total_with_tbd: a.total_with_tbd,
            min_capacity: a.min_capacity,
            max_capacity: a.max_capacity,
            outside_band: a.outside_band,
            max_send: a.max_send,
            max_receive: a.max_receive,
        }
    }
}

/// Signed transfers; positive `*_pq` moves money from P to Q.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BaDecision {
    pub simple_pq: f64,
    pub simple_qp: f64,
    pub delta_pq: f64,
    pub delta_qp: f64,
}

/// Components of one directed transfer expression.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BaTerms {
    pub comparison: f64,
    pub indicator: f64,
    pub first_simple: f64,
    pub first_delta: f64,
    pub second: f64,
}

/// Everything one two-network evaluation produces.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BaOutcome {
    pub collect_deploy_diff: f64,
    pub raw_stretch: f64,
    pub capped_stretch: f64,
    pub total_pq_with_tbd: f64,
    pub p: BaAssessment,
    pub q: BaAssessment,
    pub decision: BaDecision,
    pub terms_pq: BaTerms,
    pub terms_qp: BaTerms,
    pub net_pq: f64,
    pub multi_round: bool,
    pub min_above_other_max: bool,
    pub band_range_too_narrow: bool,
}

impl From<&PipelineOutcome> for BaOutcome {
    fn from(o: &PipelineOutcome) -> Self {
        let terms = |t: &bridge_alloc::transfer::DirectedTerms| BaTerms {
            comparison: t.comparison,
            indicator: t.indicator,
            first_simple: t.first_simple,
            first_delta: t.first_delta,
            second: t.second,
        };
        let d = o.decision;
        BaOutcome {
            collect_deploy_diff: o.stretch.collect_deploy_diff,
            raw_stretch: o.stretch.raw_stretch,
            capped_stretch: o.stretch.capped_stretch,
            total_pq_with_tbd: o.total_pq_with_tbd,
            p: o.assessment_p.into(),
            q: o.assessment_q.into(),
            decision: BaDecision {
                simple_pq: d.simple_pq,
                simple_qp: d.simple_qp,
                delta_pq: d.delta_pq,
                delta_qp: d.delta_qp,
            },
            terms_pq: terms(&o.terms_pq),
            terms_qp: terms(&o.terms_qp),
            net_pq: o.netting.net_pq,
            multi_round: o.netting.multi_round,
            min_above_other_max: o.diagnostics.min_above_other_max,
            band_range_too_narrow: o.diagnostics.band_range_too_narrow,
        }
    }
}

/// Both transfer formulations for two already assessed networks.
///
/// # Safety
/// `p`, `q` and `out` must be valid pointers or null.
#[no_mangle]
pub unsafe extern "C" fn ba_transfer(
    p: *const BaAssessment,
    q: *const BaAssessment,
    cap_pq: f64,
    cap_qp: f64,
    delta: f64,
    out: *mut BaDecision,
) -> BaStatus {
    guard(|| {
        if p.is_null() || q.is_null() || out.is_null() {
            return null("assessment or output");
        }
        let (p, q) = (BandAssessment::from(*p), BandAssessment::from(*q));
        let (d, _, _) = decide(&p, &q, &BridgeLink::new(cap_pq, cap_qp), delta);
        *out = BaDecision {
            simple_pq: d.simple_pq,
            simple_qp: d.simple_qp,
            delta_pq: d.delta_pq,
            delta_qp: d.delta_qp,
        };
        BaStatus::Ok
    })
}

/// A two-network rebalancing problem under construction.
pub struct BaScenario {
    p: NetworkState,
    q: NetworkState,
    bridge: BridgeLink,
    assets: Vec<AssetListing>,
    config: PipelineConfig,
}

/// Creates a scenario with default algorithm constants and no assets.
///
/// # Safety
/// `out` must be a valid pointer or null. On success `*out` owns a handle
/// that must be released with [`ba_scenario_free`].
#[no_mangle]
pub unsafe extern "C" fn ba_scenario_new(
    curr_p: f64,
    tbd_p: f64,
    curr_q: f64,
    tbd_q: f64,
    cap_pq: f64,
    cap_qp: f64,
    out: *mut *mut BaScenario,
) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        *out = ptr::null_mut();
        let p = NetworkState::new("P", curr_p, tbd_p);
        let q = NetworkState::new("Q", curr_q, tbd_q);
        let bridge = BridgeLink::new(cap_pq, cap_qp);
        if let Err(e) = bridge_alloc::types::validate_scenario(&p, &q, &bridge) {
            return fail(&e);
        }
        *out = Box::into_raw(Box::new(BaScenario {
            p,
            q,
            bridge,
            assets: Vec::new(),
            config: PipelineConfig::default(),
        }));
        BaStatus::Ok
    })
}

/// Lists a global asset with its raw band.
///
/// # Safety
/// `scenario` must come from [`ba_scenario_new`]; `asset_id` must be a
/// NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn ba_scenario_add_asset(
    scenario: *mut BaScenario,
    asset_id: *const c_char,
    min: f64,
    ideal: f64,
    max: f64,
    on_p: bool,
    on_q: bool,
) -> BaStatus {
    guard(|| {
        if scenario.is_null() || asset_id.is_null() {
            return null("scenario or asset_id");
        }
        let Ok(id) = CStr::from_ptr(asset_id).to_str() else {
            set_error("asset_id is not valid UTF-8");
            return BaStatus::InvalidArgument;
        };
        match AssetListing::new(id, min, ideal, max, on_p, on_q) {
            Ok(a) => {
                (&mut *scenario).assets.push(a);
                BaStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Replaces the stretch cap, indicator width and trim bounds.
///
/// # Safety
/// `scenario` must come from [`ba_scenario_new`].
#[no_mangle]
pub unsafe extern "C" fn ba_scenario_set_config(
    scenario: *mut BaScenario,
    max_stretch: f64,
    delta: f64,
    min_trim: f64,
    max_trim: f64,
) -> BaStatus {
    guard(|| {
        if scenario.is_null() {
            return null("scenario");
        }
        let trim = match TrimConfig::new(min_trim, max_trim) {
            Ok(t) => t,
            Err(e) => return fail(&e),
        };
        let config = PipelineConfig {
            trim,
            max_stretch,
            delta,
        };
        if let Err(e) = config.validate() {
            return fail(&e);
        }
        (*scenario).config = config;
        BaStatus::Ok
    })
}

/// Runs the full two-network calculation.
///
/// # Safety
/// `scenario` must come from [`ba_scenario_new`]; `out` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ba_scenario_evaluate(scenario: *const BaScenario, out: *mut BaOutcome) -> BaStatus {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            return null("scenario or out");
        }
        let s = &*scenario;
        match pipeline(&s.p, &s.q, &s.bridge, &s.assets, &s.config) {
            Ok(o) => {
                *out = BaOutcome::from(&o);
                BaStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `scenario` must come from [`ba_scenario_new`] and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ba_scenario_free(scenario: *mut BaScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Simulation settings; see [`ba_sim_params_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaSimParams {
    pub min_weight_seed: f64,
    pub max_weight_seed: f64,
    pub delta: f64,
    pub max_bridge_stretch: f64,
    pub min_network_weight_trim: f64,
    pub max_network_weight_trim: f64,
    pub min_bridge_capacity: f64,
    pub max_bridge_capacity: f64,
    pub min_current_amount: f64,
    pub max_current_amount: f64,
    pub n_assets_p: usize,
    pub n_assets_q: usize,
    pub asset_availability: f64,
    pub n_scenarios: usize,
    pub rng_seed: u64,
}

impl From<&SimulationParams> for BaSimParams {
    fn from(p: &SimulationParams) -> Self {
        BaSimParams {
            min_weight_seed: p.min_weight_seed,
            max_weight_seed: p.max_weight_seed,
            delta: p.delta,
            max_bridge_stretch: p.max_bridge_stretch,
            min_network_weight_trim: p.min_network_weight_trim,
            max_network_weight_trim: p.max_network_weight_trim,
            min_bridge_capacity: p.min_bridge_capacity,
            max_bridge_capacity: p.max_bridge_capacity,
            min_current_amount: p.min_current_amount,
            max_current_amount: p.max_current_amount,
            n_assets_p: p.n_assets_p,
            n_assets_q: p.n_assets_q,
            asset_availability: p.asset_availability,
            n_scenarios: p.n_scenarios,
            rng_seed: p.rng_seed,
        }
    }
}

impl From<&BaSimParams> for SimulationParams {
    fn from(p: &BaSimParams) -> Self {
        SimulationParams {
            min_weight_seed: p.min_weight_seed,
            max_weight_seed: p.max_weight_seed,
            delta: p.delta,
            max_bridge_stretch: p.max_bridge_stretch,
            min_network_weight_trim: p.min_network_weight_trim,
            max_network_weight_trim: p.max_network_weight_trim,
            min_bridge_capacity: p.min_bridge_capacity,
            max_bridge_capacity: p.max_bridge_capacity,
            min_current_amount: p.min_current_amount,
            max_current_amount: p.max_current_amount,
            n_assets_p: p.n_assets_p,
            n_assets_q: p.n_assets_q,
            asset_availability: p.asset_availability,
            n_scenarios: p.n_scenarios,
            rng_seed: p.rng_seed,
        }
    }
}

/// # Safety
/// `out` must be a valid pointer or null.
#[no_mangle]
pub unsafe extern "C" fn ba_sim_params_default(out: *mut BaSimParams) -> BaStatus {
    if out.is_null() {
        return null("out");
    }
    *out = BaSimParams::from(&SimulationParams::default());
    BaStatus::Ok
}

/// Evaluated manual and random scenarios.
pub struct BaBatch {
    inner: Batch,
}

/// One batch row. `status` is the row's own outcome; `outcome` is zeroed
/// when it is not `Ok`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BaBatchRow {
    pub row: usize,
    pub is_manual: bool,
    pub random_index: u64,
    pub min_global_weight: f64,
    pub max_global_weight: f64,
    pub cap_pq: f64,
    pub cap_qp: f64,
    pub tbd_p: f64,
    pub curr_p: f64,
    pub tbd_q: f64,
    pub curr_q: f64,
    pub status: BaStatus,
    pub outcome: BaOutcome,
}

/// Runs the manual rows and `params->n_scenarios` random rows.
///
/// # Safety
/// `params` and `out` must be valid pointers or null. On success `*out` owns a
/// handle that must be released with [`ba_batch_free`].
#[no_mangle]
pub unsafe extern "C" fn ba_batch_run(params: *const BaSimParams, out: *mut *mut BaBatch) -> BaStatus {
    guard(|| {
        if params.is_null() || out.is_null() {
            return null("params or out");
        }
        *out = ptr::null_mut();
        match run_batch(&SimulationParams::from(&*params)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(BaBatch { inner }));
                BaStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of rows; 0 for a null handle.
///
/// # Safety
/// `batch` must come from [`ba_batch_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ba_batch_len(batch: *const BaBatch) -> usize {
    if batch.is_null() {
        0
    } else {
        (&*batch).inner.rows.len()
    }
}

/// Copies row `index` (0-based) into `out`.
///
/// # Safety
/// `batch` must come from [`ba_batch_run`]; `out` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ba_batch_get(batch: *const BaBatch, index: usize, out: *mut BaBatchRow) -> BaStatus {
    guard(|| {
        if batch.is_null() || out.is_null() {
            return null("batch or out");
        }
        let rows = &(&*batch).inner.rows;
        let Some(row) = rows.get(index) else {
            set_error(format!("row {index} of {}", rows.len()));
            return BaStatus::IndexOutOfBounds;
        };
        let [min_w, max_w, cap_pq, cap_qp, tbd_p, curr_p, tbd_q, curr_q] = row.input_values();
        let (is_manual, random_index) = match row.scenario.provenance {
            Provenance::Manual(_) => (true, 0),
            Provenance::Random { index, .. } => (false, index),
        };
        let (status, outcome) = match &row.outcome {
            Ok(o) => (BaStatus::Ok, BaOutcome::from(o)),
            Err(e) => (BaStatus::from(e), BaOutcome::default()),
        };
        *out = BaBatchRow {
            row: row.row,
            is_manual,
            random_index,
            min_global_weight: min_w,
            max_global_weight: max_w,
            cap_pq,
            cap_qp,
            tbd_p,
            curr_p,
            tbd_q,
            curr_q,
            status,
            outcome,
        };
        BaStatus::Ok
    })
}

/// # Safety
/// `batch` must come from [`ba_batch_run`] and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ba_batch_free(batch: *mut BaBatch) {
    if !batch.is_null() {
        drop(Box::from_raw(batch));
    }
}
