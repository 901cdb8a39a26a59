//! Outside-band amounts and the two bridge transfer formulations.
//!
//! Every expression here is a direct nested min/max evaluation. Positive
//! `*_pq` values are flows from P to Q; a negative `*_pq` means P has to
//! receive from Q.

use crate::allocator::CapacityBand;
use crate::types::{BandAssessment, BridgeLink, TransferDecision};

/// Compares a network's post-flow total with its capacity band.
pub fn assess_band(total_with_tbd: f64, band: CapacityBand) -> BandAssessment {
    let below = total_with_tbd - band.min_capacity;
    let above = total_with_tbd - band.max_capacity;
    BandAssessment {
        total_with_tbd,
        min_capacity: band.min_capacity,
        max_capacity: band.max_capacity,
        outside_band: unsigned_zero(below.min(0.0) + above.max(0.0)),
        max_send: below.max(0.0),
        max_receive: (band.max_capacity - total_with_tbd).max(0.0),
    }
}

/// `max(x + delta, 0) / (|x| + delta)`: 1 for `x >= 0`, 0 for `x <= -delta`.
///
/// Values strictly between `-delta` and 0 give a fraction; callers keep
/// amounts out of that gap.
pub fn positivity_indicator(x: f64, delta: f64) -> f64 {
    (x + delta).max(0.0) / (x.abs() + delta)
}

/// Components of one directed transfer expression (sender first, receiver second).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DirectedTerms {
    /// `max(outside_sender, -outside_receiver)`.
    pub comparison: f64,
    /// Positivity indicator of the sender's outside-band amount.
    pub indicator: f64,
    /// First term of the simple formulation: excess pushed out.
    pub first_simple: f64,
    /// First term of the alternate formulation.
    pub first_delta: f64,
    /// Second term, shared by both formulations: shortfall pulled in.
    pub second: f64,
}

impl DirectedTerms {
    pub fn simple(&self) -> f64 {
        unsigned_zero(self.first_simple + self.second)
    }

    pub fn delta(&self) -> f64 {
        unsigned_zero(self.first_delta + self.second)
    }
}

/// Evaluates both formulations for flows from `sender` to `receiver`.
///
/// `cap_out` is the sender-to-receiver capacity, `cap_in` the reverse one.
pub fn directed_terms(
    sender: &BandAssessment,
    receiver: &BandAssessment,
    cap_out: f64,
    cap_in: f64,
    delta: f64,
) -> DirectedTerms {
    let out_s = sender.outside_band;
    let out_r = receiver.outside_band;

    let first_simple = out_s.min(receiver.max_receive).max(0.0).min(cap_out);
    let second = out_s.max(-receiver.max_send).min(0.0).max(-cap_in);

    let comparison = out_s.max(-out_r);
    let indicator = positivity_indicator(out_s, delta);
    let first_delta = (comparison * indicator)
        .min(receiver.max_receive)
        .min(sender.max_send)
        .max(0.0)
        .min(cap_out);

    DirectedTerms {
        comparison,
        indicator,
        first_simple: unsigned_zero(first_simple),
        first_delta: unsigned_zero(first_delta),
        second: unsigned_zero(second),
    }
}

/// Simple formulation: `(simple_pq, simple_qp)`.
pub fn transfer_simple(a_p: &BandAssessment, a_q: &BandAssessment, bridge: &BridgeLink) -> (f64, f64) {
    let pq = directed_terms(a_p, a_q, bridge.cap_pq, bridge.cap_qp, crate::DEFAULT_DELTA);
    let qp = directed_terms(a_q, a_p, bridge.cap_qp, bridge.cap_pq, crate::DEFAULT_DELTA);
    (pq.simple(), qp.simple())
}

/// Alternate formulation gated by the positivity indicator: `(delta_pq, delta_qp)`.
pub fn transfer_delta(
    a_p: &BandAssessment,
    a_q: &BandAssessment,
    bridge: &BridgeLink,
    delta: f64,
) -> (f64, f64) {
    let pq = directed_terms(a_p, a_q, bridge.cap_pq, bridge.cap_qp, delta);
    let qp = directed_terms(a_q, a_p, bridge.cap_qp, bridge.cap_pq, delta);
    (pq.delta(), qp.delta())
}

/// Both formulations in both directions.
pub fn decide(
    a_p: &BandAssessment,
    a_q: &BandAssessment,
    bridge: &BridgeLink,
    delta: f64,
) -> (TransferDecision, DirectedTerms, DirectedTerms) {
    let pq = directed_terms(a_p, a_q, bridge.cap_pq, bridge.cap_qp, delta);
    let qp = directed_terms(a_q, a_p, bridge.cap_qp, bridge.cap_pq, delta);
    let decision = TransferDecision {
        simple_pq: pq.simple(),
        simple_qp: qp.simple(),
        delta_pq: pq.delta(),
        delta_qp: qp.delta(),
    };
    (decision, pq, qp)
}

/// Maps `-0.0` to `0.0` so that printed tables never show a signed zero.
#[inline]
pub(crate) fn unsigned_zero(x: f64) -> f64 {
    x + 0.0
}
