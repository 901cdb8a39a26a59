mod common;

use bridge_alloc::transfer::{decide, positivity_indicator, transfer_delta, transfer_simple};
use bridge_alloc::types::{BandAssessment, BridgeLink};
use bridge_alloc::DEFAULT_DELTA;
use common::{both_directions, random_bridge, random_side, rel_close, rng, Side};
use proptest::prelude::*;

fn library(p: &BandAssessment, q: &BandAssessment, b: &BridgeLink) -> [f64; 4] {
    let (s_pq, s_qp) = transfer_simple(p, q, b);
    let (d_pq, d_qp) = transfer_delta(p, q, b, DEFAULT_DELTA);
    [s_pq, s_qp, d_pq, d_qp]
}

#[test]
fn matches_branch_oracle_on_seeded_cases() {
    let mut r = rng(7);
    for case in 0..20_000 {
        let (sp, ap) = random_side(&mut r, DEFAULT_DELTA);
        let (sq, aq) = random_side(&mut r, DEFAULT_DELTA);
        assert_eq!(sp, Side::from(&ap), "case {case}");
        let b = random_bridge(&mut r);
        let got = library(&ap, &aq, &b);
        let want = both_directions(sp, sq, b, DEFAULT_DELTA);
        for k in 0..4 {
            assert!(rel_close(got[k], want[k], 1e-12), "case {case} slot {k}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn transfers_respect_directed_capacity() {
    let mut r = rng(11);
    for _ in 0..20_000 {
        let (_, ap) = random_side(&mut r, DEFAULT_DELTA);
        let (_, aq) = random_side(&mut r, DEFAULT_DELTA);
        let b = random_bridge(&mut r);
        let [s_pq, s_qp, d_pq, d_qp] = library(&ap, &aq, &b);
        for pq in [s_pq, d_pq] {
            assert!(pq <= b.cap_pq && -pq <= b.cap_qp);
        }
        for qp in [s_qp, d_qp] {
            assert!(qp <= b.cap_qp && -qp <= b.cap_pq);
        }
    }
}

#[test]
fn both_inside_band_is_a_no_op() {
    let mut r = rng(13);
    for _ in 0..5_000 {
        let (_, mut ap) = random_side(&mut r, DEFAULT_DELTA);
        let (_, mut aq) = random_side(&mut r, DEFAULT_DELTA);
        for a in [&mut ap, &mut aq] {
            a.outside_band = 0.0;
            a.max_send = a.max_send.max(0.0);
        }
        let b = random_bridge(&mut r);
        assert_eq!(library(&ap, &aq, &b), [0.0; 4]);
    }
}

#[test]
fn delta_transfer_never_overshoots_the_bands() {
    // Flow out of a network never exceeds what it can spare, flow in never
    // exceeds what the other side can absorb.
    let mut r = rng(17);
    for _ in 0..20_000 {
        let (_, ap) = random_side(&mut r, DEFAULT_DELTA);
        let (_, aq) = random_side(&mut r, DEFAULT_DELTA);
        let b = random_bridge(&mut r);
        let (d, _, _) = decide(&ap, &aq, &b, DEFAULT_DELTA);
        let tol = |x: f64| 1e-9 * x.abs().max(1.0);
        for (amount, from, to) in [(d.delta_pq, &ap, &aq), (-d.delta_pq, &aq, &ap), (d.delta_qp, &aq, &ap), (-d.delta_qp, &ap, &aq)] {
            if amount > 0.0 {
                assert!(amount <= from.max_send + tol(amount), "{ap:?} {aq:?} {b:?}");
                assert!(amount <= to.max_receive + tol(amount), "{ap:?} {aq:?} {b:?}");
            }
        }
    }
}

/// Sender surplus no larger than the receiver's deficit, or both on the
/// same side of their bands: the alternate formulation is antisymmetric.
fn guaranteed(p: &BandAssessment, q: &BandAssessment) -> bool {
    let (op, oq) = (p.outside_band, q.outside_band);
    (op >= 0.0 && oq >= 0.0 && (op == 0.0) == (oq == 0.0))
        || (op <= 0.0 && oq <= 0.0)
        || (op > 0.0 && oq < 0.0 && op <= -oq)
        || (oq > 0.0 && op < 0.0 && oq <= -op)
}

#[test]
fn antisymmetric_on_guaranteed_subspace() {
    let mut r = rng(19);
    let mut checked = 0;
    for _ in 0..50_000 {
        let (_, ap) = random_side(&mut r, DEFAULT_DELTA);
        let (_, aq) = random_side(&mut r, DEFAULT_DELTA);
        if !guaranteed(&ap, &aq) {
            continue;
        }
        checked += 1;
        let b = random_bridge(&mut r);
        let [_, _, d_pq, d_qp] = library(&ap, &aq, &b);
        assert!((d_pq + d_qp).abs() <= 1e-9, "{ap:?} {aq:?} {b:?} -> {d_pq} {d_qp}");
    }
    assert!(checked > 10_000);
}

#[test]
fn surplus_beyond_deficit_breaks_antisymmetry() {
    // P is 100 above its band, Q 30 below with room for 400: the P-side
    // expression sends the full surplus, the Q-side one only pulls the deficit.
    let p = BandAssessment {
        outside_band: 100.0,
        max_send: 500.0,
        ..Default::default()
    };
    let q = BandAssessment {
        outside_band: -30.0,
        max_receive: 400.0,
        ..Default::default()
    };
    let (pq, qp) = transfer_delta(&p, &q, &BridgeLink::new(1_000.0, 1_000.0), DEFAULT_DELTA);
    assert_eq!((pq, qp), (100.0, -30.0));
}

#[test]
fn simple_formulation_can_be_lopsided() {
    // The worked case from the pipeline: 50 above on P, 120 below on Q.
    let p = BandAssessment {
        outside_band: 50.0,
        max_send: 150.0,
        ..Default::default()
    };
    let q = BandAssessment {
        outside_band: -120.0,
        max_receive: 200.0,
        ..Default::default()
    };
    let (pq, qp) = transfer_simple(&p, &q, &BridgeLink::new(130.0, 130.0));
    assert_eq!((pq, qp), (50.0, -120.0));
    let (pq, qp) = transfer_delta(&p, &q, &BridgeLink::new(130.0, 130.0), DEFAULT_DELTA);
    assert_eq!((pq, qp), (120.0, -120.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn indicator_is_a_gate_outside_the_gap(x in prop_oneof![
        -1e9..-DEFAULT_DELTA,
        Just(0.0),
        DEFAULT_DELTA..1e9,
        Just(-DEFAULT_DELTA),
    ]) {
        let want = if x >= 0.0 { 1.0 } else { 0.0 };
        prop_assert_eq!(positivity_indicator(x, DEFAULT_DELTA), want);
    }

    #[test]
    fn oracle_agrees_for_arbitrary_positions(
        tp in -1e7f64..1e7, minp in 0f64..1e7, wp in 0f64..1e7,
        tq in -1e7f64..1e7, minq in 0f64..1e7, wq in 0f64..1e7,
        cpq in 0f64..1e7, cqp in 0f64..1e7,
    ) {
        use bridge_alloc::allocator::CapacityBand;
        use bridge_alloc::transfer::assess_band;
        let ap = assess_band(tp, CapacityBand { min_capacity: minp, max_capacity: minp + wp });
        let aq = assess_band(tq, CapacityBand { min_capacity: minq, max_capacity: minq + wq });
        prop_assume!(!(ap.outside_band < 0.0 && ap.outside_band > -DEFAULT_DELTA));
        prop_assume!(!(aq.outside_band < 0.0 && aq.outside_band > -DEFAULT_DELTA));
        let sp = common::side_from_band(tp, minp, minp + wp);
        let sq = common::side_from_band(tq, minq, minq + wq);
        let b = BridgeLink::new(cpq, cqp);
        let got = library(&ap, &aq, &b);
        let want = both_directions(sp, sq, b, DEFAULT_DELTA);
        for k in 0..4 {
            prop_assert!(rel_close(got[k], want[k], 1e-12), "slot {}: {:?} vs {:?}", k, got, want);
        }
    }
}
