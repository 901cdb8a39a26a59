//! Reference implementations written independently of the library, plus
//! seeded scenario builders shared by the integration tests.
#![allow(dead_code)]

use bridge_alloc::allocator::CapacityBand;
use bridge_alloc::pipeline::{AssetListing, PipelineConfig};
use bridge_alloc::transfer::assess_band;
use bridge_alloc::types::{BandAssessment, BridgeLink, NetworkState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outside-band position of one network, as the oracles see it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Side {
    pub outside: f64,
    pub send: f64,
    pub receive: f64,
}

impl From<&BandAssessment> for Side {
    fn from(a: &BandAssessment) -> Self {
        Side {
            outside: a.outside_band,
            send: a.max_send,
            receive: a.max_receive,
        }
    }
}

/// Band position from a total and its band, one branch per region.
pub fn side_from_band(total: f64, min: f64, max: f64) -> Side {
    if total < min {
        Side {
            outside: total - min,
            send: 0.0,
            receive: max - total,
        }
    } else if total > max {
        Side {
            outside: total - max,
            send: total - min,
            receive: 0.0,
        }
    } else {
        Side {
            outside: 0.0,
            send: total - min,
            receive: max - total,
        }
    }
}

/// Smallest of a non-empty list, by comparison only.
fn smallest(xs: &[f64]) -> f64 {
    let mut best = xs[0];
    for &x in &xs[1..] {
        if x < best {
            best = x;
        }
    }
    best
}

/// The sign gate, case by case.
pub fn indicator_cases(x: f64, delta: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else if x <= -delta {
        0.0
    } else {
        (x + delta) / (delta - x)
    }
}

/// Excess pushed from sender to receiver in the simple formulation.
pub fn first_simple(s: Side, r: Side, cap_out: f64) -> f64 {
    if s.outside <= 0.0 {
        0.0
    } else {
        smallest(&[s.outside, r.receive, cap_out])
    }
}

/// Shortfall pulled into the sender; zero or negative.
pub fn second_term(s: Side, r: Side, cap_in: f64) -> f64 {
    if s.outside >= 0.0 {
        0.0
    } else {
        -smallest(&[-s.outside, r.send, cap_in])
    }
}

/// First term of the alternate formulation.
pub fn first_delta(s: Side, r: Side, cap_out: f64, delta: f64) -> f64 {
    let larger = if s.outside >= -r.outside {
        s.outside
    } else {
        -r.outside
    };
    let gated = larger * indicator_cases(s.outside, delta);
    if gated <= 0.0 {
        return 0.0;
    }
    smallest(&[gated, r.receive, s.send, cap_out])
}

/// (simple, delta) for one direction.
pub fn directed(s: Side, r: Side, cap_out: f64, cap_in: f64, delta: f64) -> (f64, f64) {
    let second = second_term(s, r, cap_in);
    (
        first_simple(s, r, cap_out) + second,
        first_delta(s, r, cap_out, delta) + second,
    )
}

/// (simple_pq, simple_qp, delta_pq, delta_qp).
pub fn both_directions(p: Side, q: Side, bridge: BridgeLink, delta: f64) -> [f64; 4] {
    let (s_pq, d_pq) = directed(p, q, bridge.cap_pq, bridge.cap_qp, delta);
    let (s_qp, d_qp) = directed(q, p, bridge.cap_qp, bridge.cap_pq, delta);
    [s_pq, s_qp, d_pq, d_qp]
}

/// Band edges, stretch and outside-band amounts of a two-network scenario,
/// transcribed step by step.
#[derive(Debug, Clone, Copy)]
pub struct Transcribed {
    pub diff: f64,
    pub raw_stretch: f64,
    pub stretch: f64,
    pub min_p: f64,
    pub max_p: f64,
    pub min_q: f64,
    pub max_q: f64,
    pub p: Side,
    pub q: Side,
}

pub fn transcribe(
    p: &NetworkState,
    q: &NetworkState,
    bridge: BridgeLink,
    assets: &[AssetListing],
    cfg: &PipelineConfig,
) -> Transcribed {
    let ratio = |tbd: f64, curr: f64| if curr == 0.0 { 0.0 } else { tbd / curr };
    let diff = (ratio(p.tbd, p.current_total) - ratio(q.tbd, q.current_total)).abs();
    let pooled_capital = p.current_total + q.current_total + bridge.cap_pq;
    let raw_stretch = if pooled_capital == 0.0 {
        diff
    } else {
        diff * (1.0 + (p.tbd + q.tbd) / pooled_capital)
    };
    let stretch = if raw_stretch.abs() > cfg.max_stretch {
        cfg.max_stretch
    } else {
        raw_stretch.abs()
    };

    let tot_p = p.current_total + p.tbd;
    let tot_q = q.current_total + q.tbd;
    let pooled = tot_p + tot_q;
    let (mut lo_p, mut hi_p, mut lo_q, mut hi_q) = (0.0, 0.0, 0.0, 0.0);
    for a in assets {
        let lo = a.band.raw_min * (1.0 - stretch);
        let hi = a.band.raw_max * (1.0 + stretch);
        let (share_p, share_q) = if a.on_p && a.on_q {
            let mut w = if pooled == 0.0 { 0.0 } else { tot_p / pooled };
            if w < cfg.trim.min_weight {
                w = cfg.trim.min_weight;
            }
            if w > cfg.trim.max_weight {
                w = cfg.trim.max_weight;
            }
            (w, 1.0 - w)
        } else if a.on_p {
            (1.0, 0.0)
        } else if a.on_q {
            (0.0, 1.0)
        } else {
            (0.0, 0.0)
        };
        if a.on_p {
            lo_p += lo * share_p;
            hi_p += hi * share_p;
        }
        if a.on_q {
            lo_q += lo * share_q;
            hi_q += hi * share_q;
        }
    }
    let (min_p, max_p, min_q, max_q) = (pooled * lo_p, pooled * hi_p, pooled * lo_q, pooled * hi_q);
    Transcribed {
        diff,
        raw_stretch,
        stretch,
        min_p,
        max_p,
        min_q,
        max_q,
        p: side_from_band(tot_p, min_p, max_p),
        q: side_from_band(tot_q, min_q, max_q),
    }
}

/// `|a - b|` within `tol` relative to the larger magnitude (floor 1).
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// A random band and total, away from the fractional zone of the indicator:
/// the oracle's view and the library's assessment of the same position.
pub fn random_side(rng: &mut ChaCha8Rng, delta: f64) -> (Side, BandAssessment) {
    let scale = 10f64.powi(rng.random_range(0..7));
    let min = rng.random_range(0.0..1.0) * scale;
    let max = min + rng.random_range(0.0..1.0) * scale;
    let mut total = match rng.random_range(0..5) {
        0 => min,
        1 => max,
        _ => rng.random_range(-0.5..2.0) * scale,
    };
    if total < min && total > min - delta {
        total = min;
    }
    let band = CapacityBand {
        min_capacity: min,
        max_capacity: max,
    };
    (side_from_band(total, min, max), assess_band(total, band))
}

pub fn random_bridge(rng: &mut ChaCha8Rng) -> BridgeLink {
    let pick = |rng: &mut ChaCha8Rng| match rng.random_range(0..4) {
        0 => 0.0,
        _ => rng.random_range(0.0..1.0) * 10f64.powi(rng.random_range(0..7)),
    };
    BridgeLink::new(pick(rng), pick(rng))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
