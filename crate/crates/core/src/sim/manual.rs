//! Hand-picked scenarios that exercise the special cases of the transfer calculus.

use super::{Provenance, RebalanceScenario};
use crate::pipeline::AssetListing;
use crate::types::{BridgeLink, NetworkState};

pub const MANUAL_SCENARIO_COUNT: usize = 15;

fn asset(id: &str, min: f64, ideal: f64, max: f64, on_p: bool, on_q: bool) -> AssetListing {
    AssetListing::new(id, min, ideal, max, on_p, on_q).expect("constant bands are ordered")
}

/// Two assets on both networks whose bands bracket full investment.
fn shared_assets() -> Vec<AssetListing> {
    vec![
        asset("A", 0.30, 0.40, 0.50, true, true),
        asset("B", 0.40, 0.50, 0.60, true, true),
    ]
}

/// One asset per network plus two shared ones.
fn mixed_assets() -> Vec<AssetListing> {
    vec![
        asset("P1", 0.10, 0.15, 0.20, true, false),
        asset("Q1", 0.10, 0.15, 0.20, false, true),
        asset("C", 0.25, 0.35, 0.45, true, true),
        asset("D", 0.20, 0.30, 0.40, true, true),
    ]
}

/// Single-network assets only: bands depend on the pooled total, not on each network's own.
fn split_assets() -> Vec<AssetListing> {
    vec![
        asset("P1", 0.45, 0.50, 0.55, true, false),
        asset("Q1", 0.40, 0.45, 0.50, false, true),
    ]
}

/// Single-network assets whose minimums together exceed full investment, so
/// one network's shortfall outgrows the other's excess.
fn tight_assets() -> Vec<AssetListing> {
    vec![
        asset("P1", 0.45, 0.50, 0.55, true, false),
        asset("Q1", 0.50, 0.55, 0.60, false, true),
    ]
}

/// Q tolerates a wide range, P does not.
fn wide_q_assets() -> Vec<AssetListing> {
    vec![
        asset("P1", 0.45, 0.50, 0.55, true, false),
        asset("Q1", 0.30, 0.45, 0.65, false, true),
    ]
}

fn scenario(
    name: &'static str,
    (curr_p, tbd_p): (f64, f64),
    (curr_q, tbd_q): (f64, f64),
    (cap_pq, cap_qp): (f64, f64),
    assets: Vec<AssetListing>,
) -> RebalanceScenario {
    RebalanceScenario {
        p: NetworkState::new("P", curr_p, tbd_p),
        q: NetworkState::new("Q", curr_q, tbd_q),
        bridge: BridgeLink::new(cap_pq, cap_qp),
        assets,
        provenance: Provenance::Manual(name),
    }
}

/// The fixed manual rows that open every batch.
pub fn manual_scenarios() -> Vec<RebalanceScenario> {
    vec![
        scenario("all-zero-flows", (50_000.0, 0.0), (50_000.0, 0.0), (20_000.0, 20_000.0), shared_assets()),
        scenario("deposit-only-p", (40_000.0, 20_000.0), (40_000.0, 0.0), (20_000.0, 20_000.0), mixed_assets()),
        scenario("deposit-only-q", (60_000.0, 0.0), (40_000.0, 30_000.0), (20_000.0, 20_000.0), split_assets()),
        scenario("withdrawal-within-band", (50_000.0, -5_000.0), (50_000.0, 0.0), (20_000.0, 20_000.0), mixed_assets()),
        scenario("withdrawal-exceeds-surplus", (60_000.0, 0.0), (40_000.0, -20_000.0), (30_000.0, 30_000.0), tight_assets()),
        scenario("zero-capacity", (60_000.0, 0.0), (40_000.0, -20_000.0), (0.0, 0.0), tight_assets()),
        scenario("asymmetric-capacity", (30_000.0, 0.0), (70_000.0, 10_000.0), (50_000.0, 8_000.0), tight_assets()),
        scenario("capacity-binding", (60_000.0, 0.0), (40_000.0, -20_000.0), (12_000.0, 12_000.0), tight_assets()),
        scenario("withdrawal-at-boundary", (50_000.0, -50_000.0), (50_000.0, -50_000.0), (20_000.0, 20_000.0), mixed_assets()),
        scenario("single-network-concentration", (70_000.0, 0.0), (30_000.0, 0.0), (25_000.0, 25_000.0), tight_assets()),
        scenario("trim-clamp", (90_000.0, 0.0), (10_000.0, -20_000.0), (20_000.0, 20_000.0), mixed_assets()),
        scenario("stretch-cap", (20_000.0, 30_000.0), (80_000.0, -10_000.0), (20_000.0, 20_000.0), mixed_assets()),
        scenario("inside-band-noop", (45_000.0, 5_000.0), (55_000.0, -5_000.0), (20_000.0, 20_000.0), shared_assets()),
        scenario("simple-delta-divergence", (40_000.0, 0.0), (60_000.0, 0.0), (30_000.0, 30_000.0), wide_q_assets()),
        scenario("equal-ratio", (40_000.0, 8_000.0), (60_000.0, 12_000.0), (20_000.0, 20_000.0), mixed_assets()),
    ]
}
