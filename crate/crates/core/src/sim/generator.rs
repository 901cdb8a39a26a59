use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Provenance, RebalanceScenario, SimulationParams};
use crate::error::AllocError;
use crate::pipeline::AssetListing;
use crate::types::{AssetWeightBand, BridgeLink, NetworkState};

/// Redraws allowed before a scenario is emitted as is.
pub const MAX_RESAMPLES: usize = 64;

/// Draws scenario `index` of the batch seeded by `params.rng_seed`.
///
/// Each index owns an independent ChaCha stream, so a row can be reproduced
/// without generating the rows before it. Draws whose flow ratio is undefined
/// or whose outside-band amounts fall strictly inside `(0, delta)` are redrawn
/// from the same stream.
pub fn sample_scenario(params: &SimulationParams, index: u64) -> RebalanceScenario {
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    rng.set_stream(index);
    let cfg = params.pipeline_config();

    let mut scenario = draw(params, index, &mut rng);
    for _ in 0..MAX_RESAMPLES {
        match scenario.run(&cfg) {
            Err(AllocError::UndefinedRatio { .. }) => {}
            Ok(out)
                if in_delta_gap(out.assessment_p.outside_band, params.delta)
                    || in_delta_gap(out.assessment_q.outside_band, params.delta) => {}
            _ => break,
        }
        scenario = draw(params, index, &mut rng);
    }
    scenario
}

fn in_delta_gap(x: f64, delta: f64) -> bool {
    x != 0.0 && x.abs() < delta
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn draw(params: &SimulationParams, index: u64, rng: &mut ChaCha8Rng) -> RebalanceScenario {
    let slots = params.n_assets_p.max(params.n_assets_q);
    let mut assets = Vec::with_capacity(slots);
    for slot in 0..slots {
        let min = uniform(rng, params.min_weight_seed, params.max_weight_seed);
        let max = uniform(rng, min, params.max_weight_seed);
        let on_p = slot < params.n_assets_p && rng.random_bool(params.asset_availability);
        let on_q = slot < params.n_assets_q && rng.random_bool(params.asset_availability);
        let band = AssetWeightBand::raw(min, 0.5 * (min + max), max)
            .expect("uniform draws respect min <= max");
        assets.push(AssetListing {
            asset_id: format!("A{slot}"),
            band,
            on_p,
            on_q,
        });
    }
    if !assets.iter().any(|a| a.on_p) {
        assets[0].on_p = true;
    }
    if !assets.iter().any(|a| a.on_q) {
        assets[0].on_q = true;
    }

    let cap_pq = uniform(rng, params.min_bridge_capacity, params.max_bridge_capacity);
    let cap_qp = uniform(rng, params.min_bridge_capacity, params.max_bridge_capacity);
    let curr_p = uniform(rng, params.min_current_amount, params.max_current_amount);
    let curr_q = uniform(rng, params.min_current_amount, params.max_current_amount);
    let pooled = curr_p + curr_q;
    let tbd_p = uniform(rng, -pooled, params.max_current_amount);
    let tbd_q = uniform(rng, -pooled + (-tbd_p).max(0.0), params.max_current_amount);

    RebalanceScenario {
        p: NetworkState::new("P", curr_p, tbd_p),
        q: NetworkState::new("Q", curr_q, tbd_q),
        bridge: BridgeLink::new(cap_pq, cap_qp),
        assets,
        provenance: Provenance::Random {
            seed: params.rng_seed,
            index,
        },
    }
}
