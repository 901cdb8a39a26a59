//! Per-network asset weights and the capacity band each network must hold.

use crate::error::{AllocError, Result};
use crate::types::AssetWeightBand;

/// Bounds applied to an asset's network share.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimConfig {
    pub min_weight: f64,
    pub max_weight: f64,
}

impl Default for TrimConfig {
    fn default() -> Self {
        TrimConfig {
            min_weight: 0.0,
            max_weight: 1.0,
        }
    }
}

impl TrimConfig {
    pub fn new(min_weight: f64, max_weight: f64) -> Result<Self> {
        if !(min_weight.is_finite() && max_weight.is_finite() && min_weight <= max_weight) {
            return Err(AllocError::invalid(
                "trim",
                format!("expected min <= max, got [{min_weight}, {max_weight}]"),
            ));
        }
        Ok(TrimConfig {
            min_weight,
            max_weight,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CapacityBand {
    pub min_capacity: f64,
    pub max_capacity: f64,
}

/// Fraction of an asset that network P holds, proportional to post-flow totals
/// of the networks where the asset is available.
pub fn network_weight(
    available_p: bool,
    available_q: bool,
    total_with_tbd_p: f64,
    total_with_tbd_q: f64,
) -> Result<f64> {
    let ind = |on: bool| if on { 1.0 } else { 0.0 };
    let numer = ind(available_p) * total_with_tbd_p;
    let denom = numer + ind(available_q) * total_with_tbd_q;
    if denom == 0.0 {
        return Err(AllocError::UndefinedShare);
    }
    Ok(numer / denom)
}

/// Clamps P's share into the trim bounds; Q gets the complement.
pub fn trim_network_weight(w: f64, cfg: TrimConfig) -> (f64, f64) {
    let p = w.max(cfg.min_weight).min(cfg.max_weight);
    (p, 1.0 - p)
}

/// Scales the stretched band by a network share.
pub fn network_band(band: AssetWeightBand, share: f64) -> AssetWeightBand {
    AssetWeightBand {
        network_min: band.stretched_min * share,
        network_ideal: band.raw_ideal * share,
        network_max: band.stretched_max * share,
        ..band
    }
}

/// Capacity band of one network: the pooled post-flow total times the summed
/// network weights of the assets it holds.
pub fn network_capacity(total_pq_with_tbd: f64, network_bands: &[AssetWeightBand]) -> CapacityBand {
    let (sum_min, sum_max) = network_bands
        .iter()
        .fold((0.0, 0.0), |(lo, hi), b| (lo + b.network_min, hi + b.network_max));
    CapacityBand {
        min_capacity: total_pq_with_tbd * sum_min,
        max_capacity: total_pq_with_tbd * sum_max,
    }
}
